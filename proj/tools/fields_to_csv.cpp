// Converts a dumped field (raw little-endian f64 plus its JSON sidecar) to
// CSV on stdout so runs can be inspected without custom readers.
//
// Usage: fields_to_csv <base>            reads <base>.f64 and <base>.json
//        fields_to_csv <base> out.csv    writes to a file instead
//
// Planar fields come out as x,y,value rows; configuration-space fields add
// the two q indices, since the node coordinates live in the solver, not in
// the sidecar.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artifacts.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || argc > 3) {
        std::fprintf(stderr, "usage: %s <dump-base> [out.csv]\n", argv[0]);
        return 2;
    }
    try {
        const std::string base = argv[1];
        const auto meta = nlohmann::json::parse(slurp(base + ".json"));
        const auto shape = meta.at("shape").get<std::vector<long>>();
        const auto grid = meta.at("grid");
        const long nx = grid.at("nx").get<long>();
        const long ny = grid.at("ny").get<long>();
        const double lx = grid.at("lx").get<double>();
        const double ly = grid.at("ly").get<double>();
        if (meta.at("dtype").get<std::string>() != "f64" ||
            meta.at("byte_order").get<std::string>() != "LE")
            throw std::runtime_error("unsupported dump encoding in " + base + ".json");

        const std::vector<double> data = polyflow::read_f64(base + ".f64");
        long expect = 1;
        for (long s : shape) expect *= s;
        if (expect != static_cast<long>(data.size()))
            throw std::runtime_error("shape does not match payload size");
        if (shape.size() != 2 && shape.size() != 4)
            throw std::runtime_error("expected a rank-2 or rank-4 dump");
        if (shape[0] != nx || shape[1] != ny)
            throw std::runtime_error("shape disagrees with the grid block");

        std::FILE* out = stdout;
        if (argc == 3) {
            out = std::fopen(argv[2], "w");
            if (!out) throw std::runtime_error(std::string("cannot write ") + argv[2]);
        }

        const double hx = lx / static_cast<double>(nx);
        const double hy = ly / static_cast<double>(ny);
        if (shape.size() == 2) {
            std::fprintf(out, "x,y,value\n");
            for (long i = 0; i < nx; ++i)
                for (long j = 0; j < ny; ++j)
                    std::fprintf(out, "%s,%s,%s\n",
                                 polyflow::format_double((i + 0.5) * hx).c_str(),
                                 polyflow::format_double((j + 0.5) * hy).c_str(),
                                 polyflow::format_double(data[i * ny + j]).c_str());
        } else {
            const long nr = shape[2], nt = shape[3];
            std::fprintf(out, "x,y,iq_r,iq_theta,value\n");
            for (long i = 0; i < nx; ++i)
                for (long j = 0; j < ny; ++j)
                    for (long r = 0; r < nr; ++r)
                        for (long t = 0; t < nt; ++t)
                            std::fprintf(
                                out, "%s,%s,%ld,%ld,%s\n",
                                polyflow::format_double((i + 0.5) * hx).c_str(),
                                polyflow::format_double((j + 0.5) * hy).c_str(), r, t,
                                polyflow::format_double(
                                    data[((i * ny + j) * nr + r) * nt + t])
                                    .c_str());
        }
        if (out != stdout) std::fclose(out);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fields_to_csv: %s\n", e.what());
        return 1;
    }
}
