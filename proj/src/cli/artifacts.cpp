#include "artifacts.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "polyflow/errors.hpp"

namespace polyflow {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_diagnostics_header(std::ostream& os) {
    os << kDiagnosticsHeader << '\n';
}

void write_diagnostics_row(std::ostream& os, const StepRecord& r) {
    os << r.step << ',' << format_double(r.t) << ','
       << format_double(r.energy.kinetic) << ','
       << format_double(r.energy.internal) << ','
       << format_double(r.energy.entropy) << ','
       << format_double(r.energy.interaction) << ','
       << format_double(r.energy.dissipation) << ','
       << format_double(r.energy.work) << ','
       << format_double(r.energy.total) << ','
       << format_double(r.energy.residual) << ',' << (r.energy.pass ? 1 : 0)
       << ',' << format_double(r.mass_rho_err) << ','
       << format_double(r.mass_psi_err) << ',' << format_double(r.min_rho)
       << ',' << format_double(r.min_psi) << ',' << r.picard_iters << '\n';
}

namespace {

double parse_num(const std::string& cell, const std::string& path, int line) {
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ParseError(path + ": bad number \"" + cell + "\"", line);
    return v;
}

}  // namespace

std::vector<DiagRow> read_diagnostics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file", 1);
    if (line != kDiagnosticsHeader)
        throw ParseError(path + ": unexpected header", 1);

    std::vector<DiagRow> rows;
    int ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 16)
            throw ParseError(path + ": expected 16 columns", ln);
        DiagRow r;
        r.step = static_cast<long>(parse_num(cells[0], path, ln));
        r.t = parse_num(cells[1], path, ln);
        r.kinetic = parse_num(cells[2], path, ln);
        r.internal = parse_num(cells[3], path, ln);
        r.entropy = parse_num(cells[4], path, ln);
        r.interaction = parse_num(cells[5], path, ln);
        r.dissipation = parse_num(cells[6], path, ln);
        r.work = parse_num(cells[7], path, ln);
        r.total = parse_num(cells[8], path, ln);
        r.residual = parse_num(cells[9], path, ln);
        r.pass = static_cast<int>(parse_num(cells[10], path, ln));
        r.mass_rho_err = parse_num(cells[11], path, ln);
        r.mass_psi_err = parse_num(cells[12], path, ln);
        r.min_rho = parse_num(cells[13], path, ln);
        r.min_psi = parse_num(cells[14], path, ln);
        r.picard_iters = static_cast<int>(parse_num(cells[15], path, ln));
        rows.push_back(r);
    }
    return rows;
}

void dump_field(const std::string& path_base, const std::string& field,
                const std::vector<double>& data, const std::vector<int>& shape,
                const SimConfig& cfg, double t) {
    std::size_t count = 1;
    for (int s : shape) count *= static_cast<std::size_t>(s);
    if (count != data.size())
        throw AssemblyError("dump_field: shape does not match data size");

    std::ofstream raw(path_base + ".f64", std::ios::binary);
    if (!raw) throw ParseError("cannot write " + path_base + ".f64");
    for (double v : data) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i)
            bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
        raw.write(reinterpret_cast<const char*>(bytes), 8);
    }
    raw.close();
    if (!raw) throw ParseError("write failed for " + path_base + ".f64");

    nlohmann::json side;
    side["field"] = field;
    side["shape"] = shape;
    side["grid"] = {{"nx", cfg.nx},
                    {"ny", cfg.ny},
                    {"lx", cfg.lx},
                    {"ly", cfg.ly},
                    {"bc", cfg.bc == Bc::Periodic ? "periodic" : "noslip"},
                    {"nq_r", cfg.nq_r},
                    {"nq_theta", cfg.nq_theta}};
    side["t"] = t;
    side["byte_order"] = "LE";
    side["dtype"] = "f64";
    std::ofstream js(path_base + ".json");
    if (!js) throw ParseError("cannot write " + path_base + ".json");
    js << side.dump(2) << '\n';
}

std::vector<double> read_f64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0)
        throw ParseError(path + ": size is not a multiple of 8");
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k)
            bits |= static_cast<std::uint64_t>(bytes[8 * i + k]) << (8 * k);
        double v;
        std::memcpy(&v, &bits, sizeof v);
        out[i] = v;
    }
    return out;
}

}  // namespace polyflow
