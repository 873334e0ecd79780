// Command line front end: run a configured simulation, audit a finished run
// from its artifacts, or exercise the invariant suite headless.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "artifacts.hpp"
#include "config_io.hpp"
#include "json.hpp"
#include "polyflow/errors.hpp"
#include "polyflow/grid.hpp"
#include "polyflow/model.hpp"
#include "polyflow/psi_ops.hpp"
#include "polyflow/regularization.hpp"
#include "polyflow/scheme.hpp"
#include "polyflow/stress.hpp"

namespace fs = std::filesystem;
using namespace polyflow;
using nlohmann::json;

namespace {

constexpr int kExitThreshold = 1;  // run completed, too many failed pass flags
constexpr int kExitConfig = 2;     // unreadable or inadmissible configuration
constexpr int kExitSolver = 3;     // iteration diverged mid-run
constexpr int kExitAudit = 1;      // check-energy found an inconsistency

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void dump_state(const Simulation& sim, const fs::path& dir, int step, double t) {
    const SimConfig& c = sim.config();
    const State& s = sim.state();
    const auto base = [&](const char* field) {
        return (dir / (c.out_prefix + "_" + field + "_" + std::to_string(step)))
            .string();
    };
    const std::vector<int> cell_shape{c.nx, c.ny};
    dump_field(base("rho"), "rho", s.rho, cell_shape, c, t);
    dump_field(base("ux"), "ux", s.ux, cell_shape, c, t);
    dump_field(base("uy"), "uy", s.uy, cell_shape, c, t);
    dump_field(base("psi"), "psi", s.psi, {c.nx, c.ny, c.nq_r, c.nq_theta}, c, t);
    Field vr;
    sim.marginal(vr);
    dump_field(base("varrho"), "varrho", vr, cell_shape, c, t);
}

void write_meta(const fs::path& dir, const SimConfig& cfg, const Simulation* sim,
                const std::string& status, int steps_done, int pass_count) {
    json meta;
    meta["status"] = status;
    meta["dt"] = cfg.T / cfg.N;
    meta["steps_completed"] = steps_done;
    meta["pass_count"] = pass_count;
    meta["pass_fraction"] = steps_done > 0
                                ? static_cast<double>(pass_count) / steps_done
                                : 1.0;
    if (sim) {
        meta["tol_energy"] = sim->tol_energy();
        meta["warnings"] = sim->warnings();
    }
    meta["config"] = json::parse(serialize_config(cfg));
    std::ofstream out(dir / (cfg.out_prefix + "_meta.json"));
    out << meta.dump(2) << '\n';
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool quiet) {
    const SimConfig cfg = parse_config(read_file(config_path));
    Simulation sim(cfg);
    for (const auto& w : sim.warnings()) std::cerr << "warning: " << w << '\n';

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / (cfg.out_prefix + "_diagnostics.csv"));
    if (!csv) throw ParseError("cannot write diagnostics under " + out_dir);
    write_diagnostics_header(csv);
    write_diagnostics_row(csv, sim.initial_record());
    if (cfg.dump_fields) dump_state(sim, dir, 0, 0.0);

    int pass_count = 0;
    int steps_done = 0;
    try {
        for (int n = 1; n <= cfg.N; ++n) {
            const StepRecord rec = sim.advance();
            write_diagnostics_row(csv, rec);
            csv.flush();
            if (rec.energy.pass) ++pass_count;
            ++steps_done;
            if (cfg.dump_fields && (n % cfg.out_every == 0 || n == cfg.N))
                dump_state(sim, dir, n, rec.t);
        }
    } catch (const PicardDiverged& e) {
        write_meta(dir, cfg, &sim, "diverged", steps_done, pass_count);
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    write_meta(dir, cfg, &sim, "completed", steps_done, pass_count);

    const double fraction =
        steps_done > 0 ? static_cast<double>(pass_count) / steps_done : 1.0;
    if (!quiet) {
        std::cout << "completed " << steps_done << " steps; energy pass "
                  << pass_count << "/" << steps_done << " (tol "
                  << format_double(sim.tol_energy()) << ")\n";
        std::cout << "artifacts: "
                  << (dir / (cfg.out_prefix + "_diagnostics.csv")).string()
                  << '\n';
    }
    return fraction >= cfg.pass_threshold ? 0 : kExitThreshold;
}

// ---------------------------------------------------------------------------
// check-energy: everything below re-derives the ledger from artifacts only.

struct Audit {
    bool ok = true;
    void check(bool cond, const std::string& label, const std::string& detail) {
        std::cout << (cond ? "[ok]   " : "[FAIL] ") << label;
        if (!cond && !detail.empty()) std::cout << " (" << detail << ")";
        std::cout << '\n';
        ok = ok && cond;
    }
};

// Recomputed from a dumped state with library primitives; mirrors the ledger
// definition of the stored energy but shares none of the stepper.
struct EnergyParts {
    double kinetic, internal, entropy, interaction;
};

EnergyParts energy_from_fields(const SimConfig& cfg, const ModelParams& mp,
                               const OmegaGrid& og, const ConfigGrid& cg,
                               const Field& rho, const Field& ux,
                               const Field& uy, const Field& psi) {
    EnergyParts p{0.0, 0.0, 0.0, 0.0};
    for (int c = 0; c < og.cells(); ++c) {
        p.kinetic += rho[c] * (ux[c] * ux[c] + uy[c] * uy[c]);
        p.internal += pressure_primitive(std::max(rho[c], 0.0), mp);
    }
    p.kinetic *= 0.5 * og.cell_w;
    p.internal *= og.cell_w;

    const int nq = cg.nodes();
    for (int c = 0; c < og.cells(); ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * nq;
        double sc = 0.0;
        for (int q = 0; q < nq; ++q)
            sc += cg.weight(q) *
                  entropy_FL(std::max(psi[base + q], 0.0), mp.L_cut).value;
        p.entropy += sc;
    }
    p.entropy *= cfg.k_temp * og.cell_w;

    Field vr;
    psi_marginal(og, cg, psi, vr);
    for (int c = 0; c < og.cells(); ++c) p.interaction += vr[c] * vr[c];
    p.interaction *= cfg.z_int * og.cell_w;
    return p;
}

int cmd_check_energy(const std::string& run_dir, std::string prefix) {
    const fs::path dir(run_dir);
    if (prefix.empty()) {
        std::vector<std::string> found;
        for (const auto& e : fs::directory_iterator(dir)) {
            const std::string name = e.path().filename().string();
            const std::string suffix = "_meta.json";
            if (name.size() > suffix.size() &&
                name.compare(name.size() - suffix.size(), suffix.size(),
                             suffix) == 0)
                found.push_back(name.substr(0, name.size() - suffix.size()));
        }
        if (found.size() != 1)
            throw ParseError("expected exactly one *_meta.json under " +
                             run_dir + "; pass --prefix");
        prefix = found[0];
    }

    const json meta = json::parse(read_file((dir / (prefix + "_meta.json")).string()));
    const SimConfig cfg = parse_config(meta.at("config").dump());
    const double tol = meta.at("tol_energy").get<double>();
    const double dt = meta.at("dt").get<double>();
    const auto rows =
        read_diagnostics((dir / (prefix + "_diagnostics.csv")).string());

    Audit a;
    a.check(!rows.empty() && rows[0].step == 0, "diagnostics start at step 0",
            "first row missing");
    bool steps_ok = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        steps_ok = steps_ok && rows[i].step == rows[i - 1].step + 1;
    a.check(steps_ok, "steps are consecutive", "");

    bool flags_ok = true, totals_ok = true, recur_ok = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const DiagRow& r = rows[i];
        if ((r.residual <= tol) != (r.pass == 1)) {
            flags_ok = false;
            detail = "step " + std::to_string(r.step);
        }
        const double sum = r.kinetic + r.internal + r.entropy + r.interaction;
        if (std::abs(sum - r.total) > 1e-12 * std::max(1.0, std::abs(r.total)))
            totals_ok = false;
        if (i > 0) {
            const double recomputed =
                r.total - rows[i - 1].total + dt * (r.dissipation - r.work);
            if (std::abs(recomputed - r.residual) >
                1e-10 * std::max(1.0, std::abs(r.total)))
                recur_ok = false;
        }
    }
    a.check(flags_ok, "pass flags match residual <= tol_energy", detail);
    a.check(totals_ok, "totals equal the sum of their parts", "");
    a.check(recur_ok, "residuals reproduce from totals, dissipation, work", "");

    // audit dumped states independently of the solver path
    const SpringChain chain =
        make_chain(cfg.K, cfg.d, cfg.b, linear_chain_rouse(cfg.K));
    const OmegaGrid og = make_omega_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly, cfg.bc);
    const ConfigGrid cg = make_config_grid(chain, cfg.nq_r, cfg.nq_theta);
    const ModelParams mp = make_model_params(cfg);
    int audited = 0;
    bool fields_ok = true;
    std::string field_detail;
    for (const DiagRow& r : rows) {
        const auto base = [&](const char* f) {
            return (dir / (prefix + "_" + f + "_" + std::to_string(r.step)))
                .string();
        };
        if (!fs::exists(base("rho") + ".f64")) continue;
        const Field rho = read_f64(base("rho") + ".f64");
        const Field ux = read_f64(base("ux") + ".f64");
        const Field uy = read_f64(base("uy") + ".f64");
        const Field psi = read_f64(base("psi") + ".f64");
        const EnergyParts p = energy_from_fields(cfg, mp, og, cg, rho, ux, uy, psi);
        const double scale = std::max(1.0, std::abs(r.total));
        const bool match =
            std::abs(p.kinetic - r.kinetic) <= 1e-11 * scale &&
            std::abs(p.internal - r.internal) <= 1e-11 * scale &&
            std::abs(p.entropy - r.entropy) <= 1e-11 * scale &&
            std::abs(p.interaction - r.interaction) <= 1e-11 * scale;
        if (!match && fields_ok) field_detail = "step " + std::to_string(r.step);
        fields_ok = fields_ok && match;

        Field vr_dump = read_f64(base("varrho") + ".f64");
        Field vr;
        psi_marginal(og, cg, psi, vr);
        bool vr_ok = vr.size() == vr_dump.size();
        for (std::size_t c = 0; vr_ok && c < vr.size(); ++c)
            vr_ok = vr[c] == vr_dump[c];
        if (!vr_ok && fields_ok) field_detail = "varrho step " + std::to_string(r.step);
        fields_ok = fields_ok && vr_ok;

        const json side = json::parse(read_file(base("rho") + ".json"));
        if (side.at("t").get<double>() != r.t) {
            fields_ok = false;
            field_detail = "sidecar t, step " + std::to_string(r.step);
        }
        ++audited;
    }
    a.check(fields_ok,
            "dumped states reproduce the stored energies (" +
                std::to_string(audited) + " audited)",
            field_detail);

    int pass_count = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) pass_count += rows[i].pass;
    const double fraction =
        rows.size() > 1 ? static_cast<double>(pass_count) / (rows.size() - 1) : 1.0;
    a.check(fraction >= cfg.pass_threshold,
            "energy pass fraction meets the threshold",
            format_double(fraction) + " < " + format_double(cfg.pass_threshold));

    std::cout << (a.ok ? "check-energy: consistent\n"
                       : "check-energy: inconsistency found\n");
    return a.ok ? 0 : kExitAudit;
}

// ---------------------------------------------------------------------------
// selftest: the invariant suite, headless.

int cmd_selftest(unsigned seed) {
    Audit a;

    {  // cutoff entropy identities on randomized samples
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> us(0.0, 40.0);
        std::uniform_real_distribution<double> uk(1e-12, 1.0);
        const double L = 12.0, delta = 0.1;
        bool ok = true;
        for (int i = 0; i < 100000 && ok; ++i) {
            const double s = us(rng);
            const auto j = entropy_FL(s, L);
            ok = ok && j.second == 1.0 / cutoff_beta(s, L);
            const auto jd = entropy_FL_delta(s, L, delta);
            ok = ok && jd.value <= j.value + 1e-15 * std::abs(j.value);
            const double kappa = uk(rng);
            const auto jk = entropy_FL_delta(kappa * s, L, delta);
            ok = ok && jk.value <= jd.value + 1.0 + 1e-12;
        }
        a.check(ok, "cutoff entropy identities (1e5 samples)", "");
    }

    {  // quadrature normalization and moments
        const SpringChain chain = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
        const ConfigGrid cg = make_config_grid(chain, 32, 64);
        const SpringGrid& sg = cg.spring[0];
        double wsum = 0.0;
        for (int q = 0; q < sg.nodes(); ++q) wsum += sg.w[q];
        const double part_ref = 2.0 * M_PI * 4.0 / (4.0 + 2.0);
        const double m2_ref = 2.0 * 4.0 / (4.0 + 4.0);
        a.check(std::abs(wsum - 1.0) <= 1e-10, "quadrature weights sum to one",
                format_double(wsum));
        a.check(std::abs(sg.partition_estimate - part_ref) <= 1e-8 * part_ref,
                "partition integral matches the closed form",
                format_double(sg.partition_estimate));
        a.check(std::abs(grid_second_moment(sg) - m2_ref) <= 1e-6 * m2_ref,
                "second moment matches the closed form", "");
    }

    {  // equilibrium stress
        const SpringChain chain = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
        const OmegaGrid og = make_omega_grid(4, 4, 1.0, 1.0, Bc::Periodic);
        const ConfigGrid cg = make_config_grid(chain, 32, 32);
        Field psi(static_cast<std::size_t>(og.cells()) * cg.nodes(), 1.0);
        std::vector<SymTensorField> cf;
        kramers_tensor(og, cg, psi, cf);
        double err = 0.0;
        for (int c = 0; c < og.cells(); ++c) {
            err = std::max(err, std::abs(cf[0].xx[c] - 1.0));
            err = std::max(err, std::abs(cf[0].yy[c] - 1.0));
            err = std::max(err, std::abs(cf[0].xy[c]));
        }
        a.check(err <= 5e-4, "equilibrium conformation tensor is the identity",
                format_double(err));
        SymTensorField tau;
        extra_stress(og, cg, psi, 0.5, 0.1, tau);
        double terr = 0.0;
        for (int c = 0; c < og.cells(); ++c) {
            terr = std::max(terr, std::abs(tau.xx[c] + 0.6));
            terr = std::max(terr, std::abs(tau.yy[c] + 0.6));
            terr = std::max(terr, std::abs(tau.xy[c]));
        }
        a.check(terr <= 5e-4, "equilibrium extra stress is -(k+z) I",
                format_double(terr));
    }

    {  // stepper fixed point and conservation
        SimConfig cfg;
        cfg.nx = cfg.ny = 8;
        cfg.nq_r = 8;
        cfg.nq_theta = 12;
        cfg.T = 0.025;
        cfg.N = 5;
        Simulation sim(cfg);
        const State s0 = sim.state();
        bool iters_ok = true;
        for (int n = 0; n < 5; ++n) iters_ok = iters_ok && sim.advance().picard_iters == 1;
        bool fixed = true;
        for (std::size_t i = 0; i < s0.rho.size(); ++i)
            fixed = fixed && sim.state().rho[i] == s0.rho[i] &&
                    sim.state().ux[i] == s0.ux[i] && sim.state().uy[i] == s0.uy[i];
        for (std::size_t i = 0; i < s0.psi.size(); ++i)
            fixed = fixed && sim.state().psi[i] == s0.psi[i];
        a.check(iters_ok && fixed, "equilibrium is a one-sweep fixed point", "");

        SimConfig fc = cfg;
        fc.forcing = ForcingKind::Vortex;
        fc.f_amp = 0.05;
        Simulation fsim(fc);
        bool cons = true, green = true;
        for (int n = 0; n < 5; ++n) {
            const auto rec = fsim.advance();
            cons = cons && rec.mass_rho_err <= 1e-12 && rec.mass_psi_err <= 1e-12;
            green = green && rec.energy.pass;
        }
        a.check(cons, "forced run conserves both masses to 1e-12", "");
        a.check(green, "forced run keeps the energy ledger green", "");
    }

    std::cout << (a.ok ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    return a.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finitely extensible polymer flow solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", run_dir, prefix;
    bool quiet = false;
    unsigned seed = 1234;

    auto* sim = app.add_subcommand("simulate", "run a configured simulation");
    sim->add_option("config", config_path, "JSON configuration file")->required();
    sim->add_option("--out-dir", out_dir, "artifact directory (default .)");
    sim->add_flag("--quiet", quiet, "suppress the summary line");

    auto* self = app.add_subcommand("selftest", "run the invariant suite headless");
    self->add_option("--seed", seed, "sampling seed (default 1234)");

    auto* chk = app.add_subcommand("check-energy",
                                   "re-verify a finished run from its artifacts");
    chk->add_option("run-dir", run_dir, "directory holding the artifacts")
        ->required();
    chk->add_option("--prefix", prefix, "artifact prefix (default: autodetect)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_dir, quiet);
        if (self->parsed()) return cmd_selftest(seed);
        return cmd_check_energy(run_dir, prefix);
    } catch (const ParseError& e) {
        std::cerr << "error";
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        std::cerr << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}
