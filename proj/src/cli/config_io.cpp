#include "config_io.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "polyflow/errors.hpp"

namespace polyflow {

using nlohmann::json;

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + end, '\n'));
}

[[noreturn]] void bad(const std::string& msg) { throw ParseError(msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) bad("unknown key \"" + where + it.key() + "\"");
    }
}

double num(const json& obj, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) bad(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

int integer(const json& obj, const char* key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) bad(std::string("\"") + key + "\" must be an integer");
    return v.get<int>();
}

bool boolean(const json& obj, const char* key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) bad(std::string("\"") + key + "\" must be a boolean");
    return v.get<bool>();
}

std::string str(const json& obj, const char* key, const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) bad(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<double> num_list(const json& obj, const char* key,
                             std::vector<double> dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_array()) bad(std::string("\"") + key + "\" must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) bad(std::string("\"") + key + "\" must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

const json& section(const json& root, const char* key) {
    static const json empty = json::object();
    if (!root.contains(key)) return empty;
    const json& v = root.at(key);
    if (!v.is_object()) bad(std::string("\"") + key + "\" must be an object");
    return v;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), line_of_byte(text, e.byte));
    }
    if (!root.is_object()) bad("top level must be an object");
    check_keys(root, "", {"model", "chain", "regularization", "grid", "time",
                          "init", "forcing", "output", "solver_rel_tol"});

    SimConfig c;

    const json& model = section(root, "model");
    check_keys(model, "model.", {"eos", "c_p", "gamma", "mu_s", "mu_b", "k", "z",
                                 "eps", "lambda", "tait"});
    {
        const std::string eos = str(model, "eos", "isentropic");
        if (eos == "isentropic") c.eos = EosKind::Isentropic;
        else if (eos == "tait") c.eos = EosKind::Tait;
        else bad("model.eos must be \"isentropic\" or \"tait\"");
        c.c_p = num(model, "c_p", c.c_p);
        c.gamma = num(model, "gamma", c.gamma);
        c.mu_s = num(model, "mu_s", c.mu_s);
        c.mu_b = num(model, "mu_b", c.mu_b);
        c.k_temp = num(model, "k", c.k_temp);
        c.z_int = num(model, "z", c.z_int);
        c.eps = num(model, "eps", c.eps);
        c.lambda = num(model, "lambda", c.lambda);
        const json& tait = section(model, "tait");
        check_keys(tait, "model.tait.", {"a0", "a1", "rho_ref"});
        c.tait.a0 = num(tait, "a0", c.tait.a0);
        c.tait.a1 = num(tait, "a1", c.tait.a1);
        c.tait.rho_ref = num(tait, "rho_ref", c.tait.rho_ref);
    }

    const json& chain = section(root, "chain");
    check_keys(chain, "chain.", {"K", "d", "b", "rouse"});
    c.K = integer(chain, "K", c.K);
    c.d = integer(chain, "d", c.d);
    c.b = num_list(chain, "b", c.b);
    c.rouse = str(chain, "rouse", c.rouse);

    const json& reg = section(root, "regularization");
    check_keys(reg, "regularization.", {"kappa", "alpha", "L", "delta", "C0_LT"});
    c.kappa = num(reg, "kappa", c.kappa);
    c.alpha = num(reg, "alpha", c.alpha);
    c.L_cut = num(reg, "L", c.L_cut);
    c.delta = num(reg, "delta", c.delta);
    c.C0_LT = num(reg, "C0_LT", c.C0_LT);

    const json& grid = section(root, "grid");
    check_keys(grid, "grid.", {"nx", "ny", "lx", "ly", "bc", "nq_r", "nq_theta"});
    c.nx = integer(grid, "nx", c.nx);
    c.ny = integer(grid, "ny", c.ny);
    c.lx = num(grid, "lx", c.lx);
    c.ly = num(grid, "ly", c.ly);
    {
        const std::string bc = str(grid, "bc", "periodic");
        if (bc == "periodic") c.bc = Bc::Periodic;
        else if (bc == "noslip") c.bc = Bc::NoSlipNeumann;
        else bad("grid.bc must be \"periodic\" or \"noslip\"");
    }
    c.nq_r = integer(grid, "nq_r", c.nq_r);
    c.nq_theta = integer(grid, "nq_theta", c.nq_theta);

    const json& time = section(root, "time");
    check_keys(time, "time.", {"T", "N", "m_sub", "picard_max", "picard_tol",
                               "picard_damping"});
    c.T = num(time, "T", c.T);
    c.N = integer(time, "N", c.N);
    c.m_sub = integer(time, "m_sub", c.m_sub);
    c.picard_max = integer(time, "picard_max", c.picard_max);
    c.picard_tol = num(time, "picard_tol", c.picard_tol);
    c.picard_damping = num(time, "picard_damping", c.picard_damping);

    const json& init = section(root, "init");
    check_keys(init, "init.", {"rho0", "u0", "psi0"});
    {
        const json& rho0 = section(init, "rho0");
        check_keys(rho0, "init.rho0.", {"kind", "value", "amp", "table"});
        const std::string kind = str(rho0, "kind", "const");
        if (kind == "const") c.rho_init = RhoInit::Const;
        else if (kind == "cosine") c.rho_init = RhoInit::Cosine;
        else if (kind == "table") c.rho_init = RhoInit::Table;
        else bad("init.rho0.kind must be \"const\", \"cosine\", or \"table\"");
        c.rho0_value = num(rho0, "value", c.rho0_value);
        c.rho0_amp = num(rho0, "amp", c.rho0_amp);
        c.rho0_table = num_list(rho0, "table", c.rho0_table);

        const json& u0 = section(init, "u0");
        check_keys(u0, "init.u0.", {"kind", "x", "y"});
        const std::string ukind = str(u0, "kind", "zero");
        if (ukind == "zero") c.u_init = UInit::Zero;
        else if (ukind == "const") c.u_init = UInit::Const;
        else bad("init.u0.kind must be \"zero\" or \"const\"");
        c.u0x = num(u0, "x", c.u0x);
        c.u0y = num(u0, "y", c.u0y);

        const json& psi0 = section(init, "psi0");
        check_keys(psi0, "init.psi0.", {"kind", "amp", "x_amp"});
        const std::string pkind = str(psi0, "kind", "equilibrium");
        if (pkind == "equilibrium") c.psi_init = PsiInit::Equilibrium;
        else if (pkind == "stretch") c.psi_init = PsiInit::Stretch;
        else bad("init.psi0.kind must be \"equilibrium\" or \"stretch\"");
        c.psi_amp = num(psi0, "amp", c.psi_amp);
        c.psi_x_amp = num(psi0, "x_amp", c.psi_x_amp);
    }

    const json& forcing = section(root, "forcing");
    check_keys(forcing, "forcing.", {"kind", "amp", "fx", "fy", "table_x", "table_y"});
    {
        const std::string kind = str(forcing, "kind", "none");
        if (kind == "none") c.forcing = ForcingKind::None;
        else if (kind == "const") c.forcing = ForcingKind::Const;
        else if (kind == "vortex") c.forcing = ForcingKind::Vortex;
        else if (kind == "table") c.forcing = ForcingKind::Table;
        else bad("forcing.kind must be \"none\", \"const\", \"vortex\", or \"table\"");
        c.f_amp = num(forcing, "amp", c.f_amp);
        c.fx_const = num(forcing, "fx", c.fx_const);
        c.fy_const = num(forcing, "fy", c.fy_const);
        c.f_table_x = num_list(forcing, "table_x", c.f_table_x);
        c.f_table_y = num_list(forcing, "table_y", c.f_table_y);
    }

    const json& output = section(root, "output");
    check_keys(output, "output.", {"every", "prefix", "dump_fields",
                                   "pass_threshold", "c_q"});
    c.out_every = integer(output, "every", c.out_every);
    c.out_prefix = str(output, "prefix", c.out_prefix);
    c.dump_fields = boolean(output, "dump_fields", c.dump_fields);
    c.pass_threshold = num(output, "pass_threshold", c.pass_threshold);
    c.c_q = num(output, "c_q", c.c_q);

    c.solver_rel_tol = num(root, "solver_rel_tol", c.solver_rel_tol);

    validate_config(c);
    return c;
}

std::string serialize_config(const SimConfig& c) {
    json root;
    root["model"] = {
        {"eos", c.eos == EosKind::Isentropic ? "isentropic" : "tait"},
        {"c_p", c.c_p},
        {"gamma", c.gamma},
        {"mu_s", c.mu_s},
        {"mu_b", c.mu_b},
        {"k", c.k_temp},
        {"z", c.z_int},
        {"eps", c.eps},
        {"lambda", c.lambda},
        {"tait", {{"a0", c.tait.a0}, {"a1", c.tait.a1}, {"rho_ref", c.tait.rho_ref}}},
    };
    root["chain"] = {{"K", c.K}, {"d", c.d}, {"b", c.b}, {"rouse", c.rouse}};
    root["regularization"] = {{"kappa", c.kappa},
                              {"alpha", c.alpha},
                              {"L", c.L_cut},
                              {"delta", c.delta},
                              {"C0_LT", c.C0_LT}};
    root["grid"] = {{"nx", c.nx},
                    {"ny", c.ny},
                    {"lx", c.lx},
                    {"ly", c.ly},
                    {"bc", c.bc == Bc::Periodic ? "periodic" : "noslip"},
                    {"nq_r", c.nq_r},
                    {"nq_theta", c.nq_theta}};
    root["time"] = {{"T", c.T},
                    {"N", c.N},
                    {"m_sub", c.m_sub},
                    {"picard_max", c.picard_max},
                    {"picard_tol", c.picard_tol},
                    {"picard_damping", c.picard_damping}};
    const char* rho_kind = c.rho_init == RhoInit::Const    ? "const"
                           : c.rho_init == RhoInit::Cosine ? "cosine"
                                                           : "table";
    root["init"] = {
        {"rho0",
         {{"kind", rho_kind},
          {"value", c.rho0_value},
          {"amp", c.rho0_amp},
          {"table", c.rho0_table}}},
        {"u0",
         {{"kind", c.u_init == UInit::Zero ? "zero" : "const"},
          {"x", c.u0x},
          {"y", c.u0y}}},
        {"psi0",
         {{"kind", c.psi_init == PsiInit::Equilibrium ? "equilibrium" : "stretch"},
          {"amp", c.psi_amp},
          {"x_amp", c.psi_x_amp}}},
    };
    const char* f_kind = c.forcing == ForcingKind::None    ? "none"
                         : c.forcing == ForcingKind::Const ? "const"
                         : c.forcing == ForcingKind::Vortex ? "vortex"
                                                             : "table";
    root["forcing"] = {{"kind", f_kind},
                       {"amp", c.f_amp},
                       {"fx", c.fx_const},
                       {"fy", c.fy_const},
                       {"table_x", c.f_table_x},
                       {"table_y", c.f_table_y}};
    root["output"] = {{"every", c.out_every},
                      {"prefix", c.out_prefix},
                      {"dump_fields", c.dump_fields},
                      {"pass_threshold", c.pass_threshold},
                      {"c_q", c.c_q}};
    root["solver_rel_tol"] = c.solver_rel_tol;
    return root.dump(2) + "\n";
}

bool config_equal(const SimConfig& a, const SimConfig& b) {
    return a.eos == b.eos && a.c_p == b.c_p && a.gamma == b.gamma &&
           a.mu_s == b.mu_s && a.mu_b == b.mu_b && a.k_temp == b.k_temp &&
           a.z_int == b.z_int && a.eps == b.eps && a.lambda == b.lambda &&
           a.tait.a0 == b.tait.a0 && a.tait.a1 == b.tait.a1 &&
           a.tait.rho_ref == b.tait.rho_ref && a.K == b.K && a.d == b.d &&
           a.b == b.b && a.rouse == b.rouse && a.kappa == b.kappa &&
           a.alpha == b.alpha && a.L_cut == b.L_cut && a.delta == b.delta &&
           a.C0_LT == b.C0_LT && a.nx == b.nx && a.ny == b.ny && a.lx == b.lx &&
           a.ly == b.ly && a.bc == b.bc && a.nq_r == b.nq_r &&
           a.nq_theta == b.nq_theta && a.T == b.T && a.N == b.N &&
           a.m_sub == b.m_sub && a.picard_max == b.picard_max &&
           a.picard_tol == b.picard_tol && a.picard_damping == b.picard_damping &&
           a.rho_init == b.rho_init && a.rho0_value == b.rho0_value &&
           a.rho0_amp == b.rho0_amp && a.rho0_table == b.rho0_table &&
           a.u_init == b.u_init && a.u0x == b.u0x && a.u0y == b.u0y &&
           a.psi_init == b.psi_init && a.psi_amp == b.psi_amp &&
           a.psi_x_amp == b.psi_x_amp && a.forcing == b.forcing &&
           a.f_amp == b.f_amp && a.fx_const == b.fx_const &&
           a.fy_const == b.fy_const && a.f_table_x == b.f_table_x &&
           a.f_table_y == b.f_table_y && a.out_every == b.out_every &&
           a.out_prefix == b.out_prefix && a.dump_fields == b.dump_fields &&
           a.pass_threshold == b.pass_threshold && a.c_q == b.c_q &&
           a.solver_rel_tol == b.solver_rel_tol;
}

}  // namespace polyflow
