#include "polyflow/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polyflow/errors.hpp"
#include "polyflow/psi_ops.hpp"
#include "polyflow/regularization.hpp"
#include "polyflow/stress.hpp"

namespace polyflow {

namespace {

double rel_change(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
        den += a[i] * a[i];
    }
    return std::sqrt(num) / (std::sqrt(den) + 1e-30);
}

// joint over both components: a zero-by-symmetry component carries only
// rounding noise and must be measured against the full velocity scale
double rel_change2(const Field& ax, const Field& ay, const Field& bx,
                   const Field& by) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ax.size(); ++i) {
        const double dx = ax[i] - bx[i], dy = ay[i] - by[i];
        num += dx * dx + dy * dy;
        den += ax[i] * ax[i] + ay[i] * ay[i];
    }
    return std::sqrt(num) / (std::sqrt(den) + 1e-30);
}

double field_min(const Field& f) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : f) m = std::min(m, v);
    return m;
}

}  // namespace

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
    validate_config(cfg_);
    chain_ = make_chain(cfg_.K, cfg_.d, cfg_.b, linear_chain_rouse(cfg_.K));
    og_ = make_omega_grid(cfg_.nx, cfg_.ny, cfg_.lx, cfg_.ly, cfg_.bc);
    cg_ = make_config_grid(chain_, cfg_.nq_r, cfg_.nq_theta);
    mp_ = make_model_params(cfg_);

    const double dt_step = dt();
    const double lt_bound = cfg_.C0_LT / (cfg_.L_cut * std::log(cfg_.L_cut));
    if (dt_step > lt_bound) {
        std::ostringstream os;
        os << "time step " << dt_step << " exceeds the cutoff guard "
           << lt_bound << " (C0 / (L log L)); the entropy bounds may degrade";
        warnings_.push_back(os.str());
    }

    const int n = og_.cells();

    // raw initial fields
    Field rho_raw(n, 0.0);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int i = 0; i < og_.nx; ++i)
        for (int j = 0; j < og_.ny; ++j) {
            const int c = og_.idx(i, j);
            switch (cfg_.rho_init) {
                case RhoInit::Const:
                    rho_raw[c] = cfg_.rho0_value;
                    break;
                case RhoInit::Cosine:
                    rho_raw[c] = cfg_.rho0_value +
                                 cfg_.rho0_amp * std::cos(two_pi * og_.xc(i) / og_.lx) *
                                     std::cos(two_pi * og_.yc(j) / og_.ly);
                    break;
                case RhoInit::Table:
                    rho_raw[c] = cfg_.rho0_table[c];
                    break;
            }
        }
    Field ux_raw(n, cfg_.u_init == UInit::Const ? cfg_.u0x : 0.0);
    Field uy_raw(n, cfg_.u_init == UInit::Const ? cfg_.u0y : 0.0);

    const int nq = cg_.spring[0].nodes();
    Field psi_raw(static_cast<size_t>(n) * nq, 1.0);
    if (cfg_.psi_init == PsiInit::Stretch) {
        const SpringGrid& sg = cg_.spring[0];
        const double m2 = grid_second_moment(sg);
        for (int i = 0; i < og_.nx; ++i)
            for (int j = 0; j < og_.ny; ++j) {
                const int c = og_.idx(i, j);
                const double mod =
                    1.0 + cfg_.psi_x_amp * std::cos(two_pi * og_.xc(i) / og_.lx);
                for (int q = 0; q < nq; ++q) {
                    const double r2 = sg.qx[q] * sg.qx[q] + sg.qy[q] * sg.qy[q];
                    psi_raw[static_cast<size_t>(c) * nq + q] =
                        1.0 + cfg_.psi_amp * mod * (r2 - m2) / m2;
                }
            }
    }

    // initial-data mollification
    project_initial_density(og_, cfg_.alpha, rho_raw, state_.rho);
    project_initial_velocity(og_, state_.rho, dt_step, ux_raw, uy_raw, state_.ux,
                             state_.uy);
    smooth_initial_psi(og_, cg_, dt_step, cfg_.L_cut, psi_raw, state_.psi);

    // forcing fields
    fx_.assign(n, 0.0);
    fy_.assign(n, 0.0);
    has_forcing_ = cfg_.forcing != ForcingKind::None;
    if (cfg_.forcing == ForcingKind::Const) {
        fx_.assign(n, cfg_.fx_const);
        fy_.assign(n, cfg_.fy_const);
    } else if (cfg_.forcing == ForcingKind::Vortex) {
        for (int i = 0; i < og_.nx; ++i)
            for (int j = 0; j < og_.ny; ++j) {
                const int c = og_.idx(i, j);
                const double sx = two_pi * og_.xc(i) / og_.lx;
                const double sy = two_pi * og_.yc(j) / og_.ly;
                fx_[c] = cfg_.f_amp * std::sin(sx) * std::cos(sy);
                fy_[c] = -cfg_.f_amp * std::cos(sx) * std::sin(sy);
            }
        if (og_.bc == Bc::NoSlipNeumann) {
            mask_boundary(og_, fx_);
            mask_boundary(og_, fy_);
        }
    } else if (cfg_.forcing == ForcingKind::Table) {
        fx_ = cfg_.f_table_x;
        fy_ = cfg_.f_table_y;
        if (og_.bc == Bc::NoSlipNeumann) {
            mask_boundary(og_, fx_);
            mask_boundary(og_, fy_);
        }
    }

    // conservation baselines and the initial ledger row
    double s = 0.0;
    for (double v : state_.rho) s += v;
    mass_rho0_ = og_.cell_w * s;
    Field one(state_.psi.size(), 1.0);
    mass_psi0_ = psi_mass_form(og_, cg_, state_.psi, one);

    e_prev_ = energy_total(state_, record0_.energy);
    record0_.step = 0;
    record0_.t = 0.0;
    record0_.energy.pass = true;
    record0_.min_rho = field_min(state_.rho);
    record0_.min_psi = field_min(state_.psi);
}

double Simulation::tol_energy() const {
    const double h = std::max(og_.hx, og_.hy);
    return 10.0 * (cfg_.picard_tol + cfg_.c_q * (h * h + dt()));
}

void Simulation::marginal(Field& out) const { psi_marginal(og_, cg_, state_.psi, out); }

double Simulation::energy_total(const State& s, EnergyReport& out) const {
    const int n = og_.cells();
    double kin = 0.0, intern = 0.0;
    for (int c = 0; c < n; ++c) {
        kin += s.rho[c] * (s.ux[c] * s.ux[c] + s.uy[c] * s.uy[c]);
        intern += pressure_primitive(std::max(s.rho[c], 0.0), mp_);
    }
    kin *= 0.5 * og_.cell_w;
    intern *= og_.cell_w;

    const SpringGrid& sg = cg_.spring[0];
    const int nq = sg.nodes();
    double ent = 0.0;
    for (int c = 0; c < n; ++c) {
        const size_t base = static_cast<size_t>(c) * nq;
        double sc = 0.0;
        for (int q = 0; q < nq; ++q)
            sc += sg.w[q] *
                  entropy_FL(std::max(s.psi[base + q], 0.0), mp_.L_cut).value;
        ent += sc;
    }
    ent *= mp_.k_temp * og_.cell_w;

    Field vr;
    psi_marginal(og_, cg_, s.psi, vr);
    double inter = 0.0;
    for (int c = 0; c < n; ++c) inter += vr[c] * vr[c];
    inter *= mp_.z_int * og_.cell_w;

    out.kinetic = kin;
    out.internal = intern;
    out.entropy = ent;
    out.interaction = inter;
    out.total = kin + intern + ent + inter;
    return out.total;
}

EnergyReport Simulation::ledger(const State& prev, const State& next,
                                const SlabDensity& slab, const Field& xi_bar_x,
                                const Field& xi_bar_y, double e_prev) const {
    (void)xi_bar_x;
    (void)xi_bar_y;
    EnergyReport rep;
    energy_total(next, rep);
    const double dt_step = dt();
    const int n = og_.cells();

    // dissipation, each piece a lower bound for its tested counterpart
    double diss = visc_form(og_, mp_.mu_s, mp_.mu_b - 0.5 * mp_.mu_s, next.ux,
                            next.uy, next.ux, next.uy);
    double incr = 0.0;
    for (int c = 0; c < n; ++c) {
        const double dx = next.ux[c] - prev.ux[c];
        const double dy = next.uy[c] - prev.uy[c];
        incr += prev.rho[c] * (dx * dx + dy * dy);
    }
    diss += 0.5 * og_.cell_w * incr / dt_step;
    diss += (chain_.rouse_min_eig * mp_.k_temp / (2.0 * mp_.lambda)) *
            psi_fisher_q(og_, cg_, next.psi);
    diss += 2.0 * mp_.eps * mp_.k_temp * psi_fisher_x(og_, cg_, next.psi);
    diss += (mp_.alpha * mp_.kappa / dt_step) *
            (slab.diss_quartic + (4.0 / mp_.Gamma) * slab.diss_gamma);
    Field vr;
    psi_marginal(og_, cg_, next.psi, vr);
    diss += 2.0 * mp_.z_int * mp_.eps * lap_form(og_, vr, vr);

    double work = 0.0;
    if (has_forcing_) {
        for (int c = 0; c < n; ++c)
            work += next.rho[c] * (fx_[c] * next.ux[c] + fy_[c] * next.uy[c]);
        work *= og_.cell_w;
    }

    rep.dissipation = diss;
    rep.work = work;
    rep.residual = rep.total - e_prev + dt_step * (diss - work);
    rep.pass = rep.residual <= tol_energy();
    return rep;
}

StepRecord Simulation::advance() {
    const double dt_step = dt();
    const State prev = state_;

    Field ux_it = prev.ux, uy_it = prev.uy, psi_it = prev.psi;
    std::vector<double> history;
    double omega = cfg_.picard_damping;
    double prev_res = std::numeric_limits<double>::infinity();

    SlabDensity slab;
    FokkerPlanckResult fp;
    MomentumResult mom;
    int iters_done = 0;
    bool converged = false;

    const double maxrho_prev = *std::max_element(prev.rho.begin(), prev.rho.end());

    for (int it = 1; it <= cfg_.picard_max; ++it) {
        iters_done = it;
        slab = continuity_slab(og_, mp_, prev.rho, ux_it, uy_it, dt_step,
                               cfg_.m_sub, cfg_.solver_rel_tol);
        fp = fokker_planck_solve(og_, cg_, mp_, prev.psi, ux_it, uy_it, psi_it,
                                 dt_step, psi_it, cfg_.solver_rel_tol);

        Field varrho;
        psi_marginal(og_, cg_, fp.psi, varrho);
        VelGrad gstress;
        elastic_stress_graph(og_, cg_, fp.psi, gstress);

        MomentumInput min_;
        min_.rho_new = &slab.rho_end;
        min_.rho_prev = &prev.rho;
        min_.ux_prev = &prev.ux;
        min_.uy_prev = &prev.uy;
        min_.fx = has_forcing_ ? &fx_ : nullptr;
        min_.fy = has_forcing_ ? &fy_ : nullptr;
        min_.stress_graph = &gstress;
        min_.varrho = &varrho;
        min_.xi_bar_x = &fp.xi_bar_x;
        min_.xi_bar_y = &fp.xi_bar_y;
        min_.face_px = &slab.face_px;
        min_.face_py = &slab.face_py;
        min_.dt = dt_step;
        mom = momentum_solve(og_, mp_, min_, ux_it, uy_it, cfg_.solver_rel_tol);

        const double res_u = rel_change2(mom.ux, mom.uy, ux_it, uy_it);
        const double res_psi = rel_change(fp.psi, psi_it);
        const double res = std::max(res_u, res_psi);
        history.push_back(res);
        if (res <= cfg_.picard_tol) {
            converged = true;
            break;
        }
        if (res > prev_res) omega = std::max(0.5 * omega, 1.0 / 64.0);
        prev_res = res;
        for (size_t c = 0; c < ux_it.size(); ++c) {
            ux_it[c] += omega * (mom.ux[c] - ux_it[c]);
            uy_it[c] += omega * (mom.uy[c] - uy_it[c]);
        }
        for (size_t q = 0; q < psi_it.size(); ++q)
            psi_it[q] += omega * (fp.psi[q] - psi_it[q]);
    }
    if (!converged)
        throw PicardDiverged("picard iteration did not reach tolerance " +
                                 std::to_string(cfg_.picard_tol) + " within " +
                                 std::to_string(cfg_.picard_max) + " sweeps",
                             history);

    state_.rho = slab.rho_end;
    state_.ux = mom.ux;
    state_.uy = mom.uy;
    state_.psi = fp.psi;
    ++step_;

    // transport bound monitor (informative only): an implicit upwind slab can
    // amplify the maximum by at most (1 - dtau |div u|)^-m per step
    const double divmax = face_div_max(og_, mom.ux, mom.uy);
    const double dtau = dt_step / cfg_.m_sub;
    if (dtau * divmax < 1.0) {
        const double bound = maxrho_prev *
                             std::pow(1.0 - dtau * divmax, -cfg_.m_sub) *
                             (1.0 + 1e-10) + 1e-14;
        const double maxrho = *std::max_element(state_.rho.begin(), state_.rho.end());
        if (maxrho > bound) {
            std::ostringstream os;
            os << "step " << step_ << ": density maximum " << maxrho
               << " exceeds the transport bound " << bound;
            warnings_.push_back(os.str());
        }
    }

    StepRecord rec;
    rec.step = step_;
    rec.t = time();
    rec.energy = ledger(prev, state_, slab, fp.xi_bar_x, fp.xi_bar_y, e_prev_);
    e_prev_ = rec.energy.total;

    double s = 0.0;
    for (double v : state_.rho) s += v;
    const double mass_rho = og_.cell_w * s;
    Field one(state_.psi.size(), 1.0);
    const double mass_psi = psi_mass_form(og_, cg_, state_.psi, one);
    rec.mass_rho_err = std::abs(mass_rho - mass_rho0_) /
                       std::max(std::abs(mass_rho0_), 1e-300);
    rec.mass_psi_err = std::abs(mass_psi - mass_psi0_) /
                       std::max(std::abs(mass_psi0_), 1e-300);
    rec.min_rho = field_min(state_.rho);
    rec.min_psi = field_min(state_.psi);
    rec.picard_iters = iters_done;
    return rec;
}

}  // namespace polyflow
