#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polyflow/config.hpp"
#include "polyflow/grid.hpp"
#include "polyflow/model.hpp"
#include "polyflow/operators.hpp"
#include "polyflow/solvers.hpp"

namespace polyflow {

struct State {
    Field rho, ux, uy, psi;
};

struct EnergyReport {
    double kinetic = 0.0;
    double internal = 0.0;
    double entropy = 0.0;
    double interaction = 0.0;
    double total = 0.0;
    double dissipation = 0.0;  // per unit time
    double work = 0.0;         // per unit time
    double residual = 0.0;     // total increment plus dt * (dissipation - work)
    bool pass = true;          // residual <= energy tolerance (one-sided)
};

struct StepRecord {
    int step = 0;
    double t = 0.0;
    EnergyReport energy;
    double mass_rho_err = 0.0;
    double mass_psi_err = 0.0;
    double min_rho = 0.0;
    double min_psi = 0.0;
    int picard_iters = 0;
};

// Time integrator for the coupled solvent-polymer system: per step a Picard
// loop over density slab, configuration density and momentum solves, then an
// energy ledger checking the discrete dissipation inequality.
class Simulation {
  public:
    explicit Simulation(const SimConfig& cfg);

    const SimConfig& config() const { return cfg_; }
    const OmegaGrid& omega() const { return og_; }
    const ConfigGrid& config_grid() const { return cg_; }
    const ModelParams& model() const { return mp_; }
    const SpringChain& chain() const { return chain_; }
    const State& state() const { return state_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    double dt() const { return cfg_.T / cfg_.N; }
    double time() const { return step_ * dt(); }
    int step() const { return step_; }
    double tol_energy() const;

    // record describing the projected initial data (step 0)
    StepRecord initial_record() const { return record0_; }

    // advances one time step; throws PicardDiverged if the inner loop stalls
    StepRecord advance();

    void marginal(Field& out) const;

  private:
    EnergyReport ledger(const State& prev, const State& next,
                        const SlabDensity& slab, const Field& xi_bar_x,
                        const Field& xi_bar_y, double e_prev) const;
    double energy_total(const State& s, EnergyReport& out) const;

    SimConfig cfg_;
    SpringChain chain_;
    OmegaGrid og_;
    ConfigGrid cg_;
    ModelParams mp_;
    State state_;
    Field fx_, fy_;
    bool has_forcing_ = false;
    int step_ = 0;
    double mass_rho0_ = 0.0, mass_psi0_ = 0.0;
    double e_prev_ = 0.0;
    StepRecord record0_;
    std::vector<std::string> warnings_;
};

}  // namespace polyflow
