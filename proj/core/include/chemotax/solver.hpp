#pragma once

#include <functional>
#include <vector>

#include "chemotax/functionals.hpp"
#include "chemotax/model.hpp"

namespace chemotax {

enum class PositivityMode { scharfetter_gummel, upwind };

struct SolverConfig {
    double dt_init = 1e-3;
    double dt_min = 1e-9;
    double dt_max = 1e-2;
    double cfl_safety = 0.9;
    double t_end = 10.0;
    double blowup_linf_factor = 1e4;
    double blowup_entropy_factor = 1e3;
    PositivityMode positivity_mode = PositivityMode::scharfetter_gummel;
    HelmholtzBackend helmholtz_backend = HelmholtzBackend::dct;

    void validate() const;
};

enum class RunStatus { completed, blowup_indicated, solver_failure };

/// Operational blow-up proxy: a run is flagged blowup_indicated only when the
/// L-inf explosion factor is reached AND the time step has collapsed to
/// dt_min with the step still rejected.
struct BlowupReport {
    RunStatus status = RunStatus::completed;
    double t_stop = 0.0;
    double peak_linf_u = 0.0;
    double peak_linf_w = 0.0;
    double entropy_peak = 0.0; ///< peak of ||u ln u||_L1 + ||w ln w||_L1
    double dt_at_stop = 0.0;
};

enum class StepStatus { accepted, rejected_cfl, rejected_positivity };

struct StepResult {
    StepStatus status = StepStatus::accepted;
    SimState next;              ///< valid only when accepted
    double cfl_dt_bound = 0.0;  ///< drift CFL bound from the fresh potentials
};

/// One IMEX step of the four-field system:
///  (i)  signal update: tau=0 solves (I - Lap) v = w directly; tau>0 takes an
///       implicit Euler step (tau/dt + 1) v_new - Lap v_new = (tau/dt) v + w;
///  (ii) density update: explicit drift divergence in flux form with
///       Scharfetter-Gummel (or upwind) face fluxes for the potentials
///       chi1 v (species u) and chi2 z + chi3 v (species w), then implicit
///       diffusion (I - dt Lap) u_new = u*.
/// Mass is conserved exactly in flux form; the step is rejected if dt exceeds
/// the drift CFL bound or output positivity fails.
StepResult step(const SimState& state, const ModelParams& params,
                const SolverConfig& cfg, double dt, const HelmholtzSolver& hh);

struct RunResult {
    std::vector<DiagnosticsRow> trajectory;
    SimState final_state;
    BlowupReport report;
    long long steps_accepted = 0;
    long long steps_rejected = 0;
};

/// Adaptive driver: halves dt on rejection, grows by at most 1.2x on
/// acceptance, clamps to [dt_min, dt_max]. Stops at t_end, on the dual
/// blow-up trigger, or on solver failure. Diagnostics are emitted on the
/// requested step cadence (initial and final states always included); on_row
/// and on_sample, when set, observe each emitted row / sampled state.
RunResult run(const SimState& state0, const ModelParams& params,
              const DerivedParams& dp, const SolverConfig& cfg,
              const DomainSpec& dom, int diagnostics_every,
              const std::function<void(const DiagnosticsRow&)>& on_row = {},
              const std::function<void(const SimState&)>& on_sample = {});

} // namespace chemotax
