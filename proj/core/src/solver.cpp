#include "chemotax/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemotax {

void SolverConfig::validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max))
        throw InvalidData("SolverConfig: need 0 < dt_min <= dt_init <= dt_max");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw InvalidData("SolverConfig: cfl_safety must lie in (0, 1]");
    if (!(t_end >= 0.0)) throw InvalidData("SolverConfig: t_end must be nonnegative");
    if (!(blowup_linf_factor > 1.0) || !(blowup_entropy_factor > 1.0))
        throw InvalidData("SolverConfig: blow-up factors must exceed 1");
}

namespace {

/// Bernoulli function B(x) = x/(e^x - 1), B(0) = 1.
double bernoulli(double x) {
    if (std::abs(x) < 1e-10) return 1.0 - 0.5 * x;
    return x / std::expm1(x);
}

/// Explicit drift part of the face flux for d_t n = div(grad n - n grad P):
/// the full Scharfetter-Gummel flux minus its central-diffusion component
/// (which the implicit solve applies instead). dp = P_R - P_L across the face.
inline void drift_coeffs_sg(double dp, double& cl, double& cr) {
    const double b = bernoulli(dp);
    cl = (b + dp) - 1.0; // B(-dp) - 1
    cr = 1.0 - b;
}

inline void drift_coeffs_upwind(double dp, double& cl, double& cr) {
    cl = std::max(dp, 0.0);
    cr = std::min(dp, 0.0);
}

/// n_star = n - dt * div(J_drift(n, P)) in flux form (boundary fluxes zero).
Field explicit_drift(const Field& n, const Field& pot, const DomainSpec& dom,
                     double dt, PositivityMode mode) {
    const int nx = dom.nx, ny = dom.ny;
    const double hx = dom.hx(), hy = dom.hy();
    const bool sg = mode == PositivityMode::scharfetter_gummel;

    // x-direction fluxes, face i between cells (i-1) and (i)
    std::vector<double> jx(static_cast<std::size_t>(nx + 1), 0.0);
    Field out = n;
    const double cx = dt / hx, cy = dt / hy;
    for (int iy = 0; iy < ny; ++iy) {
        jx.assign(nx + 1, 0.0);
        for (int i = 1; i < nx; ++i) {
            const double dp = pot(i, iy) - pot(i - 1, iy);
            double cl, cr;
            sg ? drift_coeffs_sg(dp, cl, cr) : drift_coeffs_upwind(dp, cl, cr);
            jx[i] = (cl * n(i - 1, iy) + cr * n(i, iy)) / hx;
        }
        for (int i = 0; i < nx; ++i) out(i, iy) -= cx * (jx[i + 1] - jx[i]);
    }
    // y-direction fluxes, face j between rows (j-1) and (j)
    std::vector<double> jy(static_cast<std::size_t>(ny + 1), 0.0);
    for (int ix = 0; ix < nx; ++ix) {
        jy.assign(ny + 1, 0.0);
        for (int j = 1; j < ny; ++j) {
            const double dp = pot(ix, j) - pot(ix, j - 1);
            double cl, cr;
            sg ? drift_coeffs_sg(dp, cl, cr) : drift_coeffs_upwind(dp, cl, cr);
            jy[j] = (cl * n(ix, j - 1) + cr * n(ix, j)) / hy;
        }
        for (int j = 0; j < ny; ++j) out(ix, j) -= cy * (jy[j + 1] - jy[j]);
    }
    return out;
}

double abs_l1_entropy(const Field& f, const DomainSpec& dom) {
    double s = 0.0;
    for (double v : f.values()) s += std::abs(v * std::log(v));
    return s * dom.cell_area();
}

} // namespace

StepResult step(const SimState& state, const ModelParams& params,
                const SolverConfig& cfg, double dt, const HelmholtzSolver& hh) {
    const DomainSpec& dom = hh.domain();
    StepResult res;

    // (i) signal update from the current densities
    Field v_new, z_new;
    if (params.parabolic_elliptic()) {
        v_new = hh.solve(state.w, 1.0, 1.0);
        z_new = hh.solve(state.u, 1.0, 1.0);
    } else {
        {
            const double r = params.tau1 / dt;
            Field rhs = state.w;
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += r * state.v[i];
            v_new = hh.solve(rhs, 1.0 + r, 1.0);
        }
        {
            const double r = params.tau2 / dt;
            Field rhs = state.u;
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += r * state.z[i];
            z_new = hh.solve(rhs, 1.0 + r, 1.0);
        }
    }

    // (ii) density update: drift potentials from the fresh signals
    Field pot_u = v_new;
    for (double& p : pot_u.values()) p *= params.chi1;
    Field pot_w(dom.nx, dom.ny);
    for (std::size_t i = 0; i < pot_w.size(); ++i)
        pot_w[i] = params.chi2 * z_new[i] + params.chi3 * v_new[i];

    const double vmax =
        std::max(max_face_gradient(pot_u, dom), max_face_gradient(pot_w, dom));
    res.cfl_dt_bound = vmax > 0.0
                           ? cfg.cfl_safety * std::min(dom.hx(), dom.hy()) / vmax
                           : std::numeric_limits<double>::infinity();
    if (dt > res.cfl_dt_bound) {
        res.status = StepStatus::rejected_cfl;
        return res;
    }

    Field u_star = explicit_drift(state.u, pot_u, dom, dt, cfg.positivity_mode);
    Field w_star = explicit_drift(state.w, pot_w, dom, dt, cfg.positivity_mode);
    Field u_new = hh.solve(u_star, 1.0, dt);
    Field w_new = hh.solve(w_star, 1.0, dt);

    if (!(field_min(u_new) > 0.0) || !(field_min(w_new) > 0.0)) {
        res.status = StepStatus::rejected_positivity;
        return res;
    }

    res.status = StepStatus::accepted;
    res.next.t = state.t + dt;
    res.next.u = std::move(u_new);
    res.next.v = std::move(v_new);
    res.next.w = std::move(w_new);
    res.next.z = std::move(z_new);
    return res;
}

RunResult run(const SimState& state0, const ModelParams& params,
              const DerivedParams& dp, const SolverConfig& cfg,
              const DomainSpec& dom, int diagnostics_every,
              const std::function<void(const DiagnosticsRow&)>& on_row,
              const std::function<void(const SimState&)>& on_sample) {
    params.validate();
    cfg.validate();
    if (diagnostics_every < 1)
        throw InvalidData("run: diagnostics_every must be >= 1");

    HelmholtzSolver hh(dom, cfg.helmholtz_backend);
    std::optional<RateParamsPP> rp;
    if (params.fully_parabolic()) rp = rate_params_pp(dp, params);

    RunResult out;
    out.final_state = state0;
    SimState& s = out.final_state;

    auto emit = [&](double dt_used) {
        if (!out.trajectory.empty() && !(out.trajectory.back().t < s.t)) return;
        DiagnosticsRow row = collect_diagnostics(s, params, dp, dom, rp, dt_used);
        if (on_row) on_row(row);
        if (on_sample) on_sample(s);
        out.trajectory.push_back(std::move(row));
    };
    emit(0.0);

    BlowupReport& rep = out.report;
    const double init_linf_u = linf_norm(s.u);
    const double init_linf_w = linf_norm(s.w);
    rep.peak_linf_u = init_linf_u;
    rep.peak_linf_w = init_linf_w;
    rep.entropy_peak = abs_l1_entropy(s.u, dom) + abs_l1_entropy(s.w, dom);
    rep.dt_at_stop = cfg.dt_init;

    double dt = std::clamp(cfg.dt_init, cfg.dt_min, cfg.dt_max);
    const double t_eps = 1e-12 * std::max(cfg.t_end, 1.0);
    long long accepted_steps = 0;

    try {
        while (s.t < cfg.t_end - t_eps) {
            const double dt_attempt = std::min(dt, cfg.t_end - s.t);
            StepResult sr = step(s, params, cfg, dt_attempt, hh);
            if (sr.status == StepStatus::accepted) {
                s = std::move(sr.next);
                ++accepted_steps;
                ++out.steps_accepted;
                rep.peak_linf_u = std::max(rep.peak_linf_u, linf_norm(s.u));
                rep.peak_linf_w = std::max(rep.peak_linf_w, linf_norm(s.w));
                rep.entropy_peak =
                    std::max(rep.entropy_peak, abs_l1_entropy(s.u, dom) +
                                                   abs_l1_entropy(s.w, dom));
                rep.dt_at_stop = dt_attempt;
                if (accepted_steps % diagnostics_every == 0 &&
                    s.t < cfg.t_end - t_eps)
                    emit(dt_attempt);
                dt = std::min(dt * 1.2, cfg.dt_max);
            } else {
                ++out.steps_rejected;
                if (dt_attempt <= cfg.dt_min * (1.0 + 1e-12)) {
                    // time step collapsed and the step still cannot proceed
                    rep.dt_at_stop = dt_attempt;
                    const bool linf_fired =
                        rep.peak_linf_u >= cfg.blowup_linf_factor * init_linf_u ||
                        rep.peak_linf_w >= cfg.blowup_linf_factor * init_linf_w;
                    rep.status = linf_fired ? RunStatus::blowup_indicated
                                            : RunStatus::solver_failure;
                    rep.t_stop = s.t;
                    emit(dt_attempt);
                    return out;
                }
                dt = std::max(dt * 0.5, cfg.dt_min);
            }
        }
    } catch (const SolveFailure&) {
        rep.status = RunStatus::solver_failure;
        rep.t_stop = s.t;
        emit(rep.dt_at_stop);
        return out;
    }

    rep.status = RunStatus::completed;
    rep.t_stop = s.t;
    emit(rep.dt_at_stop);
    return out;
}

} // namespace chemotax
