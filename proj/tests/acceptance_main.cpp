// Acceptance suite: one run per numbered criterion, each printed as a single
// PASS/FAIL line with the measured quantities. Returns the number of failed
// criteria. Run through ctest or directly; expect a few minutes of runtime
// (the blow-up contrast works at 128x128).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "chemotax/constants.hpp"
#include "chemotax/experiment.hpp"
#include "chemotax/regimes.hpp"
#include "chemotax/snapshot.hpp"
#include "chemotax/solver.hpp"

using namespace chemotax;

namespace {

int g_failures = 0;

void record(int id, const std::string& name, bool pass, const std::string& evidence) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << name
              << "  --  " << evidence << "\n";
    std::cout.flush();
    if (!pass) ++g_failures;
}

void note(const std::string& text) { std::cout << "       " << text << "\n"; }

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

// ---------------------------------------------------------------------------
// criterion 10 accumulates over every sampled state of every run below
// ---------------------------------------------------------------------------
struct InequalityAudit {
    long long samples = 0;
    long long ckp_violations = 0;
    long long entropy_violations = 0;
    double worst_ckp_excess = 0.0;

    void observe(const SimState& s, const DerivedParams& dp, const ModelParams& p,
                 const DomainSpec& dom) {
        ++samples;
        const double floor = entropy_floor(dom) - 1e-12;
        if (entropy(s.u, dom) < floor || entropy(s.w, dom) < floor)
            ++entropy_violations;
        const NormalizedState ns = normalize(s, dp, dom, p);
        const CkpGap g = ckp_gap(ns, dom);
        // near equilibrium both sides sit at the quadrature round-off of the
        // mean constraint, so the absolute slack must scale with it
        const double slack_u = 1e-12 * dom.area() * (1.0 + linf_norm(ns.U));
        const double slack_w = 1e-12 * dom.area() * (1.0 + linf_norm(ns.W));
        const double eu = g.lhs_u - g.rhs_u * (1.0 + 1e-10) - slack_u;
        const double ew = g.lhs_w - g.rhs_w * (1.0 + 1e-10) - slack_w;
        if (eu > 0.0 || ew > 0.0) {
            ++ckp_violations;
            worst_ckp_excess = std::max({worst_ckp_excess, eu, ew});
        }
    }
};

InequalityAudit g_audit;

std::function<void(const SimState&)> auditor(const DerivedParams& dp,
                                             const ModelParams& p,
                                             const DomainSpec& dom) {
    return [dp, p, dom](const SimState& s) { g_audit.observe(s, dp, p, dom); };
}

DerivedParams dp_of(const SimState& s, const DomainSpec& dom, const ModelParams& p,
                    double k_est, double cgn_est) {
    return make_derived_params(s.u, s.w, dom, p, k_est,
                               ConstantProvenance::estimated, cgn_est,
                               ConstantProvenance::estimated);
}

struct FilteredFit {
    bool measurable = false;
    FitResult fit;
    std::size_t used = 0;
};

// exponential fit over the part of the series still above the roundoff floor
FilteredFit filtered_fit(const std::vector<double>& t, const std::vector<double>& y,
                         double rel_floor = 1e-12) {
    double y0 = 0.0;
    for (double v : y) y0 = std::max(y0, std::abs(v));
    std::vector<double> tf, yf;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (y[i] > rel_floor * y0)
            tf.push_back(t[i]), yf.push_back(y[i]);
        else
            break; // once at the floor, stay out of the fit window
    }
    FilteredFit out;
    out.used = tf.size();
    if (tf.size() < 8) return out; // decayed below measurable
    out.measurable = true;
    out.fit = fit_exponential_rate(tf, yf);
    return out;
}

// fixed-step driver used where consecutive states are needed; mirrors run()'s
// policy at dt_min = dt_init = dt_max
struct SteppedRun {
    std::vector<SimState> states_window; // last two
    long long steps = 0;
};

// ---------------------------------------------------------------------------
// shared configurations
// ---------------------------------------------------------------------------

struct EstimatedConstants {
    double k = 0.0;
    double cgn = 0.0;
};

EstimatedConstants estimate_unit_square_constants() {
    OptimizerConfig cfg;
    cfg.max_iters = 400;
    cfg.random_starts = 4;
    cfg.seed = 20240801;
    const DomainSpec est_dom(1.0, 1.0, 64, 64);
    EstimatedConstants c;
    c.k = estimate_k(est_dom, cfg).value;
    c.cgn = std::pow(estimate_cgn(est_dom, cfg).value, 0.25);
    return c;
}

// ---------------------------------------------------------------------------

void criteria_1_and_3(const EstimatedConstants& knowns) {
    // tau = 0 small-mass run, fixed dt = 1e-3, t in [0, 20]: 2e4 accepted steps
    const DomainSpec dom(1.0, 1.0, 64, 64);
    ModelParams p;
    p.chi3 = 0.1;
    SimState s;
    s.u = build_cosine_perturbation(dom, 1.0, 0.4, 1, 0);
    s.w = build_cosine_perturbation(dom, 1.0, 0.3, 0, 1);
    HelmholtzSolver hh(dom);
    s.v = hh.solve(s.w, 1.0, 1.0);
    s.z = hh.solve(s.u, 1.0, 1.0);
    DerivedParams dp = dp_of(s, dom, p, knowns.k, knowns.cgn);

    const auto [b1, margin] = check_b1(p, dp.m1, dp.m2, dp, dom);
    if (!b1) {
        record(3, "F-monotonicity (tau=0)", false, "configuration violates (1.10)");
        record(1, "mass conservation over >= 1e4 steps", false, "run not executed");
        return;
    }

    const double dt = 1e-3;
    SolverConfig cfg;
    cfg.dt_init = cfg.dt_min = cfg.dt_max = dt;
    cfg.t_end = 20.0;

    long long steps = 0, f_violations = 0, diss_samples = 0, diss_bad = 0;
    double worst_drift = 0.0, prev_F = lyapunov_F(s, p, dom);
    const double m1 = dp.m1, m2 = dp.m2;
    SimState cur = s;
    bool failed = false;
    std::string fail_reason;
    while (cur.t < 20.0 - 1e-12) {
        StepResult r = step(cur, p, cfg, std::min(dt, 20.0 - cur.t), hh);
        if (r.status != StepStatus::accepted) {
            failed = true;
            fail_reason = "step rejected at fixed dt";
            break;
        }
        ++steps;
        // criterion 3: dissipation identity every 10 steps
        if (steps % 10 == 1) {
            const FDissipation d =
                lyapunov_F_dissipation(cur, r.next, p, dom, r.next.t - cur.t);
            ++diss_samples;
            if (std::abs(d.lhs - d.rhs) >
                0.05 * (std::abs(d.lhs) + std::abs(d.rhs) + 1e-8))
                ++diss_bad;
        }
        if (steps % 100 == 0) g_audit.observe(r.next, dp, p, dom);
        cur = std::move(r.next);
        const double F = lyapunov_F(cur, p, dom);
        if (F > prev_F + 1e-8 * (1.0 + std::abs(prev_F))) ++f_violations;
        prev_F = F;
        worst_drift = std::max(
            {worst_drift, std::abs(integrate(cur.u, dom) - m1) / m1,
             std::abs(integrate(cur.w, dom) - m2) / m2});
    }

    const bool c1 = !failed && steps >= 10000 && worst_drift <= 1e-10;
    record(1, "mass conservation over >= 1e4 steps", c1,
           "steps=" + std::to_string(steps) + " max rel drift=" + fmt(worst_drift) +
               " (tol 1e-10)");

    const double bad_frac =
        diss_samples > 0 ? static_cast<double>(diss_bad) / diss_samples : 1.0;
    const bool c3 = !failed && f_violations == 0 && bad_frac <= 0.05;
    record(3, "F-monotonicity and dissipation identity (tau=0)", c3,
           failed ? fail_reason
                  : "F increases=" + std::to_string(f_violations) +
                        ", dissipation mismatch on " + fmt(100.0 * bad_frac) +
                        "% of " + std::to_string(diss_samples) +
                        " samples (allow 5%)");
}

void criterion_2() {
    // tau1 = tau2 = 1, v0 off the relaxed level: mean v follows the L1 law
    const DomainSpec dom(1.0, 1.0, 64, 64);
    ModelParams p;
    p.tau1 = p.tau2 = 1.0;
    SimState s;
    s.u = build_cosine_perturbation(dom, 1.0, 0.2, 1, 0);
    s.w = build_cosine_perturbation(dom, 1.0, 0.2, 0, 1);
    s.v = Field(64, 64, 1.6);
    s.z = Field(64, 64, 1.0);
    DerivedParams dp = dp_of(s, dom, p, 1.0, 0.5);

    const double dt = 1e-3;
    SolverConfig cfg;
    cfg.dt_init = cfg.dt_min = cfg.dt_max = dt;
    cfg.t_end = 5.0;
    RunResult rr = run(s, p, dp, cfg, dom, 100, {}, auditor(dp, p, dom));

    const double v0 = 1.6, m2 = dp.m2;
    const double tol = std::max(1e-6, 2.0 * dt);
    bool ok = rr.report.status == RunStatus::completed;
    double worst = 0.0;
    for (double target : {1.0, 2.0, 5.0}) {
        const DiagnosticsRow* best = nullptr;
        for (const auto& row : rr.trajectory)
            if (!best || std::abs(row.t - target) < std::abs(best->t - target))
                best = &row;
        const double want = m2 + (v0 - m2) * std::exp(-best->t / p.tau1);
        const double rel = std::abs(best->mass_v - want) / std::abs(want);
        worst = std::max(worst, rel);
        ok = ok && rel <= tol;
    }
    record(2, "signal L1 relaxation law (tau=1)", ok,
           "max rel deviation=" + fmt(worst) + " at t in {1,2,5} (tol " + fmt(tol) +
               ")");
}

void criterion_4_and_6_pe(const EstimatedConstants& knowns, bool& pe_converged) {
    const DomainSpec dom(1.0, 1.0, 64, 64);
    ModelParams p;
    SimState s;
    s.u = build_cosine_perturbation(dom, 1.0, 0.4, 1, 0);
    s.w = build_cosine_perturbation(dom, 1.0, 0.3, 1, 1);
    HelmholtzSolver hh(dom);
    s.v = hh.solve(s.w, 1.0, 1.0);
    s.z = hh.solve(s.u, 1.0, 1.0);
    DerivedParams dp = dp_of(s, dom, p, knowns.k, knowns.cgn);

    const double smallness = dp.k_est * dp.k_est * dp.eta1 * dp.eta2 +
                             dp.k_est * dp.eta1 * std::max(dp.chi, 0.0);
    auto mu = rate_mu(dp);
    if (smallness > 2.0 || !mu) {
        record(4, "G-decay at rate mu (tau=0)", false,
               "premise failed: k^2 eta1 eta2 + k eta1 chi+ = " + fmt(smallness));
        pe_converged = false;
        return;
    }

    SolverConfig cfg;
    cfg.t_end = 50.0;
    cfg.dt_max = 1e-2;
    RunResult rr = run(s, p, dp, cfg, dom, 1, {}, auditor(dp, p, dom));

    std::vector<double> ts, gs, w1s;
    for (const auto& row : rr.trajectory) {
        ts.push_back(row.t);
        gs.push_back(row.G_val.value_or(0.0));
        w1s.push_back(row.w1inf_dist_u + row.w1inf_dist_w);
    }
    const double g0 = gs.front();
    bool bound_ok = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] > 20.0) break;
        const double cap = g0 * std::exp(-0.5 * *mu * ts[i]) * 1.1;
        if (gs[i] > cap) bound_ok = false;
        if (cap > 0.0) worst_ratio = std::max(worst_ratio, gs[i] / cap);
    }

    FilteredFit ff = filtered_fit(ts, gs);
    const bool rate_ok =
        !ff.measurable || (ff.fit.rate >= 0.5 * *mu && ff.fit.r2 >= 0.95);
    record(4, "G-decay at rate mu (tau=0)", bound_ok && rate_ok,
           "mu_hat=" + fmt(*mu) + " worst G/(bound)=" + fmt(worst_ratio) +
               (ff.measurable ? " fitted rate=" + fmt(ff.fit.rate) +
                                    " (need >= " + fmt(0.5 * *mu) +
                                    ") R2=" + fmt(ff.fit.r2)
                              : " [decayed below measurable]"));

    // tau = 0 half of criterion 6
    const double dist = linf_norm([&] {
        Field d = rr.final_state.u;
        for (double& v : d.values()) v -= dp.u0bar;
        return d;
    }()) + linf_norm([&] {
        Field d = rr.final_state.w;
        for (double& v : d.values()) v -= dp.w0bar;
        return d;
    }());
    FilteredFit wf = filtered_fit(ts, w1s);
    pe_converged = rr.report.status == RunStatus::completed && dist <= 1e-3 &&
                   (!wf.measurable || wf.fit.rate > 0.0);
    if (!pe_converged)
        note("tau=0 convergence detail: dist=" + fmt(dist) +
             " status=" + to_string(rr.report.status));
}

void criterion_5_and_6_pp(const EstimatedConstants& knowns, bool pe_converged) {
    const DomainSpec dom(1.0, 1.0, 64, 64);
    ModelParams p;
    p.tau1 = p.tau2 = 1.0;
    SimState s;
    s.u = build_cosine_perturbation(dom, 0.5, 0.4, 1, 0);
    s.w = build_cosine_perturbation(dom, 0.5, 0.3, 1, 1);
    HelmholtzSolver hh(dom);
    s.v = hh.solve(s.w, 1.0, 1.0);
    s.z = hh.solve(s.u, 1.0, 1.0);
    DerivedParams dp = dp_of(s, dom, p, knowns.k, knowns.cgn);

    std::optional<RateParamsPP> rp;
    std::optional<double> delta;
    std::string premise;
    try {
        rp = rate_params_pp(dp, p);
        if (rp) delta = rate_delta(*rp, dp, p);
    } catch (const std::logic_error& e) {
        premise = e.what(); // transcription alarm: must not happen
    }
    if (!rp || !delta || !(*delta > 0.0)) {
        record(5, "H-decay at rate delta (tau>0)", false,
               premise.empty() ? "configuration outside the fully parabolic rate window"
                               : premise);
        record(6, "W^{1,inf} convergence to equilibria in both regimes", false,
               "tau>0 run skipped");
        return;
    }
    const bool coeffs_pos = rp->alpha > 0 && rp->beta > 0 && rp->gamma1 > 0 &&
                            rp->gamma2 > 0 && rp->A1 > 0 && rp->A2 > 0 &&
                            rp->A3 > 0 && rp->A4 > 0;

    SolverConfig cfg;
    cfg.t_end = 50.0;
    cfg.dt_max = 1e-2;
    RunResult rr = run(s, p, dp, cfg, dom, 1, {}, auditor(dp, p, dom));

    std::vector<double> ts, hs, w1s;
    for (const auto& row : rr.trajectory) {
        ts.push_back(row.t);
        hs.push_back(row.H_val.value_or(0.0));
        w1s.push_back(row.w1inf_dist_u + row.w1inf_dist_w);
    }
    FilteredFit ff = filtered_fit(ts, hs);
    const bool rate_ok =
        !ff.measurable || (ff.fit.rate >= 0.5 * *delta && ff.fit.r2 >= 0.95);
    record(5, "H-decay at rate delta (tau>0)", coeffs_pos && rate_ok,
           "delta_hat=" + fmt(*delta) + " coefficients positive=" +
               (coeffs_pos ? "yes" : "NO") +
               (ff.measurable ? " fitted rate=" + fmt(ff.fit.rate) +
                                    " (need >= " + fmt(0.5 * *delta) +
                                    ") R2=" + fmt(ff.fit.r2)
                              : " [decayed below measurable]"));

    const double dist = linf_norm([&] {
        Field d = rr.final_state.u;
        for (double& v : d.values()) v -= dp.u0bar;
        return d;
    }()) + linf_norm([&] {
        Field d = rr.final_state.w;
        for (double& v : d.values()) v -= dp.w0bar;
        return d;
    }());
    FilteredFit wf = filtered_fit(ts, w1s);
    const bool pp_converged = rr.report.status == RunStatus::completed &&
                              dist <= 1e-3 && (!wf.measurable || wf.fit.rate > 0.0);
    record(6, "W^{1,inf} convergence to equilibria in both regimes",
           pe_converged && pp_converged,
           "final |u-mean|+|w-mean| (tau>0 run)=" + fmt(dist) +
               " (tol 1e-3); tau=0 run " + (pe_converged ? "converged" : "FAILED"));
}

struct ObservationDone {
    double t_reached;
};

void criterion_7(const EstimatedConstants& knowns) {
    const DomainSpec dom(1.0, 1.0, 128, 128);
    ModelParams p; // chi1 = chi2 = 1, chi3 = 0, tau = 0
    const double width = 0.12;

    auto make_state = [&](double mass) {
        SimState s;
        s.u = build_gaussian_bump(dom, mass, 0.0, 0.0, width,
                                  1e-8 * mass / dom.area());
        Field v0(128, 128, 0.0);
        auto [w0, z0] = build_symmetric_copy(s.u, v0, p);
        s.w = std::move(w0);
        HelmholtzSolver hh(dom);
        s.v = hh.solve(s.w, 1.0, 1.0);
        s.z = hh.solve(s.u, 1.0, 1.0);
        return s;
    };

    // part A: the literal criterion. m = 13 > 4 pi, corner bump, 128x128,
    // dt_min = 1e-9, explosion factor 100, t_end = 10.
    SimState s13 = make_state(13.0);
    const double init_peak = linf_norm(s13.u);
    DerivedParams dp13 = dp_of(s13, dom, p, knowns.k, knowns.cgn);
    const auto [on_line, blowup_mass] = check_b4(p, dp13.m1, dp13.m2, dp13);

    SolverConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.dt_min = 1e-9;
    cfg.dt_max = 1e-2;
    cfg.t_end = 10.0;
    cfg.blowup_linf_factor = 100.0;

    // bounded observation: abort after 30000 accepted steps (600 rows at the
    // 50-step cadence) -- far past the collapse -- and report what was seen
    const long long row_cap = 600;
    long long rows = 0;
    double min_dt_seen = 1e9;
    double linf_fire_t = -1.0;
    bool aborted = false;
    BlowupReport repA{};
    double tA = 0.0;
    try {
        RunResult rr = run(
            s13, p, dp13, cfg, dom, 50,
            [&](const DiagnosticsRow& row) {
                if (row.dt > 0.0) min_dt_seen = std::min(min_dt_seen, row.dt);
                if (linf_fire_t < 0.0 && row.linf_u >= 100.0 * init_peak)
                    linf_fire_t = row.t;
                if (++rows >= row_cap) throw ObservationDone{row.t};
            },
            auditor(dp13, p, dom));
        repA = rr.report;
        tA = rr.report.t_stop;
        if (repA.status == RunStatus::blowup_indicated)
            min_dt_seen = std::min(min_dt_seen, repA.dt_at_stop);
    } catch (const ObservationDone& od) {
        aborted = true;
        tA = od.t_reached;
    }

    const bool partA = !aborted && repA.status == RunStatus::blowup_indicated &&
                       tA < 10.0;
    std::string evidenceA;
    if (partA) {
        evidenceA = "blowup_indicated at t=" + fmt(tA);
    } else {
        evidenceA = std::string("dual trigger did NOT fire (") +
                    (aborted ? "observation stopped after 30000 accepted steps"
                             : "status=" + to_string(repA.status)) +
                    " at t=" + fmt(tA) + "); L-inf factor 100 was " +
                    (linf_fire_t >= 0.0 ? "reached at t=" + fmt(linf_fire_t)
                                        : "not reached") +
                    ", but the adaptive dt floor observed was " + fmt(min_dt_seen) +
                    " >> dt_min=1e-9: on a fixed grid the drift velocity is capped "
                    "at ~m/(2 pi h), so the CFL bound cannot collapse that far";
    }

    // part B: subcritical contrast at the same resolution
    SimState s1 = make_state(1.0);
    DerivedParams dp1 = dp_of(s1, dom, p, knowns.k, knowns.cgn);
    SolverConfig cfgB = cfg;
    cfgB.t_end = 50.0;
    RunResult rb = run(s1, p, dp1, cfgB, dom, 200, {}, auditor(dp1, p, dom));
    const double init_peak1 = linf_norm(s1.u);
    const bool partB = rb.report.status == RunStatus::completed &&
                       rb.report.peak_linf_u <= 100.0 * init_peak1;

    record(7, "blow-up vs boundedness contrast (m=13 vs m=1, 128x128)",
           on_line && blowup_mass && partA && partB,
           std::string("m=13: ") + evidenceA + "; m=1: status=" +
               to_string(rb.report.status) + " peak linf=" +
               fmt(rb.report.peak_linf_u) + " (bounded)");

    // supplementary, not a criterion: with the dt floor set just above the
    // scheme's aggregation CFL scale (~cfl*h/(m/(2 pi h)) ~ 1.7e-5 here) the
    // dual trigger does fire well before t = 10
    SolverConfig cfgS = cfg;
    cfgS.dt_min = 2e-5;
    RunResult rs = run(make_state(13.0), p, dp13, cfgS, dom, 50);
    note(std::string("supplementary (non-criterion): same probe with dt_min=2e-5 "
                     "-> status=") +
         to_string(rs.report.status) + " at t=" + fmt(rs.report.t_stop) +
         ", peak ratio=" + fmt(rs.report.peak_linf_u / init_peak));
}

void criterion_8() {
    // mirror data with chi2/chi1 = 2 on the mass line, subcritical product
    const DomainSpec dom(1.0, 1.0, 64, 64);
    ModelParams p;
    p.chi2 = 2.0;
    SimState s;
    s.u = build_gaussian_bump(dom, 5.0, 0.35, 0.6, 0.15, 1e-8);
    Field v0(64, 64, 0.0);
    auto [w0, z0] = build_symmetric_copy(s.u, v0, p);
    s.w = std::move(w0);
    HelmholtzSolver hh(dom);
    s.v = hh.solve(s.w, 1.0, 1.0);
    s.z = hh.solve(s.u, 1.0, 1.0);
    DerivedParams dp = dp_of(s, dom, p, 1.0, 0.5);

    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.dt_max = 1e-3;
    const double r = p.chi2 / p.chi1;
    double worst = 0.0;
    long long samples = 0;
    RunResult rr = run(s, p, dp, cfg, dom, 5, {}, [&](const SimState& cur) {
        double defect = 0.0;
        for (std::size_t i = 0; i < cur.u.size(); ++i)
            defect = std::max(defect, std::abs(cur.w[i] - r * cur.u[i]));
        worst = std::max(worst, defect / linf_norm(cur.w));
        ++samples;
        g_audit.observe(cur, dp, p, dom);
    });
    const bool ok = rr.report.status == RunStatus::completed && worst <= 1e-8;
    record(8, "symmetric reduction: w stays proportional to u", ok,
           "max rel |w - (chi2/chi1) u| = " + fmt(worst) + " over " +
               std::to_string(samples) + " samples (tol 1e-8), status=" +
               to_string(rr.report.status));
}

void criterion_9() {
    OptimizerConfig cfg;
    cfg.max_iters = 300;
    cfg.random_starts = 4;
    cfg.seed = 20240801;

    bool ok = true;
    std::string ev;
    for (const auto& [lx, ly] : std::vector<std::pair<double, double>>{{1.0, 1.0},
                                                                       {2.0, 1.0}}) {
        const DomainSpec dom(lx, ly, 128, 128);
        const double exact = poincare_l2_reference(dom);
        const double got = poincare_l2_oracle(dom, cfg);
        const double rel = std::abs(got - exact) / exact;
        ok = ok && rel <= 0.02;

        const ConstantEstimate k = estimate_k(dom, cfg);
        const double ref = k_lower_reference(dom);
        ok = ok && k.value >= 0.5 * ref;
        ev += fmt(lx) + "x" + fmt(ly) + ": lambda1 rel err=" + fmt(rel) +
              ", k_hat=" + fmt(k.value) + " vs convex reference 4d^2/pi^2=" + fmt(ref) +
              "; ";
    }
    record(9, "optimizer oracle: Poincare eigenvalue within 2%, k certificate", ok,
           ev);
}

void criterion_10() {
    // scale invariance of the Gagliardo-Nirenberg certificate ratio
    const DomainSpec dom(1.0, 1.0, 64, 64);
    std::mt19937_64 rng(991);
    std::uniform_real_distribution<double> d(-1.0, 1.0), scale(0.25, 4.0);
    auto ratio = [&](const Field& psi) {
        double n4 = 0.0, b = 0.0;
        for (double v : psi.values()) {
            n4 += v * v * v * v;
            b += v * v;
        }
        n4 *= dom.cell_area();
        b *= dom.cell_area();
        return n4 / (8.0 * (b * gradient_sq_norm(psi, dom) + b * b));
    };
    int scale_violations = 0;
    for (int i = 0; i < 100; ++i) {
        Field psi(64, 64);
        for (double& v : psi.values()) v = d(rng);
        const double r0 = ratio(psi);
        Field scaled = psi;
        const double lam = scale(rng);
        for (double& v : scaled.values()) v *= lam;
        if (std::abs(ratio(scaled) - r0) > 1e-12 * r0) ++scale_violations;
    }

    const bool ok = g_audit.samples > 0 && g_audit.ckp_violations == 0 &&
                    g_audit.entropy_violations == 0 && scale_violations == 0;
    record(10, "inequality suites: CKP, entropy floor, C_GN scale invariance", ok,
           std::to_string(g_audit.samples) + " sampled states, CKP violations=" +
               std::to_string(g_audit.ckp_violations) +
               (g_audit.ckp_violations > 0
                    ? " (worst excess " + fmt(g_audit.worst_ckp_excess) + ")"
                    : "") +
               ", entropy floor violations=" +
               std::to_string(g_audit.entropy_violations) +
               ", scale-invariance violations=" + std::to_string(scale_violations) +
               "/100");
}

void criterion_11() {
    // (a) spatial order on pure diffusion via three grids, dt ~ h^2
    ModelParams p;
    p.chi1 = p.chi2 = 1e-300; // drift off; validation requires chi > 0
    auto heat_error = [&](int n, double dt) {
        const DomainSpec dom(1.0, 1.0, n, n);
        SimState s;
        s.u = Field(n, n);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                s.u(ix, iy) = 1.0 + 0.5 * std::cos(M_PI * dom.cell_x(ix));
        s.w = s.u;
        s.v = Field(n, n, 1.0);
        s.z = Field(n, n, 1.0);
        SolverConfig cfg;
        cfg.dt_init = cfg.dt_min = cfg.dt_max = dt;
        cfg.t_end = 0.25;
        DerivedParams dp = dp_of(s, dom, p, 1.0, 0.5);
        RunResult rr = run(s, p, dp, cfg, dom, 1 << 30);
        double err = 0.0;
        const double decay = std::exp(-M_PI * M_PI * rr.final_state.t);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double want =
                    1.0 + 0.5 * decay * std::cos(M_PI * dom.cell_x(ix));
                err = std::max(err, std::abs(rr.final_state.u(ix, iy) - want));
            }
        return err;
    };
    const double e32 = heat_error(32, 4e-4);
    const double e64 = heat_error(64, 1e-4);
    const double e128 = heat_error(128, 2.5e-5);
    const double order1 = std::log2(e32 / e64);
    const double order2 = std::log2(e64 / e128);
    const bool order_ok = std::min(order1, order2) >= 1.8;

    // (b) snapshot round trip is bit-exact
    const DomainSpec dom(1.0, 1.0, 32, 32);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> d(1e-9, 1e9);
    SimState s;
    s.t = 4.5;
    s.u = Field(32, 32);
    s.v = Field(32, 32);
    s.w = Field(32, 32);
    s.z = Field(32, 32);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        s.u[i] = d(rng);
        s.v[i] = d(rng);
        s.w[i] = d(rng);
        s.z[i] = d(rng);
    }
    const std::string snap_path =
        (std::filesystem::temp_directory_path() / "chemotax_acceptance_snap.bin")
            .string();
    write_snapshot(snap_path, make_snapshot(s, dom, p));
    const Snapshot back = read_snapshot(snap_path);
    bool snap_ok = back.t == s.t;
    for (std::size_t i = 0; i < s.u.size() && snap_ok; ++i)
        snap_ok = back.u[i] == s.u[i] && back.v[i] == s.v[i] &&
                  back.w[i] == s.w[i] && back.z[i] == s.z[i];
    std::remove(snap_path.c_str());

    // (c) sweep rerun is byte-identical under a fixed seed
    RunConfig rc;
    rc.nx = rc.ny = 32;
    rc.init_u.builder = "random";
    rc.init_u.amplitude = 0.3;
    rc.init_u.seed = 1;
    rc.init_u.seed_set = true;
    rc.init_w.builder = "random";
    rc.init_w.amplitude = 0.3;
    rc.init_w.seed = 2;
    rc.init_w.seed_set = true;
    rc.solver.t_end = 0.1;
    rc.k_user = 1.0;
    rc.cgn_user = 0.5;
    rc.base_seed = 77;
    const SweepSpec spec = parse_grid_spec("m1=0.5:1.5:2,m2=0.5:1.5:2");
    const std::string sweep1 = sweep_csv(run_sweep(rc, spec, 1));
    const std::string sweep2 = sweep_csv(run_sweep(rc, spec, 1));
    const bool sweep_ok = sweep1 == sweep2;

    record(11, "spatial order >= 1.8, snapshot and sweep determinism",
           order_ok && snap_ok && sweep_ok,
           "orders=" + fmt(order1) + "," + fmt(order2) + " snapshot bit-exact=" +
               (snap_ok ? "yes" : "NO") + " sweep rerun identical=" +
               (sweep_ok ? "yes" : "NO"));
}

} // namespace

int main() {
    std::cout << "chemotax acceptance suite\n";
    const EstimatedConstants knowns = estimate_unit_square_constants();
    std::cout << "domain constants (unit square, 64x64 estimation grid): k_hat=" +
                     fmt(knowns.k) + " cgn_hat=" + fmt(knowns.cgn) + "\n";

    auto guarded = [&](int id, const char* name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            record(id, name, false, std::string("exception: ") + e.what());
        }
    };

    bool pe_converged = false;
    guarded(1, "criteria 1+3 block", [&] { criteria_1_and_3(knowns); });
    guarded(2, "signal L1 relaxation law", [&] { criterion_2(); });
    guarded(4, "G-decay block", [&] { criterion_4_and_6_pe(knowns, pe_converged); });
    guarded(5, "H-decay block",
            [&] { criterion_5_and_6_pp(knowns, pe_converged); });
    guarded(7, "blow-up contrast", [&] { criterion_7(knowns); });
    guarded(8, "symmetric reduction", [&] { criterion_8(); });
    guarded(9, "optimizer oracle", [&] { criterion_9(); });
    guarded(10, "inequality suites", [&] { criterion_10(); });
    guarded(11, "order and determinism", [&] { criterion_11(); });

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED\n"
                                  : std::to_string(g_failures) +
                                        " criterion(s) FAILED\n");
    return g_failures;
}
