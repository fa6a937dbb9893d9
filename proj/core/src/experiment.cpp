#include "chemotax/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

namespace chemotax {

std::string format_double(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string csv_header() {
    return "t,mass_u,mass_w,mass_v,mass_z,entropy_u,entropy_w,linf_u,linf_w,"
           "h1_v,h1_z,F,G,H,l1_U_minus_1,l1_W_minus_1,w1inf_dist_u,w1inf_dist_w,dt";
}

std::string csv_row(const DiagnosticsRow& r) {
    std::string s;
    s.reserve(256);
    auto add = [&](double v) {
        s += format_double(v);
        s += ',';
    };
    auto add_opt = [&](const std::optional<double>& v) {
        if (v) s += format_double(*v);
        s += ',';
    };
    add(r.t);
    add(r.mass_u);
    add(r.mass_w);
    add(r.mass_v);
    add(r.mass_z);
    add(r.entropy_u);
    add(r.entropy_w);
    add(r.linf_u);
    add(r.linf_w);
    add(r.h1_v);
    add(r.h1_z);
    add(r.F_val);
    add_opt(r.G_val);
    add_opt(r.H_val);
    add(r.l1_U_minus_1);
    add(r.l1_W_minus_1);
    add(r.w1inf_dist_u);
    add(r.w1inf_dist_w);
    s += format_double(r.dt);
    return s;
}

std::string to_string(RunStatus status) {
    switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_indicated: return "blowup_indicated";
    case RunStatus::solver_failure: return "solver_failure";
    }
    return "unknown";
}

Experiment build_experiment_with_constants(const RunConfig& cfg, double k_est,
                                           ConstantProvenance k_prov, double cgn_est,
                                           ConstantProvenance cgn_prov) {
    RunConfig c = cfg;
    c.k_user = k_est;
    c.cgn_user = cgn_est;
    Experiment ex = build_experiment(c);
    ex.dp.k_provenance = k_prov;
    ex.dp.cgn_provenance = cgn_prov;
    return ex;
}

namespace {

struct AxisSpec {
    double lo, hi;
    int n;
};

AxisSpec parse_axis(const std::string& text, const std::string& whole) {
    AxisSpec a{};
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw InvalidData("sweep grid: expected lo:hi:n in '" + whole + "'");
    try {
        a.lo = std::stod(text.substr(0, c1));
        a.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        a.n = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw InvalidData("sweep grid: bad number in '" + whole + "'");
    }
    if (a.n < 1) throw InvalidData("sweep grid: point count must be >= 1");
    return a;
}

double linspace_at(double lo, double hi, int n, int i) {
    if (n == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

SweepSpec parse_grid_spec(const std::string& text) {
    SweepSpec spec;
    bool have_m1 = false, have_m2 = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string part = text.substr(pos, comma - pos);
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw InvalidData("sweep grid: expected name=lo:hi:n in '" + part + "'");
        const std::string name = part.substr(0, eq);
        const AxisSpec a = parse_axis(part.substr(eq + 1), part);
        if (name == "m1") {
            spec.m1_lo = a.lo;
            spec.m1_hi = a.hi;
            spec.m1_n = a.n;
            have_m1 = true;
        } else if (name == "m2") {
            spec.m2_lo = a.lo;
            spec.m2_hi = a.hi;
            spec.m2_n = a.n;
            have_m2 = true;
        } else {
            throw InvalidData("sweep grid: unknown axis '" + name + "'");
        }
        pos = comma + 1;
    }
    if (!have_m1 && !have_m2)
        throw InvalidData("sweep grid: need at least one of m1=, m2=");
    return spec;
}

std::uint64_t point_seed(std::uint64_t base, std::size_t index) {
    return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

std::vector<SweepPoint> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                  int jobs) {
    if (jobs < 1) jobs = 1;
    // domain constants do not depend on the masses: estimate once
    double k_est, cgn_est;
    ConstantProvenance k_prov, cgn_prov;
    if (base.k_user) {
        k_est = *base.k_user;
        k_prov = ConstantProvenance::user_supplied;
    } else {
        const DomainSpec est_dom(base.lx, base.ly, base.est_nx, base.est_ny);
        k_est = estimate_k(est_dom, base.opt).value;
        k_prov = ConstantProvenance::estimated;
    }
    if (base.cgn_user) {
        cgn_est = *base.cgn_user;
        cgn_prov = ConstantProvenance::user_supplied;
    } else {
        const DomainSpec est_dom(base.lx, base.ly, base.est_nx, base.est_ny);
        cgn_est = std::pow(estimate_cgn(est_dom, base.opt).value, 0.25);
        cgn_prov = ConstantProvenance::estimated;
    }

    const int total = spec.m1_n * spec.m2_n;
    std::vector<SweepPoint> points(static_cast<std::size_t>(total));

    auto run_point = [&](int index) {
        const int i1 = index / spec.m2_n;
        const int i2 = index % spec.m2_n;
        SweepPoint& pt = points[static_cast<std::size_t>(index)];
        pt.m1 = linspace_at(spec.m1_lo, spec.m1_hi, spec.m1_n, i1);
        pt.m2 = linspace_at(spec.m2_lo, spec.m2_hi, spec.m2_n, i2);
        try {
            RunConfig cfg = base;
            cfg.init_u.mass = pt.m1;
            cfg.init_w.mass = pt.m2;
            const std::uint64_t ps = point_seed(base.base_seed, index);
            cfg.init_u.seed = splitmix64(ps ^ 1);
            cfg.init_w.seed = splitmix64(ps ^ 2);
            cfg.init_v.seed = splitmix64(ps ^ 3);
            cfg.init_z.seed = splitmix64(ps ^ 4);
            Experiment ex = build_experiment_with_constants(cfg, k_est, k_prov,
                                                            cgn_est, cgn_prov);
            if (cfg.symmetric_copy) pt.m2 = ex.dp.m2; // implied by the mirror data

            const RegimeVerdict verdict =
                classify(ex.params, ex.dp.m1, ex.dp.m2, ex.dp, ex.dom);
            pt.predicted_b1 = verdict.b1_bounded;
            pt.predicted_b3 = verdict.b3_converges;
            pt.predicted_b4 = verdict.b4_blowup_mass;

            RunResult rr = run(ex.state0, ex.params, ex.dp, cfg.solver, ex.dom,
                               cfg.diagnostics_every);
            pt.observed_status = to_string(rr.report.status);
            std::vector<double> ts, ys;
            for (const auto& row : rr.trajectory) {
                ts.push_back(row.t);
                ys.push_back(row.w1inf_dist_u);
            }
            if (ts.size() >= 8) {
                try {
                    pt.fitted_rate = fit_exponential_rate(ts, ys).rate;
                } catch (const std::exception&) {
                    // not fittable (decayed below measurable or degenerate
                    // window); leave the cell empty
                }
            }
        } catch (const std::exception& e) {
            pt.observed_status = std::string("error: ") + e.what();
        }
    };

    if (jobs == 1 || total == 1) {
        for (int i = 0; i < total; ++i) run_point(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        const int nw = std::min(jobs, total);
        workers.reserve(static_cast<std::size_t>(nw));
        for (int w = 0; w < nw; ++w)
            workers.emplace_back([&] {
                for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& w : workers) w.join();
    }
    return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string s = "m1,m2,predicted_b1,predicted_b3,predicted_b4,observed_status,"
                    "fitted_rate\n";
    for (const auto& p : points) {
        s += format_double(p.m1);
        s += ',';
        s += format_double(p.m2);
        s += ',';
        s += p.predicted_b1 ? '1' : '0';
        s += ',';
        s += p.predicted_b3 ? '1' : '0';
        s += ',';
        s += p.predicted_b4 ? '1' : '0';
        s += ',';
        s += p.observed_status;
        s += ',';
        if (p.fitted_rate) s += format_double(*p.fitted_rate);
        s += '\n';
    }
    return s;
}

} // namespace chemotax
