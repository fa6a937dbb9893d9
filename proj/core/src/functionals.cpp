#include "chemotax/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemotax {

double entropy(const Field& f, const DomainSpec& dom) {
    require_finite(f, "entropy");
    double s = 0.0;
    for (double v : f.values()) {
        if (!(v > 0.0)) throw InvalidField("entropy: nonpositive cell value");
        s += v * std::log(v);
    }
    return s * dom.cell_area();
}

double entropy_floor(const DomainSpec& dom) { return -dom.area() / M_E; }

double grad_inner(const Field& f, const Field& g, const DomainSpec& dom) {
    const int nx = dom.nx, ny = dom.ny;
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    double s = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int i = 1; i < nx; ++i)
            s += (f(i, iy) - f(i - 1, iy)) * (g(i, iy) - g(i - 1, iy)) * ihx * ihx;
    for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix)
            s += (f(ix, j) - f(ix, j - 1)) * (g(ix, j) - g(ix, j - 1)) * ihy * ihy;
    return s * dom.cell_area();
}

double grad_sqrt_sq_norm(const Field& f, const DomainSpec& dom) {
    Field root(f.nx(), f.ny());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0) throw InvalidField("grad_sqrt_sq_norm: negative cell value");
        root[i] = std::sqrt(f[i]);
    }
    return gradient_sq_norm(root, dom);
}

double h1_norm_sq(const Field& f, const DomainSpec& dom) {
    return l2_norm_sq(f, dom) + gradient_sq_norm(f, dom);
}

double w1inf_distance(const Field& f, double c, const DomainSpec& dom) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v - c));
    return m + max_face_gradient(f, dom);
}

namespace {

struct DiffGrid {
    int nx;
    int ny;
    std::vector<double> v;
    double at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * nx + ix]; }
};

DiffGrid diff_x(const DiffGrid& g, double ihx) {
    DiffGrid out{g.nx - 1, g.ny, {}};
    out.v.resize(static_cast<std::size_t>(out.nx) * out.ny);
    for (int iy = 0; iy < out.ny; ++iy)
        for (int ix = 0; ix < out.nx; ++ix)
            out.v[static_cast<std::size_t>(iy) * out.nx + ix] =
                (g.at(ix + 1, iy) - g.at(ix, iy)) * ihx;
    return out;
}

DiffGrid diff_y(const DiffGrid& g, double ihy) {
    DiffGrid out{g.nx, g.ny - 1, {}};
    out.v.resize(static_cast<std::size_t>(out.nx) * out.ny);
    for (int iy = 0; iy < out.ny; ++iy)
        for (int ix = 0; ix < out.nx; ++ix)
            out.v[static_cast<std::size_t>(iy) * out.nx + ix] =
                (g.at(ix, iy + 1) - g.at(ix, iy)) * ihy;
    return out;
}

double max_abs(const DiffGrid& g) {
    double m = 0.0;
    for (double v : g.v) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

double wkinf_distance(const Field& f, double c, const DomainSpec& dom, int order) {
    if (order < 1 || order > 3)
        throw InvalidData("wkinf_distance: order must be 1, 2 or 3");
    double total = 0.0;
    for (double v : f.values()) total = std::max(total, std::abs(v - c));

    DiffGrid gx{dom.nx, dom.ny, f.values()};
    DiffGrid gy = gx;
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    for (int j = 1; j <= order; ++j) {
        gx = diff_x(gx, ihx);
        gy = diff_y(gy, ihy);
        total += std::max(max_abs(gx), max_abs(gy));
    }
    return total;
}

double lyapunov_F(const SimState& state, const ModelParams& params,
                  const DomainSpec& dom) {
    const double c1 = params.chi1, c2 = params.chi2, c3 = params.chi3;
    const Field &u = state.u, &v = state.v, &w = state.w, &z = state.z;

    double int_uv_wz = 0.0, int_wv = 0.0, int_vz = 0.0, int_v2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        int_uv_wz += u[i] * v[i] + w[i] * z[i];
        int_wv += w[i] * v[i];
        int_vz += v[i] * z[i];
        int_v2 += v[i] * v[i];
    }
    const double da = dom.cell_area();
    return c2 * entropy(u, dom) + c1 * entropy(w, dom) - c1 * c2 * int_uv_wz * da -
           c1 * c3 * int_wv * da +
           c1 * c2 * (int_vz * da + grad_inner(v, z, dom)) +
           0.5 * c1 * c3 * (int_v2 * da + gradient_sq_norm(v, dom));
}

namespace {

/// integral of weight * |grad g|^2 with arithmetic face averages of weight.
double weighted_grad_sq(const Field& weight, const Field& g, const DomainSpec& dom) {
    const int nx = dom.nx, ny = dom.ny;
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    double s = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int i = 1; i < nx; ++i) {
            const double d = (g(i, iy) - g(i - 1, iy)) * ihx;
            s += 0.5 * (weight(i, iy) + weight(i - 1, iy)) * d * d;
        }
    for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix) {
            const double d = (g(ix, j) - g(ix, j - 1)) * ihy;
            s += 0.5 * (weight(ix, j) + weight(ix, j - 1)) * d * d;
        }
    return s * dom.cell_area();
}

} // namespace

FDissipation lyapunov_F_dissipation(const SimState& state, const SimState& next,
                                    const ModelParams& params, const DomainSpec& dom,
                                    double dt) {
    const double c1 = params.chi1, c2 = params.chi2, c3 = params.chi3;
    FDissipation out;
    out.lhs = (lyapunov_F(next, params, dom) - lyapunov_F(state, params, dom)) / dt;

    double rhs = 0.0;
    if (params.tau1 + params.tau2 > 0.0) {
        double int_vtzt = 0.0, int_vt2 = 0.0;
        for (std::size_t i = 0; i < state.v.size(); ++i) {
            const double vt = (next.v[i] - state.v[i]) / dt;
            const double zt = (next.z[i] - state.z[i]) / dt;
            int_vtzt += vt * zt;
            int_vt2 += vt * vt;
        }
        rhs -= (params.tau1 + params.tau2) * c1 * c2 * int_vtzt * dom.cell_area();
        rhs -= params.tau1 * c1 * c3 * int_vt2 * dom.cell_area();
    }

    // grad(ln u - chi1 v) and grad(ln w - chi2 z - chi3 v) weighted by the
    // densities themselves
    Field gu(state.u.nx(), state.u.ny());
    Field gw(state.u.nx(), state.u.ny());
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        if (!(state.u[i] > 0.0) || !(state.w[i] > 0.0))
            throw InvalidField("lyapunov_F_dissipation: nonpositive density");
        gu[i] = std::log(state.u[i]) - c1 * state.v[i];
        gw[i] = std::log(state.w[i]) - c2 * state.z[i] - c3 * state.v[i];
    }
    rhs -= c2 * weighted_grad_sq(state.u, gu, dom);
    rhs -= c1 * weighted_grad_sq(state.w, gw, dom);
    out.rhs = rhs;
    return out;
}

double lyapunov_G(const NormalizedState& ns, const DerivedParams& dp,
                  const DomainSpec& dom) {
    return (dp.eta2 / dp.eta1) * entropy(ns.U, dom) + entropy(ns.W, dom);
}

double lyapunov_H(const NormalizedState& ns, const DerivedParams& dp,
                  const RateParamsPP& rp, const ModelParams& params,
                  const DomainSpec& dom) {
    if (!params.fully_parabolic())
        throw PreconditionViolation("lyapunov_H: requires tau1, tau2 > 0");
    const double k = dp.k_est;
    const double cV = 1.0 + 2.0 * rp.beta + rp.gamma1 / (k * dp.eta1);
    const double cZ = 1.0 + 2.0 * rp.beta + rp.gamma2 / (k * dp.eta2);
    return (rp.alpha / k) * entropy(ns.U, dom) +
           0.5 * params.tau1 * rp.alpha * gradient_sq_norm(ns.V, dom) +
           0.5 * params.tau1 * rp.alpha * cV * l2_norm_sq(ns.V, dom) +
           (1.0 / k) * entropy(ns.W, dom) +
           0.5 * params.tau2 * gradient_sq_norm(ns.Z, dom) +
           0.5 * params.tau2 * cZ * l2_norm_sq(ns.Z, dom);
}

std::optional<double> rate_mu(const DerivedParams& dp) {
    const double k = dp.k_est;
    const double chip = std::max(dp.chi, 0.0); // chi^+ convention
    const double gap = 4.0 - k * k * dp.eta1 * dp.eta2 - k * dp.eta1 * chip;
    if (!(gap > 0.0)) return std::nullopt;
    const double second = 4.0 / (k * k * dp.eta1 * dp.eta2 + 2.0 * gap);
    return gap / (2.0 * k * k) * std::min(k, second);
}

bool pp_rate_admissible(const DerivedParams& dp) {
    const double k = dp.k_est;
    const double kec = k * dp.eta1 * dp.chi; // signed chi in the window
    const double lo = (2.0 - std::sqrt(22.0)) / 3.0;
    if (!(lo < kec && kec < std::sqrt(2.0))) return false;
    const double cap = (2.0 * std::sqrt(2.0) / 3.0) * std::min(1.0, 1.5 + kec);
    return k * k * dp.eta1 * dp.eta2 < cap;
}

std::optional<RateParamsPP> rate_params_pp(const DerivedParams& dp,
                                           const ModelParams& params) {
    if (!params.fully_parabolic())
        throw PreconditionViolation("rate_params_pp: requires tau1, tau2 > 0");
    if (!pp_rate_admissible(dp)) return std::nullopt;

    const double k = dp.k_est, e1 = dp.eta1, e2 = dp.eta2, chi = dp.chi;
    const double chim = std::max(-chi, 0.0); // chi^- in the alpha formula

    RateParamsPP rp;
    rp.alpha = 0.5 * (std::max(chi * chi / 2.0, e2 / (std::sqrt(2.0) * e1)) +
                      (3.0 - 2.0 * k * e1 * chim) / (3.0 * k * k * e1 * e1));
    rp.beta = (1.0 - k * k * e1 * e1 * rp.alpha) / (k * k * e1 * e1 * rp.alpha);
    rp.gamma1 = (k * e1 * chi + 1.0) / (k * e1 * rp.alpha); // signed chi
    rp.gamma2 = rp.alpha / (k * e2);
    rp.A1 = -((1.0 + rp.beta) * e2 * e2 - 2.0 * rp.alpha / (k * k));
    rp.A2 = -0.5 * ((1.0 - 2.0 * rp.beta) * rp.alpha +
                    (rp.gamma1 * rp.alpha - chi) * (rp.gamma1 * rp.alpha - chi) -
                    2.0 * rp.gamma1 * rp.alpha / (k * e1)); // signed chi
    rp.A3 = -0.5 * (2.0 * (1.0 + rp.beta) * rp.alpha * e1 * e1 - 4.0 / (k * k) +
                    chi * chi / (k * k * rp.alpha));
    rp.A4 = -0.5 * (1.0 - 2.0 * rp.beta + rp.gamma2 * rp.gamma2 / rp.alpha -
                    2.0 * rp.gamma2 / (k * e2));

    for (double v : {rp.alpha, rp.beta, rp.gamma1, rp.gamma2, rp.A1, rp.A2, rp.A3,
                     rp.A4}) {
        if (!(v > 0.0))
            throw std::logic_error(
                "rate_params_pp: transcription alarm: a coefficient is nonpositive "
                "on an admissible configuration");
    }
    return rp;
}

std::optional<double> rate_delta(const RateParamsPP& rp, const DerivedParams& dp,
                                 const ModelParams& params) {
    if (!params.fully_parabolic())
        throw PreconditionViolation("rate_delta: requires tau1, tau2 > 0");
    const double k = dp.k_est, e1 = dp.eta1, e2 = dp.eta2;
    const double t1 = params.tau1, t2 = params.tau2;
    const double cV = 1.0 + 2.0 * rp.beta + rp.gamma1 / (k * e1);
    const double cZ = 1.0 + 2.0 * rp.beta + rp.gamma2 / (k * e2);
    const double branches[6] = {
        rp.A1 * k / rp.alpha,
        2.0 * rp.A2 / (rp.alpha * t1 * cV),
        rp.A3 * k,
        2.0 * rp.A4 / (t2 * cZ),
        2.0 * (rp.gamma1 / (k * e1 * t1) + 2.0 * rp.beta / t1),
        2.0 * (rp.gamma2 / (k * e2 * t2) + 2.0 * rp.beta / t2),
    };
    double d = branches[0];
    for (double b : branches) d = std::min(d, b);
    if (!(d > 0.0)) return std::nullopt;
    return d;
}

RateReport rate_report(const DerivedParams& dp, const ModelParams& params) {
    RateReport r;
    if (params.parabolic_elliptic()) {
        r.mu = rate_mu(dp);
        r.sigma = r.mu;
        if (r.sigma) {
            r.rate_u_w = *r.sigma / 14.0;
            r.rate_vz_ee = *r.mu / 44.0;
        }
    } else if (params.fully_parabolic()) {
        if (auto rp = rate_params_pp(dp, params)) {
            r.delta = rate_delta(*rp, dp, params);
            r.sigma = r.delta;
        }
        if (r.sigma) {
            r.zeta1 = std::min(1.0 / params.tau1, *r.sigma / 2.0);
            r.zeta2 = std::min(1.0 / params.tau2, *r.sigma / 2.0);
            r.zeta = std::min({1.0 / params.tau1, 1.0 / params.tau2, *r.sigma / 2.0});
            r.rate_u_w = *r.sigma / 14.0;
            r.rate_vz_pp = *r.zeta / 15.0;
        }
    }
    return r;
}

CkpGap ckp_gap(const NormalizedState& ns, const DomainSpec& dom) {
    CkpGap g;
    double l1u = 0.0, l1w = 0.0;
    for (std::size_t i = 0; i < ns.U.size(); ++i) {
        l1u += std::abs(ns.U[i] - 1.0);
        l1w += std::abs(ns.W[i] - 1.0);
    }
    l1u *= dom.cell_area();
    l1w *= dom.cell_area();
    g.lhs_u = l1u * l1u;
    g.lhs_w = l1w * l1w;
    g.rhs_u = 2.0 * entropy(ns.U, dom);
    g.rhs_w = 2.0 * entropy(ns.W, dom);
    return g;
}

std::pair<double, double> poincare_gap(const Field& phi, const DomainSpec& dom,
                                       double k) {
    double lhs = 0.0;
    for (double v : phi.values()) lhs += (v - 1.0) * (v - 1.0);
    lhs *= dom.cell_area();
    return {lhs, k * grad_sqrt_sq_norm(phi, dom)};
}

FitResult fit_exponential_rate(const std::vector<double>& t,
                               const std::vector<double>& y, double window_frac) {
    if (t.size() != y.size() || t.size() < 8)
        throw InvalidData("fit_exponential_rate: need >= 8 (t, y) samples");
    if (!(window_frac > 0.0) || window_frac > 1.0)
        throw InvalidData("fit_exponential_rate: window_frac must lie in (0, 1]");
    const std::size_t n = t.size();
    std::size_t begin = n - std::max<std::size_t>(2, static_cast<std::size_t>(window_frac * n));
    if (begin > n - 2) begin = n - 2;

    double st = 0.0, sy = 0.0;
    const std::size_t m = n - begin;
    std::vector<double> ly(m);
    for (std::size_t i = begin; i < n; ++i) {
        if (!(y[i] > 0.0))
            throw FitUndefined("fit_exponential_rate: nonpositive value in window");
        ly[i - begin] = std::log(y[i]);
        st += t[i];
        sy += ly[i - begin];
    }
    const double tbar = st / m, ybar = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = begin; i < n; ++i) {
        const double dx = t[i] - tbar;
        const double dy = ly[i - begin] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InvalidData("fit_exponential_rate: degenerate time window");
    const double slope = sxy / sxx;
    FitResult out;
    out.rate = -slope;
    if (syy == 0.0) {
        out.r2 = 1.0; // constant series: exact (zero-rate) fit
    } else {
        const double ss_res = syy - slope * sxy;
        out.r2 = 1.0 - ss_res / syy;
    }
    return out;
}

DiagnosticsRow collect_diagnostics(const SimState& state, const ModelParams& params,
                                   const DerivedParams& dp, const DomainSpec& dom,
                                   const std::optional<RateParamsPP>& rp, double dt) {
    DiagnosticsRow row;
    row.t = state.t;
    row.dt = dt;
    row.mass_u = integrate(state.u, dom);
    row.mass_w = integrate(state.w, dom);
    row.mass_v = integrate(state.v, dom);
    row.mass_z = integrate(state.z, dom);
    row.entropy_u = entropy(state.u, dom);
    row.entropy_w = entropy(state.w, dom);
    row.linf_u = linf_norm(state.u);
    row.linf_w = linf_norm(state.w);
    row.h1_v = h1_norm_sq(state.v, dom);
    row.h1_z = h1_norm_sq(state.z, dom);
    row.F_val = lyapunov_F(state, params, dom);

    const NormalizedState ns = normalize(state, dp, dom, params);
    row.G_val = lyapunov_G(ns, dp, dom);
    if (rp && params.fully_parabolic())
        row.H_val = lyapunov_H(ns, dp, *rp, params, dom);

    double l1u = 0.0, l1w = 0.0;
    for (std::size_t i = 0; i < ns.U.size(); ++i) {
        l1u += std::abs(ns.U[i] - 1.0);
        l1w += std::abs(ns.W[i] - 1.0);
    }
    row.l1_U_minus_1 = l1u * dom.cell_area();
    row.l1_W_minus_1 = l1w * dom.cell_area();
    row.w1inf_dist_u = w1inf_distance(state.u, dp.u0bar, dom);
    row.w1inf_dist_w = w1inf_distance(state.w, dp.w0bar, dom);
    return row;
}

} // namespace chemotax
