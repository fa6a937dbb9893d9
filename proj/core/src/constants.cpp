#include "chemotax/constants.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace chemotax {

double pistar(const DomainSpec&) { return 4.0 * M_PI; }

double k_lower_reference(const DomainSpec& dom) {
    const double d = dom.diameter();
    return 4.0 * d * d / (M_PI * M_PI);
}

double poincare_l2_reference(const DomainSpec& dom) {
    const double lmax = std::max(dom.lx, dom.ly);
    return M_PI * M_PI / (lmax * lmax);
}

double cgn4_reference() { return 1.0 / (8.0 * M_PI); }

namespace {

// Shared multi-start first-order engine. objective and gradient are supplied
// per estimator; `project` restores the feasible manifold (mean-zero update
// directions for the mean-1 constrained problems). Minimization throughout;
// ascent problems negate. Deterministic: fixed seed, sequential starts,
// best-so-far reduction with lowest-start-index tie-break.
struct DescentProblem {
    std::function<double(const Field&)> objective;
    std::function<Field(const Field&)> gradient;
    std::function<void(Field&)> project; // may be empty
    std::function<bool(const Field&)> degenerate;
};

struct DescentResult {
    double best = 0.0;
    Field argbest;
    int iterations = 0;
    bool found = false;
    std::vector<double> history;
};

void project_if(const DescentProblem& p, Field& f) {
    if (p.project) p.project(f);
}

// Backtracking line search halving from 1.0; accepts simple decrease.
// Returns accepted iteration count for this start.
int descend(const DescentProblem& p, Field& x, double& fx, int max_iters,
            double rel_tol) {
    int accepted = 0;
    for (int it = 0; it < max_iters; ++it) {
        Field g = p.gradient(x);
        project_if(p, g);
        const double gnorm = linf_norm(g);
        if (gnorm == 0.0) break;
        // scale-free initial step: relative to the iterate's own size
        const double x_scale = std::max(linf_norm(x), 1e-12);
        double step = 1.0 * x_scale / gnorm;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Field trial = x;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= step * g[i];
            project_if(p, trial);
            if (!p.degenerate(trial)) {
                const double ft = p.objective(trial);
                if (ft < fx) {
                    const double improvement = (fx - ft) / (std::abs(fx) + 1e-300);
                    x = std::move(trial);
                    fx = ft;
                    ++accepted;
                    moved = true;
                    if (improvement < rel_tol) return accepted;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) break; // no decrease found along the subgradient
    }
    return accepted;
}

DescentResult multistart(const DescentProblem& p, const DomainSpec& dom,
                         const OptimizerConfig& cfg, std::vector<Field> starts) {
    DescentResult res;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int s = 0; s < cfg.random_starts; ++s) {
        Field f(dom.nx, dom.ny);
        for (double& v : f.values()) v = 1.0 + unit(rng);
        starts.push_back(std::move(f));
    }

    for (auto& start : starts) {
        Field x = start;
        project_if(p, x);
        if (p.degenerate(x)) {
            res.history.push_back(res.found ? res.best
                                            : std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double fx = p.objective(x);
        res.iterations += descend(p, x, fx, cfg.max_iters, cfg.rel_tol);
        if (!res.found || fx < res.best) {
            res.found = true;
            res.best = fx;
            res.argbest = std::move(x);
        }
        res.history.push_back(res.best);
    }
    return res;
}

// tangent projection for the mean-1 constrained problems (iterates are
// stored as psi = phi - 1 with mean zero)
void zero_mean_direction(Field& g, const DomainSpec& dom) {
    const double m = mean_value(g, dom);
    for (double& v : g.values()) v -= m;
}

Field cosine_mode(const DomainSpec& dom) {
    // lowest nonconstant Neumann mode along the longer side
    Field f(dom.nx, dom.ny);
    const bool along_x = dom.lx >= dom.ly;
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix)
            f(ix, iy) = 1.0 + (along_x ? std::cos(M_PI * dom.cell_x(ix) / dom.lx)
                                       : std::cos(M_PI * dom.cell_y(iy) / dom.ly));
    return f;
}

double l1_grad_norm(const Field& f, const DomainSpec& dom) {
    const int nx = dom.nx, ny = dom.ny;
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    double s = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int i = 1; i < nx; ++i) s += std::abs((f(i, iy) - f(i - 1, iy)) * ihx);
    for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix) s += std::abs((f(ix, j) - f(ix, j - 1)) * ihy);
    return s * dom.cell_area();
}

int sgn0(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

} // namespace

ConstantEstimate estimate_k(const DomainSpec& dom, const OptimizerConfig& cfg) {
    if (dom.nx < 32 || dom.ny < 32)
        throw InvalidData("estimate_k: grid must be at least 32x32");
    const double da = dom.cell_area();
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();

    // optimize over psi = phi - 1 with mean zero; both norms in the ratio are
    // homogeneous in psi, so no amplitude normalization is needed
    DescentProblem p;
    p.objective = [&](const Field& psi) {
        const double l = l1_grad_norm(psi, dom);
        double d = 0.0;
        for (double v : psi.values()) d += v * v;
        d *= da;
        return l * l / d;
    };
    p.degenerate = [&](const Field& psi) {
        double d = 0.0;
        for (double v : psi.values()) d += v * v;
        return d * da < 1e-24;
    };
    p.project = [&](Field& psi) { zero_mean_direction(psi, dom); };
    p.gradient = [&](const Field& psi) {
        const double l = l1_grad_norm(psi, dom);
        double d = 0.0;
        for (double v : psi.values()) d += v * v;
        d *= da;
        // dJ/dpsi_i with J = L^2/D; subgradient of L uses sign with 0 at ties
        Field g(dom.nx, dom.ny, 0.0);
        for (int iy = 0; iy < dom.ny; ++iy)
            for (int i = 1; i < dom.nx; ++i) {
                const int s = sgn0(psi(i, iy) - psi(i - 1, iy));
                g(i, iy) += s * ihx * da;
                g(i - 1, iy) -= s * ihx * da;
            }
        for (int j = 1; j < dom.ny; ++j)
            for (int ix = 0; ix < dom.nx; ++ix) {
                const int s = sgn0(psi(ix, j) - psi(ix, j - 1));
                g(ix, j) += s * ihy * da;
                g(ix, j - 1) -= s * ihy * da;
            }
        // g currently holds dL/dpsi
        Field out(dom.nx, dom.ny);
        const double d2 = d * d;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (2.0 * l * g[i] * d - l * l * 2.0 * psi[i] * da) / d2;
        return out;
    };

    Field warm = cosine_mode(dom);
    for (double& v : warm.values()) v -= 1.0; // psi convention

    DescentResult r = multistart(p, dom, cfg, {warm});
    if (!r.found) throw EstimateFailure("estimate_k: all starts degenerate");

    ConstantEstimate est;
    est.value = 4.0 * dom.area() / r.best;
    est.direction = BoundDirection::lower;
    est.iterations = r.iterations;
    est.best_test_function = r.argbest;
    for (double& v : est.best_test_function.values()) v += 1.0; // back to phi
    for (double h : r.history)
        est.objective_history.push_back(std::isnan(h) ? h : 4.0 * dom.area() / h);
    est.discretization_alarm = est.value > 100.0 * k_lower_reference(dom);
    return est;
}

ConstantEstimate estimate_cgn(const DomainSpec& dom, const OptimizerConfig& cfg) {
    if (dom.nx < 32 || dom.ny < 32)
        throw InvalidData("estimate_cgn: grid must be at least 32x32");
    const double da = dom.cell_area();

    auto ratio = [&](const Field& psi) {
        double n4 = 0.0, b = 0.0;
        for (double v : psi.values()) {
            n4 += v * v * v * v;
            b += v * v;
        }
        n4 *= da;
        b *= da;
        const double c = gradient_sq_norm(psi, dom);
        return n4 / (8.0 * (b * c + b * b));
    };

    DescentProblem p;
    // minimize -R
    p.objective = [&](const Field& psi) { return -ratio(psi); };
    p.degenerate = [&](const Field& psi) {
        double b = 0.0;
        for (double v : psi.values()) b += v * v;
        return b * da < 1e-24;
    };
    p.project = {};
    p.gradient = [&](const Field& psi) {
        double n4 = 0.0, b = 0.0;
        for (double v : psi.values()) {
            n4 += v * v * v * v;
            b += v * v;
        }
        n4 *= da;
        b *= da;
        const double c = gradient_sq_norm(psi, dom);
        const double den = 8.0 * (b * c + b * b);
        Field lap = laplacian(psi, dom);
        Field g(dom.nx, dom.ny);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double dn = 4.0 * psi[i] * psi[i] * psi[i] * da;
            const double db = 2.0 * psi[i] * da;
            const double dc = -2.0 * lap[i] * da;
            const double dden = 8.0 * (db * c + b * dc + 2.0 * b * db);
            // gradient of -R
            g[i] = -(dn * den - n4 * dden) / (den * den);
        }
        return g;
    };

    // deterministic starts: a mild bump, and the constant field (a critical
    // point of R whose certificate 1/(8|O|) enters the best-so-far directly)
    Field warm(dom.nx, dom.ny);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix)
            warm(ix, iy) = 1.0 + std::cos(M_PI * dom.cell_x(ix) / dom.lx) *
                                     std::cos(M_PI * dom.cell_y(iy) / dom.ly);

    DescentResult r = multistart(p, dom, cfg, {warm, Field(dom.nx, dom.ny, 1.0)});
    if (!r.found) throw EstimateFailure("estimate_cgn: all starts degenerate");

    ConstantEstimate est;
    est.value = -r.best; // best R certifies C_GN^4 >= value
    est.direction = BoundDirection::lower;
    est.iterations = r.iterations;
    est.best_test_function = std::move(r.argbest);
    for (double h : r.history)
        est.objective_history.push_back(std::isnan(h) ? h : -h);
    return est;
}

double poincare_l2_oracle(const DomainSpec& dom, const OptimizerConfig& cfg) {
    const double da = dom.cell_area();

    DescentProblem p; // over psi = phi - 1, mean zero
    p.objective = [&](const Field& psi) {
        double d = 0.0;
        for (double v : psi.values()) d += v * v;
        return gradient_sq_norm(psi, dom) / (d * da);
    };
    p.degenerate = [&](const Field& psi) {
        double d = 0.0;
        for (double v : psi.values()) d += v * v;
        return d * da < 1e-24;
    };
    p.project = [&](Field& psi) { zero_mean_direction(psi, dom); };
    p.gradient = [&](const Field& psi) {
        double d = 0.0;
        for (double v : psi.values()) d += v * v;
        d *= da;
        const double c = gradient_sq_norm(psi, dom);
        Field lap = laplacian(psi, dom);
        Field g(dom.nx, dom.ny);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double dc = -2.0 * lap[i] * da;
            const double dd = 2.0 * psi[i] * da;
            g[i] = (dc * d - c * dd) / (d * d);
        }
        return g;
    };

    Field warm = cosine_mode(dom);
    for (double& v : warm.values()) v -= 1.0;

    DescentResult r = multistart(p, dom, cfg, {warm});
    if (!r.found) throw EstimateFailure("poincare_l2_oracle: all starts degenerate");
    return r.best;
}

} // namespace chemotax
