#include "chemotax/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace chemotax {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution on distinct
// plans and buffers is.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

DomainSpec::DomainSpec(double lx, double ly, int nx, int ny)
    : lx(lx), ly(ly), nx(nx), ny(ny) {
    if (!(lx > 0.0) || !(ly > 0.0))
        throw InvalidData("DomainSpec: side lengths must be positive");
    if (nx < 4 || ny < 4)
        throw InvalidData("DomainSpec: need at least 4 cells per direction");
}

double DomainSpec::diameter() const { return std::sqrt(lx * lx + ly * ly); }

bool is_finite(const Field& f) {
    for (double v : f.values())
        if (!std::isfinite(v)) return false;
    return true;
}

void require_finite(const Field& f, const char* what) {
    if (!is_finite(f))
        throw InvalidField(std::string(what) + ": non-finite field entry");
}

double integrate(const Field& f, const DomainSpec& dom) {
    require_finite(f, "integrate");
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * dom.cell_area();
}

double field_min(const Field& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}

double field_max(const Field& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}

double linf_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double mean_value(const Field& f, const DomainSpec& dom) {
    return integrate(f, dom) / dom.area();
}

double l1_norm(const Field& f, const DomainSpec& dom) {
    double s = 0.0;
    for (double v : f.values()) s += std::abs(v);
    return s * dom.cell_area();
}

double l2_norm_sq(const Field& f, const DomainSpec& dom) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return s * dom.cell_area();
}

double l2_inner(const Field& f, const Field& g, const DomainSpec& dom) {
    double s = 0.0;
    const auto& a = f.values();
    const auto& b = g.values();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * dom.cell_area();
}

FaceGradients grad_faces(const Field& f, const DomainSpec& dom) {
    require_finite(f, "grad_faces");
    const int nx = dom.nx, ny = dom.ny;
    FaceGradients g;
    g.nx = nx;
    g.ny = ny;
    g.gx.assign(static_cast<std::size_t>(nx + 1) * ny, 0.0);
    g.gy.assign(static_cast<std::size_t>(nx) * (ny + 1), 0.0);
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    for (int iy = 0; iy < ny; ++iy)
        for (int i = 1; i < nx; ++i)
            g.x(i, iy) = (f(i, iy) - f(i - 1, iy)) * ihx;
    for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix)
            g.y(ix, j) = (f(ix, j) - f(ix, j - 1)) * ihy;
    return g;
}

double gradient_sq_norm(const Field& f, const DomainSpec& dom) {
    require_finite(f, "gradient_sq_norm");
    const int nx = dom.nx, ny = dom.ny;
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    double s = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int i = 1; i < nx; ++i) {
            const double d = (f(i, iy) - f(i - 1, iy)) * ihx;
            s += d * d;
        }
    for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix) {
            const double d = (f(ix, j) - f(ix, j - 1)) * ihy;
            s += d * d;
        }
    return s * dom.cell_area();
}

double max_face_gradient(const Field& f, const DomainSpec& dom) {
    const int nx = dom.nx, ny = dom.ny;
    const double ihx = 1.0 / dom.hx(), ihy = 1.0 / dom.hy();
    double m = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int i = 1; i < nx; ++i)
            m = std::max(m, std::abs((f(i, iy) - f(i - 1, iy)) * ihx));
    for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix)
            m = std::max(m, std::abs((f(ix, j) - f(ix, j - 1)) * ihy));
    return m;
}

Field laplacian(const Field& f, const DomainSpec& dom) {
    const int nx = dom.nx, ny = dom.ny;
    const double ihx2 = 1.0 / (dom.hx() * dom.hx());
    const double ihy2 = 1.0 / (dom.hy() * dom.hy());
    Field out(nx, ny);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double c = f(ix, iy);
            // mirror ghost cells: boundary face flux is exactly zero
            const double fw = ix > 0 ? f(ix - 1, iy) : c;
            const double fe = ix < nx - 1 ? f(ix + 1, iy) : c;
            const double fs = iy > 0 ? f(ix, iy - 1) : c;
            const double fn = iy < ny - 1 ? f(ix, iy + 1) : c;
            out(ix, iy) = (fw - 2.0 * c + fe) * ihx2 + (fs - 2.0 * c + fn) * ihy2;
        }
    }
    return out;
}

Field apply_helmholtz(const Field& f, double a, double b, const DomainSpec& dom) {
    Field lap = laplacian(f, dom);
    Field out(dom.nx, dom.ny);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a * f[i] - b * lap[i];
    return out;
}

// ---------------------------------------------------------------------------
// Helmholtz solver
// ---------------------------------------------------------------------------

struct HelmholtzSolver::Impl {
    DomainSpec dom;
    HelmholtzBackend backend;

    // DCT workspace. DCT-II forward / DCT-III backward diagonalize the
    // Neumann 5-point Laplacian on cell centers; combined FFTW scaling is
    // 4*nx*ny.
    double* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::vector<double> lam_x;
    std::vector<double> lam_y;

    explicit Impl(const DomainSpec& d, HelmholtzBackend be) : dom(d), backend(be) {
        if (backend == HelmholtzBackend::dct) {
            const int nx = dom.nx, ny = dom.ny;
            buf = fftw_alloc_real(static_cast<std::size_t>(nx) * ny);
            {
                std::lock_guard<std::mutex> lock(fftw_plan_mutex());
                // row-major logical layout: ny rows of nx; FFTW wants (n0, n1) =
                // (ny, nx)
                fwd = fftw_plan_r2r_2d(ny, nx, buf, buf, FFTW_REDFT10, FFTW_REDFT10,
                                       FFTW_ESTIMATE);
                bwd = fftw_plan_r2r_2d(ny, nx, buf, buf, FFTW_REDFT01, FFTW_REDFT01,
                                       FFTW_ESTIMATE);
            }
            lam_x.resize(nx);
            lam_y.resize(ny);
            const double ihx2 = 1.0 / (dom.hx() * dom.hx());
            const double ihy2 = 1.0 / (dom.hy() * dom.hy());
            for (int p = 0; p < nx; ++p)
                lam_x[p] = 2.0 * (1.0 - std::cos(M_PI * p / nx)) * ihx2;
            for (int q = 0; q < ny; ++q)
                lam_y[q] = 2.0 * (1.0 - std::cos(M_PI * q / ny)) * ihy2;
        }
    }

    ~Impl() {
        if (backend == HelmholtzBackend::dct) {
            std::lock_guard<std::mutex> lock(fftw_plan_mutex());
            if (fwd) fftw_destroy_plan(fwd);
            if (bwd) fftw_destroy_plan(bwd);
            if (buf) fftw_free(buf);
        }
    }

    Field solve_dct(const Field& rhs, double a, double b) const {
        const int nx = dom.nx, ny = dom.ny;
        const std::size_t n = rhs.size();
        std::copy(rhs.data(), rhs.data() + n, buf);
        fftw_execute(fwd);
        const double scale = 1.0 / (4.0 * nx * ny);
        for (int q = 0; q < ny; ++q) {
            const double ly = lam_y[q];
            double* row = buf + static_cast<std::size_t>(q) * nx;
            for (int p = 0; p < nx; ++p)
                row[p] *= scale / (a + b * (lam_x[p] + ly));
        }
        fftw_execute(bwd);
        Field sol(nx, ny);
        std::copy(buf, buf + n, sol.data());
        return sol;
    }

    Field solve_pcg(const Field& rhs, double a, double b) const {
        const std::size_t n = rhs.size();
        Field x(dom.nx, dom.ny, 0.0);
        Field r = rhs;
        Field p = r;
        const double rhs_inf = linf_norm(rhs);
        if (rhs_inf == 0.0) return x;
        const double tol_inf = 0.5 * HelmholtzSolver::residual_tol * rhs_inf;
        double rr = 0.0;
        for (std::size_t i = 0; i < n; ++i) rr += r[i] * r[i];
        const int max_iters = 40 * (dom.nx + dom.ny) + 200;
        int it = 0;
        for (; it < max_iters; ++it) {
            if (linf_norm(r) <= tol_inf) break;
            Field ap = apply_helmholtz(p, a, b, dom);
            double pap = 0.0;
            for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
            const double alpha = rr / pap;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            double rr_new = 0.0;
            for (std::size_t i = 0; i < n; ++i) rr_new += r[i] * r[i];
            const double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        }
        if (linf_norm(r) > tol_inf)
            throw SolveFailure("HelmholtzSolver(pcg): no convergence, residual " +
                                   std::to_string(linf_norm(r)),
                               linf_norm(r), it);
        // pin the discrete compatibility identity integrate(sol)=integrate(rhs)/a
        const double shift =
            (mean_value(rhs, dom) / a) - mean_value(x, dom);
        for (std::size_t i = 0; i < n; ++i) x[i] += shift;
        return x;
    }
};

HelmholtzSolver::HelmholtzSolver(const DomainSpec& dom, HelmholtzBackend backend)
    : impl_(std::make_unique<Impl>(dom, backend)) {}

HelmholtzSolver::~HelmholtzSolver() = default;
HelmholtzSolver::HelmholtzSolver(HelmholtzSolver&&) noexcept = default;
HelmholtzSolver& HelmholtzSolver::operator=(HelmholtzSolver&&) noexcept = default;

const DomainSpec& HelmholtzSolver::domain() const { return impl_->dom; }
HelmholtzBackend HelmholtzSolver::backend() const { return impl_->backend; }

Field HelmholtzSolver::solve(const Field& rhs, double a, double b) const {
    if (!(a > 0.0) || !(b >= 0.0))
        throw InvalidData("HelmholtzSolver::solve: need a > 0, b >= 0");
    require_finite(rhs, "HelmholtzSolver::solve");
    if (rhs.nx() != impl_->dom.nx || rhs.ny() != impl_->dom.ny)
        throw InvalidData("HelmholtzSolver::solve: rhs shape mismatch");

    Field sol = impl_->backend == HelmholtzBackend::dct ? impl_->solve_dct(rhs, a, b)
                                                        : impl_->solve_pcg(rhs, a, b);

    Field rec = apply_helmholtz(sol, a, b, impl_->dom);
    double res = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i)
        res = std::max(res, std::abs(rec[i] - rhs[i]));
    const double bound = residual_tol * std::max(linf_norm(rhs), 1e-300);
    if (res > bound)
        throw SolveFailure("HelmholtzSolver: residual contract violated, |r|_inf = " +
                               std::to_string(res),
                           res, 0);
    return sol;
}

} // namespace chemotax
