#pragma once

#include <memory>
#include <vector>

#include "chemotax/errors.hpp"

namespace chemotax {

/// Uniform cell-centered Cartesian grid on the rectangle [0,Lx] x [0,Ly]
/// with homogeneous Neumann boundary conditions on all four sides.
struct DomainSpec {
    DomainSpec(double lx, double ly, int nx, int ny);

    double lx;
    double ly;
    int nx;
    int ny;

    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }
    double area() const { return lx * ly; }
    double diameter() const;
    double cell_area() const { return hx() * hy(); }
    int cells() const { return nx * ny; }

    /// Cell-center coordinates, ix in [0,nx), iy in [0,ny).
    double cell_x(int ix) const { return (ix + 0.5) * hx(); }
    double cell_y(int iy) const { return (iy + 0.5) * hy(); }
};

/// Cell-centered scalar grid function, row-major (iy-major, ix fastest).
class Field {
public:
    Field() = default;
    Field(int nx, int ny, double fill = 0.0)
        : nx_(nx), ny_(ny), v_(static_cast<std::size_t>(nx) * ny, fill) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(int ix, int iy) { return v_[static_cast<std::size_t>(iy) * nx_ + ix]; }
    double operator()(int ix, int iy) const { return v_[static_cast<std::size_t>(iy) * nx_ + ix]; }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    bool same_shape(const Field& other) const { return nx_ == other.nx_ && ny_ == other.ny_; }

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> v_;
};

bool is_finite(const Field& f);

/// Throws InvalidField if f contains NaN/Inf.
void require_finite(const Field& f, const char* what);

/// Midpoint quadrature: sum of cell values times hx*hy. Linear in f.
double integrate(const Field& f, const DomainSpec& dom);

double field_min(const Field& f);
double field_max(const Field& f);
double linf_norm(const Field& f);
double mean_value(const Field& f, const DomainSpec& dom);
double l1_norm(const Field& f, const DomainSpec& dom);
double l2_norm_sq(const Field& f, const DomainSpec& dom);
double l2_inner(const Field& f, const Field& g, const DomainSpec& dom);

/// Face-centered gradient components. gx holds (nx+1)*ny values indexed by
/// (face i in [0,nx], row iy); gy holds nx*(ny+1) values. Boundary faces are
/// zero, which is the zero-flux ghost extension.
struct FaceGradients {
    int nx = 0;
    int ny = 0;
    std::vector<double> gx;
    std::vector<double> gy;

    double x(int i, int iy) const { return gx[static_cast<std::size_t>(iy) * (nx + 1) + i]; }
    double& x(int i, int iy) { return gx[static_cast<std::size_t>(iy) * (nx + 1) + i]; }
    double y(int ix, int j) const { return gy[static_cast<std::size_t>(j) * nx + ix]; }
    double& y(int ix, int j) { return gy[static_cast<std::size_t>(j) * nx + ix]; }
};

FaceGradients grad_faces(const Field& f, const DomainSpec& dom);

/// || grad f ||_{L2}^2 by face quadrature: each interior face contributes
/// (df/h)^2 * hx*hy.
double gradient_sq_norm(const Field& f, const DomainSpec& dom);

/// Largest |df/h| over all faces (used for drift CFL bounds and W^{1,inf}).
double max_face_gradient(const Field& f, const DomainSpec& dom);

/// Standard 5-point Laplacian with mirror (zero normal flux) ghost cells.
/// Symmetric w.r.t. the l2 inner product and annihilates constants.
Field laplacian(const Field& f, const DomainSpec& dom);

/// Applies (a I - b Lap_h).
Field apply_helmholtz(const Field& f, double a, double b, const DomainSpec& dom);

enum class HelmholtzBackend {
    dct, ///< cosine-transform diagonalization, exact for this grid
    pcg, ///< conjugate-gradient iteration, matrix-free
};

/// Deterministic solver for (a I - b Lap_h) sol = rhs, a > 0, b >= 0, with the
/// grid's Neumann boundary treatment. Satisfies:
///   - residual ||(aI - b Lap_h) sol - rhs||_inf <= 1e-10 ||rhs||_inf
///   - integrate(sol) = integrate(rhs)/a (discrete Neumann compatibility)
/// Instances are not thread-safe; create one per thread of execution.
class HelmholtzSolver {
public:
    explicit HelmholtzSolver(const DomainSpec& dom,
                             HelmholtzBackend backend = HelmholtzBackend::dct);
    ~HelmholtzSolver();

    HelmholtzSolver(HelmholtzSolver&&) noexcept;
    HelmholtzSolver& operator=(HelmholtzSolver&&) noexcept;
    HelmholtzSolver(const HelmholtzSolver&) = delete;
    HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

    Field solve(const Field& rhs, double a, double b) const;

    const DomainSpec& domain() const;
    HelmholtzBackend backend() const;

    static constexpr double residual_tol = 1e-10;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace chemotax
