#include "chemotax/model.hpp"

#include <cmath>
#include <random>

namespace chemotax {

void ModelParams::validate() const {
    if (!(chi1 > 0.0) || !(chi2 > 0.0))
        throw InvalidData("ModelParams: chi1 and chi2 must be strictly positive");
    if (!(tau1 >= 0.0) || !(tau2 >= 0.0))
        throw InvalidData("ModelParams: relaxation times must be nonnegative");
    if (!std::isfinite(chi3))
        throw InvalidData("ModelParams: chi3 must be finite");
    if ((tau1 == 0.0) != (tau2 == 0.0))
        throw InvalidData("ModelParams: mixed relaxation (one tau zero, one positive) "
                          "is not supported");
}

DerivedParams make_derived_params(const Field& u0, const Field& w0,
                                  const DomainSpec& dom, const ModelParams& params,
                                  double k_est, ConstantProvenance k_prov,
                                  double cgn_est, ConstantProvenance cgn_prov) {
    params.validate();
    DerivedParams dp;
    dp.m1 = integrate(u0, dom);
    dp.m2 = integrate(w0, dom);
    if (!(dp.m1 > 0.0) || !(dp.m2 > 0.0))
        throw InvalidData("make_derived_params: both masses must be positive");
    dp.u0bar = dp.m1 / dom.area();
    dp.w0bar = dp.m2 / dom.area();
    dp.eta1 = params.chi1 * dp.w0bar;
    dp.eta2 = params.chi2 * dp.u0bar;
    dp.chi = params.chi3 / params.chi1;
    dp.pistar = 4.0 * M_PI; // rectangles are never balls
    if (!(k_est > 0.0) || !(cgn_est > 0.0))
        throw InvalidData("make_derived_params: constant estimates must be positive");
    dp.k_est = k_est;
    dp.cgn_est = cgn_est;
    dp.k_provenance = k_prov;
    dp.cgn_provenance = cgn_prov;
    return dp;
}

namespace {

Field rescale_to_mass(Field f, const DomainSpec& dom, double mass) {
    const double current = integrate(f, dom);
    if (!(current > 0.0))
        throw InvalidData("initial data rescaling: nonpositive integral");
    const double s = mass / current;
    for (double& v : f.values()) v *= s;
    return f;
}

} // namespace

Field build_gaussian_bump(const DomainSpec& dom, double mass, double center_x,
                          double center_y, double width, double floor) {
    if (!(mass > 0.0)) throw InvalidData("build_gaussian_bump: mass must be positive");
    if (!(width > 0.0) || width >= std::min(dom.lx, dom.ly))
        throw InvalidData("build_gaussian_bump: width must lie in (0, min(Lx,Ly))");
    if (!(floor > 0.0)) throw InvalidData("build_gaussian_bump: floor must be positive");
    if (center_x < 0.0 || center_x > dom.lx || center_y < 0.0 || center_y > dom.ly)
        throw InvalidData("build_gaussian_bump: center outside the closed rectangle");
    if (mass <= floor * dom.area())
        throw InvalidData("build_gaussian_bump: mass <= floor*area, cannot rescale "
                          "above the floor");

    Field bump(dom.nx, dom.ny);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (int iy = 0; iy < dom.ny; ++iy) {
        const double dy = dom.cell_y(iy) - center_y;
        for (int ix = 0; ix < dom.nx; ++ix) {
            const double dx = dom.cell_x(ix) - center_x;
            bump(ix, iy) = std::exp(-(dx * dx + dy * dy) * inv2w2);
        }
    }
    // scale the bump so that floor + A*bump integrates to mass exactly
    const double bump_int = integrate(bump, dom);
    const double amp = (mass - floor * dom.area()) / bump_int;
    Field f(dom.nx, dom.ny);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = floor + amp * bump[i];
    return f;
}

Field build_constant(const DomainSpec& dom, double mass) {
    if (!(mass > 0.0)) throw InvalidData("build_constant: mass must be positive");
    return Field(dom.nx, dom.ny, mass / dom.area());
}

Field build_cosine_perturbation(const DomainSpec& dom, double mass, double amplitude,
                                int mode_x, int mode_y) {
    if (!(mass > 0.0)) throw InvalidData("build_cosine_perturbation: mass must be positive");
    if (!(std::abs(amplitude) < 1.0))
        throw InvalidData("build_cosine_perturbation: |amplitude| must be < 1");
    Field f(dom.nx, dom.ny);
    for (int iy = 0; iy < dom.ny; ++iy) {
        const double cy = std::cos(M_PI * mode_y * dom.cell_y(iy) / dom.ly);
        for (int ix = 0; ix < dom.nx; ++ix) {
            const double cx = std::cos(M_PI * mode_x * dom.cell_x(ix) / dom.lx);
            f(ix, iy) = 1.0 + amplitude * cx * cy;
        }
    }
    return rescale_to_mass(std::move(f), dom, mass);
}

Field build_random_perturbation(const DomainSpec& dom, double mass, double amplitude,
                                std::uint64_t seed) {
    if (!(mass > 0.0)) throw InvalidData("build_random_perturbation: mass must be positive");
    if (!(amplitude >= 0.0) || !(amplitude < 1.0))
        throw InvalidData("build_random_perturbation: amplitude must lie in [0,1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field f(dom.nx, dom.ny);
    for (double& v : f.values()) v = 1.0 + amplitude * unit(rng);
    return rescale_to_mass(std::move(f), dom, mass);
}

double second_moment(const Field& f, const DomainSpec& dom, double cx, double cy) {
    require_finite(f, "second_moment");
    double s = 0.0;
    for (int iy = 0; iy < dom.ny; ++iy) {
        const double dy = dom.cell_y(iy) - cy;
        for (int ix = 0; ix < dom.nx; ++ix) {
            const double dx = dom.cell_x(ix) - cx;
            s += f(ix, iy) * (dx * dx + dy * dy);
        }
    }
    return s * dom.cell_area();
}

std::pair<Field, Field> build_symmetric_copy(const Field& u0, const Field& v0,
                                             const ModelParams& params) {
    params.validate();
    if (params.tau1 != params.tau2)
        throw PreconditionViolation("build_symmetric_copy: needs tau1 == tau2");
    const double r = params.chi2 / params.chi1;
    Field w0 = u0;
    for (double& v : w0.values()) v *= r;
    Field z0 = v0;
    for (double& v : z0.values()) v /= r;
    return {std::move(w0), std::move(z0)};
}

NormalizedState normalize(const SimState& state, const DerivedParams& dp,
                          const DomainSpec& dom, const ModelParams& params) {
    if (!(dp.u0bar > 0.0) || !(dp.w0bar > 0.0))
        throw InvalidData("normalize: zero mass in derived parameters");
    NormalizedState ns;
    ns.t = state.t;
    ns.mean_v = mean_value(state.v, dom);
    ns.mean_z = mean_value(state.z, dom);
    ns.U = state.u;
    for (double& v : ns.U.values()) v /= dp.u0bar;
    ns.W = state.w;
    for (double& v : ns.W.values()) v /= dp.w0bar;
    ns.V = state.v;
    for (double& v : ns.V.values()) v = params.chi1 * (v - ns.mean_v);
    ns.Z = state.z;
    for (double& v : ns.Z.values()) v = params.chi2 * (v - ns.mean_z);
    return ns;
}

SimState denormalize(const NormalizedState& ns, const DerivedParams& dp,
                     const ModelParams& params) {
    SimState s;
    s.t = ns.t;
    s.u = ns.U;
    for (double& v : s.u.values()) v *= dp.u0bar;
    s.w = ns.W;
    for (double& v : s.w.values()) v *= dp.w0bar;
    s.v = ns.V;
    for (double& v : s.v.values()) v = v / params.chi1 + ns.mean_v;
    s.z = ns.Z;
    for (double& v : s.z.values()) v = v / params.chi2 + ns.mean_z;
    return s;
}

} // namespace chemotax
