#pragma once

#include <cstdint>
#include <utility>

#include "chemotax/grid.hpp"

namespace chemotax {

/// Chemosensitivities and signal relaxation times of the four-field system
///   u_t = div(grad u - chi1 u grad v)
///   tau1 v_t = Lap v - v + w
///   w_t = div(grad w - chi2 w grad z - chi3 w grad v)
///   tau2 z_t = Lap z - z + u
struct ModelParams {
    double chi1 = 1.0;
    double chi2 = 1.0;
    double chi3 = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;

    /// Throws InvalidData unless chi1,chi2 > 0, tau_i >= 0 and the relaxation
    /// times are either both zero or both positive (mixed case unsupported).
    void validate() const;

    bool parabolic_elliptic() const { return tau1 == 0.0 && tau2 == 0.0; }
    bool fully_parabolic() const { return tau1 > 0.0 && tau2 > 0.0; }
};

enum class ConstantProvenance { user_supplied, estimated };

/// Quantities derived from the initial data and domain: conserved masses,
/// means, the normalized-system couplings eta1 = chi1*mean(w0),
/// eta2 = chi2*mean(u0), chi = chi3/chi1, and the domain constants.
struct DerivedParams {
    double m1 = 0.0;
    double m2 = 0.0;
    double u0bar = 0.0;
    double w0bar = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double chi = 0.0;
    double pistar = 0.0;
    double k_est = 0.0;
    double cgn_est = 0.0;
    ConstantProvenance k_provenance = ConstantProvenance::estimated;
    ConstantProvenance cgn_provenance = ConstantProvenance::estimated;
};

DerivedParams make_derived_params(const Field& u0, const Field& w0,
                                  const DomainSpec& dom, const ModelParams& params,
                                  double k_est, ConstantProvenance k_prov,
                                  double cgn_est, ConstantProvenance cgn_prov);

/// The evolving quadruple (u, v, w, z) at time t. u, w are densities
/// (strictly positive), v, z concentrations (nonnegative for admissible data).
struct SimState {
    double t = 0.0;
    Field u;
    Field v;
    Field w;
    Field z;
};

/// State of the normalized system: U = u/mean(u0), V = chi1*(v - mean(v)),
/// W = w/mean(w0), Z = chi2*(z - mean(z)). Carries the subtracted means so the
/// transform is invertible.
struct NormalizedState {
    double t = 0.0;
    Field U;
    Field V;
    Field W;
    Field Z;
    double mean_v = 0.0;
    double mean_z = 0.0;
};

/// Strictly positive bump floor + A*exp(-|x-c|^2/(2 width^2)), rescaled so the
/// integral equals mass exactly. center may sit on the closed rectangle.
Field build_gaussian_bump(const DomainSpec& dom, double mass, double center_x,
                          double center_y, double width, double floor);

Field build_constant(const DomainSpec& dom, double mass);

/// mean * (1 + amplitude*cos(pi mx x/Lx) cos(pi my y/Ly)); needs |amplitude|<1
/// to stay positive.
Field build_cosine_perturbation(const DomainSpec& dom, double mass, double amplitude,
                                int mode_x, int mode_y);

/// mean * (1 + amplitude * r) with iid r ~ U(-1,1) from a seeded generator,
/// then rescaled to the exact mass.
Field build_random_perturbation(const DomainSpec& dom, double mass, double amplitude,
                                std::uint64_t seed);

/// Second moment about (cx, cy): integral of f |x - c|^2.
double second_moment(const Field& f, const DomainSpec& dom, double cx, double cy);

/// Mirror data (w0, z0) = ((chi2/chi1) u0, (chi1/chi2) v0), valid when
/// tau1 == tau2; the resulting masses sit exactly on the line m1 chi2 = m2 chi1.
std::pair<Field, Field> build_symmetric_copy(const Field& u0, const Field& v0,
                                             const ModelParams& params);

NormalizedState normalize(const SimState& state, const DerivedParams& dp,
                          const DomainSpec& dom, const ModelParams& params);

SimState denormalize(const NormalizedState& ns, const DerivedParams& dp,
                     const ModelParams& params);

} // namespace chemotax
