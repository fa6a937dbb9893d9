#pragma once

#include <optional>
#include <vector>

#include "chemotax/model.hpp"

namespace chemotax {

/// One time-sample of all scalar diagnostics. h1_* are squared H^1 norms,
/// w1inf_dist_* are discrete W^{1,inf} distances to the constant equilibrium.
struct DiagnosticsRow {
    double t = 0.0;
    double mass_u = 0.0;
    double mass_w = 0.0;
    double mass_v = 0.0;
    double mass_z = 0.0;
    double entropy_u = 0.0;
    double entropy_w = 0.0;
    double linf_u = 0.0;
    double linf_w = 0.0;
    double h1_v = 0.0;
    double h1_z = 0.0;
    double F_val = 0.0;
    std::optional<double> G_val;
    std::optional<double> H_val;
    double l1_U_minus_1 = 0.0;
    double l1_W_minus_1 = 0.0;
    double w1inf_dist_u = 0.0;
    double w1inf_dist_w = 0.0;
    double dt = 0.0;
};

/// Coefficients of the fully parabolic energy functional and its dissipation
/// bound. All strictly positive on admissible configurations.
struct RateParamsPP {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double A1 = 0.0;
    double A2 = 0.0;
    double A3 = 0.0;
    double A4 = 0.0;
};

/// Predicted decay rates. sigma = mu in the parabolic-elliptic regime and
/// sigma = delta in the fully parabolic one; zeta = min(1/tau1, 1/tau2,
/// sigma/2). The *_exponent fields are the derived exponents sigma/14, mu/44
/// and zeta/15.
struct RateReport {
    std::optional<double> mu;
    std::optional<double> delta;
    std::optional<double> sigma;
    std::optional<double> zeta1;
    std::optional<double> zeta2;
    std::optional<double> zeta;
    std::optional<double> rate_u_w;
    std::optional<double> rate_vz_ee;
    std::optional<double> rate_vz_pp;
};

struct FitResult {
    double rate = 0.0;
    double r2 = 0.0;
};

/// integral of f ln f (signed entropy). Requires f > 0 everywhere.
double entropy(const Field& f, const DomainSpec& dom);

/// Pointwise s ln s >= -1/e, so entropy(f) >= -area/e for positive f.
double entropy_floor(const DomainSpec& dom);

/// Face-quadrature inner product of gradients, sum over interior faces of
/// (df/h)(dg/h) hx hy.
double grad_inner(const Field& f, const Field& g, const DomainSpec& dom);

/// ||grad sqrt(f)||_{L2}^2 via face differences of the pointwise square root.
double grad_sqrt_sq_norm(const Field& f, const DomainSpec& dom);

/// Squared H^1 norm ||f||_{L2}^2 + ||grad f||_{L2}^2.
double h1_norm_sq(const Field& f, const DomainSpec& dom);

/// Discrete W^{1,inf} distance to a constant: max|f - c| + max_faces |df/h|.
double w1inf_distance(const Field& f, double c, const DomainSpec& dom);

/// Discrete W^{k,inf} distance to a constant for k in [1,3]: max|f - c| plus
/// the max of the pure directional j-th face differences /h^j for j <= k.
/// Third differences carry substantial discretization noise at coarse
/// resolutions, so these are reporting quantities, never assertions.
double wkinf_distance(const Field& f, double c, const DomainSpec& dom, int order);

/// The energy identity functional of the four-field system:
///   F = chi2 int u ln u + chi1 int w ln w - chi1 chi2 int (uv + wz)
///       - chi1 chi3 int wv + chi1 chi2 int (vz + grad v . grad z)
///       + chi1 chi3/2 int (v^2 + |grad v|^2).
double lyapunov_F(const SimState& state, const ModelParams& params,
                  const DomainSpec& dom);

struct FDissipation {
    double lhs = 0.0; ///< (F(next) - F(curr)) / dt
    double rhs = 0.0; ///< dissipation integrals evaluated at curr
};

/// Numerical check of the F-identity between two consecutive accepted states:
/// rhs = -(tau1+tau2) chi1 chi2 int v_t z_t - tau1 chi1 chi3 int v_t^2
///       - chi2 int u |grad(ln u - chi1 v)|^2
///       - chi1 int w |grad(ln w - chi2 z - chi3 v)|^2
/// with time derivatives by forward differences. Returns both sides; makes no
/// pass/fail judgement.
FDissipation lyapunov_F_dissipation(const SimState& state, const SimState& next,
                                    const ModelParams& params, const DomainSpec& dom,
                                    double dt);

/// G = (eta2/eta1) int U ln U + int W ln W; nonnegative on mean-1 positive
/// fields.
double lyapunov_G(const NormalizedState& ns, const DerivedParams& dp,
                  const DomainSpec& dom);

/// Fully parabolic energy functional
///   H = (alpha/k) int U ln U + (tau1 alpha/2) int |grad V|^2
///       + (tau1 alpha/2)(1 + 2 beta + gamma1/(k eta1)) int V^2
///       + (1/k) int W ln W + (tau2/2) int |grad Z|^2
///       + (tau2/2)(1 + 2 beta + gamma2/(k eta2)) int Z^2.
double lyapunov_H(const NormalizedState& ns, const DerivedParams& dp,
                  const RateParamsPP& rp, const ModelParams& params,
                  const DomainSpec& dom);

/// Parabolic-elliptic decay rate. With g = 4 - k^2 eta1 eta2 - k eta1 chi^+
/// (chi^+ = max(chi,0)): requires g > 0, then
///   mu = g/(2k^2) * min(k, 4/(k^2 eta1 eta2 + 2g)).
/// Returns nullopt when the smallness condition fails.
std::optional<double> rate_mu(const DerivedParams& dp);

/// Admissibility window of the fully parabolic rate (signed chi here):
///   (2 - sqrt(22))/3 < k eta1 chi < sqrt(2),
///   k^2 eta1 eta2 < (2 sqrt 2/3) min(1, 3/2 + k eta1 chi).
bool pp_rate_admissible(const DerivedParams& dp);

/// Coefficients alpha, beta, gamma1, gamma2, A1..A4 for the fully parabolic
/// regime; nullopt when inadmissible. Throws PreconditionViolation unless
/// tau1, tau2 > 0. A positivity failure on an admissible input indicates a
/// formula transcription defect and throws logic_error rather than patching.
std::optional<RateParamsPP> rate_params_pp(const DerivedParams& dp,
                                           const ModelParams& params);

/// delta = min of the six dissipation-vs-energy ratios of the H functional.
std::optional<double> rate_delta(const RateParamsPP& rp, const DerivedParams& dp,
                                 const ModelParams& params);

RateReport rate_report(const DerivedParams& dp, const ModelParams& params);

struct CkpGap {
    double lhs_u = 0.0; ///< ||U-1||_{L1}^2
    double rhs_u = 0.0; ///< 2 int U ln U
    double lhs_w = 0.0;
    double rhs_w = 0.0;
};

/// Both sides of the Csiszar-Kullback-Pinsker inequality for U and W.
CkpGap ckp_gap(const NormalizedState& ns, const DomainSpec& dom);

/// lhs = ||phi - 1||_{L2}^2, rhs = k ||grad phi^{1/2}||_{L2}^2 for a mean-1
/// nonnegative field.
std::pair<double, double> poincare_gap(const Field& phi, const DomainSpec& dom,
                                       double k);

/// Least-squares exponential rate of a positive series: fits ln y against t
/// over the trailing window (fraction of samples), returns the sign-flipped
/// slope and the R^2 of the linear fit. Throws FitUndefined when the window
/// contains nonpositive values.
FitResult fit_exponential_rate(const std::vector<double>& t,
                               const std::vector<double>& y,
                               double window_frac = 0.5);

/// Assembles one diagnostics row; rp enables the H column (fully parabolic,
/// admissible configurations only).
DiagnosticsRow collect_diagnostics(const SimState& state, const ModelParams& params,
                                   const DerivedParams& dp, const DomainSpec& dom,
                                   const std::optional<RateParamsPP>& rp, double dt);

} // namespace chemotax
