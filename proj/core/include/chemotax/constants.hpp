#pragma once

#include <cstdint>
#include <vector>

#include "chemotax/grid.hpp"

namespace chemotax {

struct OptimizerConfig {
    int max_iters = 10000;     ///< per start
    double rel_tol = 1e-10;    ///< stop when relative objective improvement drops below
    int random_starts = 8;     ///< in addition to the deterministic cosine warm start
    std::uint64_t seed = 20240801;
};

enum class BoundDirection { lower, upper };

/// Result of a one-sided variational estimate. Every evaluated test function
/// certifies a bound; value is the extremal certificate over all evaluations.
struct ConstantEstimate {
    double value = 0.0;
    BoundDirection direction = BoundDirection::lower;
    int iterations = 0; ///< accepted descent/ascent steps over all starts
    Field best_test_function;
    std::vector<double> objective_history; ///< best objective after each start
    bool discretization_alarm = false;
};

/// Critical-mass scale: 4*pi on every rectangle (8*pi is the ball value).
double pistar(const DomainSpec& dom);

/// Lower bound for k = 4|Omega| / inf ||grad phi||_{L1}^2 / ||phi-1||_{L2}^2
/// over mean-1 test functions, by projected subgradient descent on the ratio.
/// Any admissible phi certifies k >= 4|Omega|/ratio(phi).
ConstantEstimate estimate_k(const DomainSpec& dom, const OptimizerConfig& cfg);

/// Lower bound for C_GN^4: gradient ascent on
///   R(psi) = ||psi||_{L4}^4 / (8 (||psi||_{L2}^2 ||grad psi||_{L2}^2 + ||psi||_{L2}^4)).
/// value is the best R (an admissible C_GN^4 must be >= every R).
ConstantEstimate estimate_cgn(const DomainSpec& dom, const OptimizerConfig& cfg);

/// Minimizes the smooth Rayleigh ratio ||grad phi||_{L2}^2 / ||phi-1||_{L2}^2
/// over mean-1 functions with the same descent machinery; converges to the
/// first nonzero Neumann eigenvalue pi^2/max(Lx,Ly)^2. Exists to validate the
/// optimizer.
double poincare_l2_oracle(const DomainSpec& dom, const OptimizerConfig& cfg);

/// Known analytic references for convex rectangles.
double k_lower_reference(const DomainSpec& dom);        ///< 4 d^2 / pi^2
double poincare_l2_reference(const DomainSpec& dom);    ///< pi^2 / max(Lx,Ly)^2
double cgn4_reference();                                ///< 1/(2 pi*) = 1/(8 pi)

} // namespace chemotax
