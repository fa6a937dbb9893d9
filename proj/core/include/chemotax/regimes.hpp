#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chemotax/functionals.hpp"
#include "chemotax/model.hpp"

namespace chemotax {

struct ConditionRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    std::string note;
};

/// Overall theory outcome: the hypotheses of the boundedness and blow-up
/// statements are disjoint but not exhaustive; the band in between is
/// reported as theory-silent rather than guessed at.
enum class RegimeSummary { bounded_predicted, blowup_predicted, theory_silent };

struct RegimeVerdict {
    bool b1_bounded = false;
    double b1_margin = 0.0; ///< threshold minus mass product (NaN if undefined)
    bool b3_converges = false;
    bool b4_on_blowup_line = false;
    bool b4_blowup_mass = false;
    RegimeSummary summary = RegimeSummary::theory_silent;
    std::vector<ConditionRecord> applicable_conditions;
    RateReport rates;
    ConstantProvenance k_provenance = ConstantProvenance::estimated;
    ConstantProvenance cgn_provenance = ConstantProvenance::estimated;
    double k_est = 0.0;
    double cgn_est = 0.0;
};

/// Small-mass boundedness condition:
///   m1 m2 chi1 chi2 < (pi* - m2 chi3) pi*                  (tau1 = tau2 = 0)
///   m1 m2 chi1 chi2 < sqrt(1 - 4 m2 chi3 C^4) / (4 C^8)    (tau1, tau2 > 0)
/// The fully parabolic threshold is undefined when 1 - 4 m2 chi3 C^4 < 0; the
/// condition is then reported false with NaN margin.
std::pair<bool, double> check_b1(const ModelParams& params, double m1, double m2,
                                 const DerivedParams& dp, const DomainSpec& dom);

/// Exponential-convergence condition, cross-checked against the equivalent
/// eta-form (they differ by a factor |Omega|^2 and must agree):
///   k^2 m1 m2 chi1 chi2 + k m2 |O| chi3^+ < 4 |O|^2        (tau = 0)
///   (2-sqrt22)/3 < k m2 chi3/|O| < sqrt2  and
///   k^2 m1 m2 chi1 chi2 < (2 sqrt2/3)|O|^2 min(1, 3/2 + k m2 chi3/|O|)  (tau > 0)
bool check_b3(const ModelParams& params, double m1, double m2,
              const DerivedParams& dp, const DomainSpec& dom);

/// Blow-up line membership and supercritical mass product:
///   on_line = (tau1 == tau2) and (chi3 == 0) and m1 chi2 = m2 chi1 (to tol);
///   blowup_mass = on_line and m1 m2 chi1 chi2 > (pi*)^2.
std::pair<bool, bool> check_b4(const ModelParams& params, double m1, double m2,
                               const DerivedParams& dp, double line_tol = 1e-12);

RegimeVerdict classify(const ModelParams& params, double m1, double m2,
                       const DerivedParams& dp, const DomainSpec& dom);

} // namespace chemotax
