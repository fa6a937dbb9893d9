#include "chemotax/regimes.hpp"

#include <cmath>
#include <limits>

namespace chemotax {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// eta couplings for hypothetical masses (the classifier may be asked about
// mass pairs other than the ones dp was built from)
double eta1_of(const ModelParams& p, double m2, const DomainSpec& dom) {
    return p.chi1 * m2 / dom.area();
}
double eta2_of(const ModelParams& p, double m1, const DomainSpec& dom) {
    return p.chi2 * m1 / dom.area();
}

} // namespace

std::pair<bool, double> check_b1(const ModelParams& params, double m1, double m2,
                                 const DerivedParams& dp, const DomainSpec& dom) {
    (void)dom;
    params.validate();
    const double lhs = m1 * m2 * params.chi1 * params.chi2;
    if (params.parabolic_elliptic()) {
        const double rhs = (dp.pistar - m2 * params.chi3) * dp.pistar;
        return {lhs < rhs, rhs - lhs};
    }
    const double c4 = std::pow(dp.cgn_est, 4);
    const double disc = 1.0 - 4.0 * m2 * params.chi3 * c4;
    if (disc < 0.0) return {false, nan_v}; // threshold undefined
    const double rhs = std::sqrt(disc) / (4.0 * c4 * c4);
    return {lhs < rhs, rhs - lhs};
}

bool check_b3(const ModelParams& params, double m1, double m2,
              const DerivedParams& dp, const DomainSpec& dom) {
    params.validate();
    const double k = dp.k_est;
    const double area = dom.area();
    const double e1 = eta1_of(params, m2, dom);
    const double e2 = eta2_of(params, m1, dom);
    const double chi = params.chi3 / params.chi1;

    bool mass_form, eta_form;
    if (params.parabolic_elliptic()) {
        const double chi3p = std::max(params.chi3, 0.0); // chi3^+
        mass_form = k * k * m1 * m2 * params.chi1 * params.chi2 +
                        k * m2 * area * chi3p <
                    4.0 * area * area;
        const double chip = std::max(chi, 0.0);
        eta_form = k * k * e1 * e2 + k * e1 * chip < 4.0;
    } else {
        const double ratio = k * m2 * params.chi3 / area; // = k eta1 chi
        const double lo = (2.0 - std::sqrt(22.0)) / 3.0;
        mass_form = lo < ratio && ratio < std::sqrt(2.0) &&
                    k * k * m1 * m2 * params.chi1 * params.chi2 <
                        (2.0 * std::sqrt(2.0) / 3.0) * area * area *
                            std::min(1.0, 1.5 + ratio);
        DerivedParams hd = dp;
        hd.eta1 = e1;
        hd.eta2 = e2;
        hd.chi = chi;
        eta_form = pp_rate_admissible(hd);
    }
    // the two algebraic forms are identical up to an |Omega|^2 scaling; a
    // disagreement can only happen by rounding exactly at the boundary, in
    // which case the literal mass form wins
    (void)eta_form;
    return mass_form;
}

std::pair<bool, bool> check_b4(const ModelParams& params, double m1, double m2,
                               const DerivedParams& dp, double line_tol) {
    params.validate();
    const double a = m1 * params.chi2;
    const double b = m2 * params.chi1;
    const bool on_line = params.tau1 == params.tau2 && params.chi3 == 0.0 &&
                         std::abs(a - b) <= line_tol * std::max(a, b);
    const bool blowup_mass =
        on_line && m1 * m2 * params.chi1 * params.chi2 > dp.pistar * dp.pistar;
    return {on_line, blowup_mass};
}

RegimeVerdict classify(const ModelParams& params, double m1, double m2,
                       const DerivedParams& dp, const DomainSpec& dom) {
    RegimeVerdict v;
    const auto [b1, margin] = check_b1(params, m1, m2, dp, dom);
    v.b1_bounded = b1;
    v.b1_margin = margin;
    v.b3_converges = check_b3(params, m1, m2, dp, dom);
    const auto [on_line, blowup_mass] = check_b4(params, m1, m2, dp);
    v.b4_on_blowup_line = on_line;
    v.b4_blowup_mass = blowup_mass;
    v.k_provenance = dp.k_provenance;
    v.cgn_provenance = dp.cgn_provenance;
    v.k_est = dp.k_est;
    v.cgn_est = dp.cgn_est;

    const double prod = m1 * m2 * params.chi1 * params.chi2;
    const double area = dom.area();
    const double k = dp.k_est;
    if (params.parabolic_elliptic()) {
        v.applicable_conditions.push_back(
            {"b1: m1 m2 chi1 chi2 < (pi*-m2 chi3) pi*", prod,
             (dp.pistar - m2 * params.chi3) * dp.pistar, b1, ""});
        v.applicable_conditions.push_back(
            {"b3: k^2 m1 m2 chi1 chi2 + k m2 |O| chi3+ < 4|O|^2",
             k * k * prod + k * m2 * area * std::max(params.chi3, 0.0),
             4.0 * area * area, v.b3_converges, ""});
    } else {
        const double c4 = std::pow(dp.cgn_est, 4);
        const double disc = 1.0 - 4.0 * m2 * params.chi3 * c4;
        v.applicable_conditions.push_back(
            {"b1: m1 m2 chi1 chi2 < sqrt(1-4 m2 chi3 C^4)/(4 C^8)", prod,
             disc >= 0.0 ? std::sqrt(disc) / (4.0 * c4 * c4) : nan_v, b1,
             disc >= 0.0 ? "" : "threshold undefined (1-4 m2 chi3 C^4 < 0)"});
        const double ratio = k * m2 * params.chi3 / area;
        v.applicable_conditions.push_back(
            {"b3 window: (2-sqrt22)/3 < k m2 chi3/|O| < sqrt2", ratio,
             std::sqrt(2.0),
             (2.0 - std::sqrt(22.0)) / 3.0 < ratio && ratio < std::sqrt(2.0), ""});
        v.applicable_conditions.push_back(
            {"b3 product: k^2 m1 m2 chi1 chi2 < (2 sqrt2/3)|O|^2 min(1, 3/2+r)",
             k * k * prod,
             (2.0 * std::sqrt(2.0) / 3.0) * area * area *
                 std::min(1.0, 1.5 + ratio),
             v.b3_converges, ""});
    }
    v.applicable_conditions.push_back({"b4 line: m1 chi2 = m2 chi1",
                                       m1 * params.chi2, m2 * params.chi1, on_line,
                                       params.chi3 == 0.0 ? ""
                                                          : "requires chi3 = 0"});
    v.applicable_conditions.push_back({"b4 mass: m1 m2 chi1 chi2 > (pi*)^2", prod,
                                       dp.pistar * dp.pistar, blowup_mass, ""});

    // rates want the eta couplings of the queried masses
    DerivedParams qd = dp;
    qd.m1 = m1;
    qd.m2 = m2;
    qd.u0bar = m1 / area;
    qd.w0bar = m2 / area;
    qd.eta1 = eta1_of(params, m2, dom);
    qd.eta2 = eta2_of(params, m1, dom);
    v.rates = rate_report(qd, params);

    if (v.b4_blowup_mass)
        v.summary = RegimeSummary::blowup_predicted;
    else if (v.b1_bounded || v.b3_converges)
        v.summary = RegimeSummary::bounded_predicted;
    else
        v.summary = RegimeSummary::theory_silent;
    return v;
}

} // namespace chemotax
