#pragma once

#include <string>
#include <utility>
#include <vector>

namespace flocksim {

/// Pairwise interaction strength as a function of inter-agent distance.
/// Every family is positive, bounded and continuous on [0, inf).
class InfluenceFunction {
public:
    enum class Family { Constant, PowerLaw, OscillatingPositive, Tabulated };

    static InfluenceFunction constant(double k);
    /// k / (1 + r^2)^gamma, gamma >= 0.
    static InfluenceFunction power_law(double k, double gamma);
    /// a + b * sin^2(omega * r), a > 0, b >= 0.
    static InfluenceFunction oscillating(double a, double b, double omega);
    /// Piecewise-linear through sorted (r, value) knots, constant beyond the last knot
    /// (and before the first), all values > 0.
    static InfluenceFunction tabulated(std::vector<std::pair<double, double>> knots);

    /// psi(r). Throws std::domain_error for r < 0.
    double operator()(double r) const;

    /// K = sup of psi over [0, inf).
    double sup_norm() const { return sup_norm_; }

    /// Whether the integral of min_{[0,x]} psi over x in [0, inf) diverges,
    /// classified analytically per family.
    bool integral_diverges() const { return integral_diverges_; }

    /// min of psi over [0, upper]. Family-aware: endpoint for monotone families,
    /// critical points for the oscillating family, knot scan for tabulated.
    double min_on(double upper) const;

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    std::string describe() const;

private:
    InfluenceFunction() = default;

    Family family_ = Family::Constant;
    std::vector<double> params_;                    // family-specific scalars
    std::vector<std::pair<double, double>> knots_;  // Tabulated only
    double sup_norm_ = 0.0;
    bool integral_diverges_ = true;
};

} // namespace flocksim
