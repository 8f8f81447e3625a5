#include "flocksim/influence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flocksim/errors.hpp"

namespace flocksim {

InfluenceFunction InfluenceFunction::constant(double k) {
    if (!(k > 0.0)) throw ConfigError("influence constant: K must be > 0");
    InfluenceFunction f;
    f.family_ = Family::Constant;
    f.params_ = {k};
    f.sup_norm_ = k;
    f.integral_diverges_ = true;
    return f;
}

InfluenceFunction InfluenceFunction::power_law(double k, double gamma) {
    if (!(k > 0.0)) throw ConfigError("influence power_law: K must be > 0");
    if (!(gamma >= 0.0)) throw ConfigError("influence power_law: gamma must be >= 0");
    InfluenceFunction f;
    f.family_ = Family::PowerLaw;
    f.params_ = {k, gamma};
    f.sup_norm_ = k;  // attained at r = 0
    // psi is nonincreasing, so min_{[0,x]} psi = psi(x); the tail behaves like
    // x^{-2 gamma}, integrable exactly when 2 gamma > 1.
    f.integral_diverges_ = gamma <= 0.5;
    return f;
}

InfluenceFunction InfluenceFunction::oscillating(double a, double b, double omega) {
    if (!(a > 0.0)) throw ConfigError("influence oscillating: a must be > 0");
    if (!(b >= 0.0)) throw ConfigError("influence oscillating: b must be >= 0");
    InfluenceFunction f;
    f.family_ = Family::OscillatingPositive;
    f.params_ = {a, b, omega};
    f.sup_norm_ = a + b;
    f.integral_diverges_ = true;  // min over [0,x] is bounded below by a > 0
    return f;
}

InfluenceFunction InfluenceFunction::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw ConfigError("influence tabulated: needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].second > 0.0))
            throw ConfigError("influence tabulated: all values must be > 0");
        if (!(knots[i].first >= 0.0))
            throw ConfigError("influence tabulated: knot abscissae must be >= 0");
        if (i > 0 && !(knots[i].first > knots[i - 1].first))
            throw ConfigError("influence tabulated: knots must be strictly increasing");
    }
    InfluenceFunction f;
    f.family_ = Family::Tabulated;
    f.knots_ = std::move(knots);
    double sup = 0.0;
    for (const auto& [r, v] : f.knots_) sup = std::max(sup, v);
    f.sup_norm_ = sup;
    f.integral_diverges_ = true;  // constant extension keeps min_{[0,x]} psi >= min knot value
    return f;
}

double InfluenceFunction::operator()(double r) const {
    if (r < 0.0) throw std::domain_error("influence function evaluated at negative distance");
    switch (family_) {
        case Family::Constant:
            return params_[0];
        case Family::PowerLaw:
            return params_[0] / std::pow(1.0 + r * r, params_[1]);
        case Family::OscillatingPositive: {
            const double s = std::sin(params_[2] * r);
            return params_[0] + params_[1] * s * s;
        }
        case Family::Tabulated: {
            if (r <= knots_.front().first) return knots_.front().second;
            if (r >= knots_.back().first) return knots_.back().second;
            auto hi = std::upper_bound(knots_.begin(), knots_.end(), r,
                                       [](double x, const auto& kn) { return x < kn.first; });
            auto lo = hi - 1;
            const double w = (r - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
        }
    }
    return 0.0;  // unreachable
}

double InfluenceFunction::min_on(double upper) const {
    if (upper < 0.0) throw std::domain_error("influence min_on: upper must be >= 0");
    switch (family_) {
        case Family::Constant:
            return params_[0];
        case Family::PowerLaw:
            return (*this)(upper);  // nonincreasing
        case Family::OscillatingPositive:
            // a + b sin^2(w r) >= a with equality at r = 0, which belongs to [0, upper].
            return params_[0];
        case Family::Tabulated: {
            double m = std::min((*this)(0.0), (*this)(upper));
            for (const auto& [r, v] : knots_) {
                if (r > 0.0 && r < upper) m = std::min(m, v);
            }
            return m;
        }
    }
    return 0.0;  // unreachable
}

std::string InfluenceFunction::describe() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Constant:
            os << "constant(K=" << params_[0] << ")";
            break;
        case Family::PowerLaw:
            os << "power_law(K=" << params_[0] << ", gamma=" << params_[1] << ")";
            break;
        case Family::OscillatingPositive:
            os << "oscillating(a=" << params_[0] << ", b=" << params_[1] << ", omega=" << params_[2] << ")";
            break;
        case Family::Tabulated:
            os << "tabulated(" << knots_.size() << " knots)";
            break;
    }
    return os.str();
}

} // namespace flocksim
