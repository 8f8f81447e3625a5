#pragma once

#include <cmath>
#include <numbers>

namespace flocksim {

/// Scalar function of time used for delay laws: constant or sinusoidal.
class TimeFunction {
public:
    enum class Kind { Constant, Sinusoidal };

    static TimeFunction constant(double c) { return TimeFunction{Kind::Constant, c, 0.0, 1.0}; }

    /// mean + amplitude * sin(2 pi t / period)
    static TimeFunction sinusoidal(double mean, double amplitude, double period) {
        return TimeFunction{Kind::Sinusoidal, mean, amplitude, period};
    }

    double operator()(double t) const {
        if (kind_ == Kind::Constant) return mean_;
        return mean_ + amplitude_ * std::sin(2.0 * std::numbers::pi * t / period_);
    }

    Kind kind() const { return kind_; }
    double mean() const { return mean_; }
    double amplitude() const { return amplitude_; }
    double period() const { return period_; }

private:
    TimeFunction(Kind kind, double mean, double amplitude, double period)
        : kind_(kind), mean_(mean), amplitude_(amplitude), period_(period) {}

    Kind kind_;
    double mean_;
    double amplitude_;
    double period_;
};

} // namespace flocksim
