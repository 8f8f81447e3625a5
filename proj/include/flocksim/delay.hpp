#pragma once

#include <variant>
#include <vector>

#include "flocksim/time_function.hpp"

namespace flocksim {

/// Single lagged lookup time t - tau(t), with tau clamped into [0, tau_bar]
/// so the bound holds by construction.
struct PointwiseDelay {
    TimeFunction tau = TimeFunction::constant(0.0);
    double tau_bar = 0.0;

    double operator()(double t) const {
        const double raw = tau(t);
        if (raw <= 0.0) return 0.0;
        return raw < tau_bar ? raw : tau_bar;
    }
};

/// Weight beta(s) over the lookback age s in [0, tau_bar]; nonnegative, with
/// closed-form antiderivative per family.
class BetaKernel {
public:
    enum class Kind { Constant, Linear, Exponential };

    static BetaKernel constant(double value);
    static BetaKernel linear(double slope, double intercept);
    /// exp(rate * s)
    static BetaKernel exponential(double rate);

    double operator()(double s) const;
    /// Integral of beta over [a, b], closed form.
    double integral(double a, double b) const;

    Kind kind() const { return kind_; }
    double p0() const { return p0_; }
    double p1() const { return p1_; }

private:
    Kind kind_ = Kind::Constant;
    double p0_ = 1.0;
    double p1_ = 0.0;
};

/// Lookback window [t - tau2(t), t - tau1(t)] with beta weighting and the
/// Gauss-Legendre rule used to discretize the window integral.
class DistributedDelayKernel {
public:
    DistributedDelayKernel(TimeFunction tau1, TimeFunction tau2, double tau_bar, BetaKernel beta,
                           int quadrature_nodes = 8);

    struct Window {
        double lo;  // clamped tau1(t)
        double hi;  // clamped tau2(t)
    };
    /// Delay bounds at time t. Throws ConfigError if the window degenerates.
    Window window(double t) const;

    /// h(t) = integral of beta over [tau1(t), tau2(t)]. Throws if <= 0.
    double normalizer(double t) const;

    const BetaKernel& beta() const { return beta_; }
    double tau_bar() const { return tau_bar_; }
    int quadrature_nodes() const { return static_cast<int>(nodes_.size()); }
    /// Quadrature nodes/weights on the reference interval [-1, 1].
    const std::vector<double>& reference_nodes() const { return nodes_; }
    const std::vector<double>& reference_weights() const { return weights_; }

    const TimeFunction& tau1() const { return tau1_; }
    const TimeFunction& tau2() const { return tau2_; }

private:
    TimeFunction tau1_;
    TimeFunction tau2_;
    double tau_bar_;
    BetaKernel beta_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct DelaySpec {
    std::variant<PointwiseDelay, DistributedDelayKernel> value;

    bool is_pointwise() const { return std::holds_alternative<PointwiseDelay>(value); }
    const PointwiseDelay& pointwise() const { return std::get<PointwiseDelay>(value); }
    const DistributedDelayKernel& distributed() const {
        return std::get<DistributedDelayKernel>(value);
    }
    double tau_bar() const {
        return is_pointwise() ? pointwise().tau_bar : distributed().tau_bar();
    }
};

} // namespace flocksim
