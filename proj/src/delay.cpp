#include "flocksim/delay.hpp"

#include <cmath>

#include "flocksim/errors.hpp"
#include "flocksim/quadrature.hpp"

namespace flocksim {

BetaKernel BetaKernel::constant(double value) {
    if (!(value > 0.0)) throw ConfigError("beta kernel constant: value must be > 0");
    BetaKernel b;
    b.kind_ = Kind::Constant;
    b.p0_ = value;
    return b;
}

BetaKernel BetaKernel::linear(double slope, double intercept) {
    BetaKernel b;
    b.kind_ = Kind::Linear;
    b.p0_ = slope;
    b.p1_ = intercept;
    if (intercept < 0.0) throw ConfigError("beta kernel linear: negative at s = 0");
    return b;
}

BetaKernel BetaKernel::exponential(double rate) {
    BetaKernel b;
    b.kind_ = Kind::Exponential;
    b.p0_ = rate;
    return b;
}

double BetaKernel::operator()(double s) const {
    switch (kind_) {
        case Kind::Constant: return p0_;
        case Kind::Linear: return p0_ * s + p1_;
        case Kind::Exponential: return std::exp(p0_ * s);
    }
    return 0.0;  // unreachable
}

double BetaKernel::integral(double a, double b) const {
    switch (kind_) {
        case Kind::Constant:
            return p0_ * (b - a);
        case Kind::Linear:
            return 0.5 * p0_ * (b * b - a * a) + p1_ * (b - a);
        case Kind::Exponential:
            if (p0_ == 0.0) return b - a;
            return (std::exp(p0_ * b) - std::exp(p0_ * a)) / p0_;
    }
    return 0.0;  // unreachable
}

DistributedDelayKernel::DistributedDelayKernel(TimeFunction tau1, TimeFunction tau2,
                                               double tau_bar, BetaKernel beta,
                                               int quadrature_nodes)
    : tau1_(tau1), tau2_(tau2), tau_bar_(tau_bar), beta_(beta) {
    if (!(tau_bar > 0.0))
        throw ConfigError("distributed delay: tau_bar must be > 0");
    if (quadrature_nodes < 1)
        throw ConfigError("distributed delay: quadrature node count must be >= 1");
    // Linear beta may dip negative inside [0, tau_bar] even if its endpoints pass.
    if (beta_.kind() == BetaKernel::Kind::Linear) {
        if (beta_(0.0) < 0.0 || beta_(tau_bar) < 0.0)
            throw ConfigError("distributed delay: beta is negative on [0, tau_bar]");
    }
    gauss_legendre(quadrature_nodes, nodes_, weights_);
}

DistributedDelayKernel::Window DistributedDelayKernel::window(double t) const {
    auto clamp = [this](double v) {
        if (v <= 0.0) return 0.0;
        return v < tau_bar_ ? v : tau_bar_;
    };
    const Window w{clamp(tau1_(t)), clamp(tau2_(t))};
    if (!(w.lo < w.hi))
        throw ConfigError("distributed delay: tau1(t) < tau2(t) violated at t");
    return w;
}

double DistributedDelayKernel::normalizer(double t) const {
    const Window w = window(t);
    const double h = beta_.integral(w.lo, w.hi);
    if (!(h > 0.0)) throw ConfigError("distributed delay: normalizer h(t) <= 0");
    return h;
}

} // namespace flocksim
