#include "flocksim/rhs.hpp"

#include <algorithm>
#include <cmath>

#include "flocksim/geometry.hpp"
#include "flocksim/kernels.hpp"

namespace flocksim {

double communication_rate(const InfluenceFunction& psi, int n_agents,
                          std::span<const double> x_self, std::span<const double> x_other_delayed) {
    if (n_agents < 2) throw ConfigError("communication_rate: need at least 2 agents");
    return psi(distance(x_self, x_other_delayed)) / (n_agents - 1);
}

RhsEvaluator::RhsEvaluator(const SystemConfig& cfg) : cfg_(cfg) {
    const auto size = static_cast<std::size_t>(cfg.n_agents) * cfg.dim;
    x_delayed_.resize(size);
    v_delayed_.resize(size);
    if (!cfg.delay.is_pointwise()) {
        const auto m = static_cast<std::size_t>(cfg.delay.distributed().quadrature_nodes());
        x_nodes_.assign(m, std::vector<double>(size));
        v_nodes_.assign(m, std::vector<double>(size));
        node_weight_.resize(m);
    }
}

void RhsEvaluator::coupling_sum(double t, std::span<const double> x, std::span<const double> v,
                                const StateLookup& lookup, std::span<double> out) {
    const int n = cfg_.n_agents;
    const int d = cfg_.dim;

    if (cfg_.delay.is_pointwise()) {
        const double lag = cfg_.delay.pointwise()(t);
        std::span<const double> xd, wd;
        if (lag == 0.0) {
            xd = x;
            wd = cfg_.coupling == CouplingMode::VelocityCoupling ? v : x;
        } else {
            lookup.state_at(t - lag, x_delayed_, v_delayed_);
            xd = x_delayed_;
            wd = cfg_.coupling == CouplingMode::VelocityCoupling ? std::span<const double>(v_delayed_)
                                                                 : std::span<const double>(x_delayed_);
        }
        const auto w_now = cfg_.coupling == CouplingMode::VelocityCoupling ? v : x;
        kernels::pointwise_accel(n, d, cfg_.psi, x, w_now, xd, wd, out);
        return;
    }

    const auto& kernel = cfg_.delay.distributed();
    const auto window = kernel.window(t);
    const double h_norm = kernel.normalizer(t);
    const double mid = 0.5 * (window.lo + window.hi);
    const double half = 0.5 * (window.hi - window.lo);
    const auto& xi_nodes = kernel.reference_nodes();
    const auto& xi_weights = kernel.reference_weights();
    for (std::size_t q = 0; q < xi_nodes.size(); ++q) {
        const double age = mid + half * xi_nodes[q];
        node_weight_[q] = half * xi_weights[q] * kernel.beta()(age) / h_norm;
        lookup.state_at(t - age, x_nodes_[q], v_nodes_[q]);
    }
    kernels::distributed_accel(n, d, cfg_.psi, x, v, node_weight_, x_nodes_, v_nodes_, out);
}

namespace {

void scaled_rhs(const SystemConfig& cfg, double t, std::span<const double> x,
                std::span<const double> v, const StateLookup& lookup, std::span<double> dx_out,
                std::span<double> dv_out) {
    RhsEvaluator eval(cfg);
    eval.coupling_sum(t, x, v, lookup, dv_out);
    const double alpha = cfg.schedule(t);
    for (std::size_t k = 0; k < dv_out.size(); ++k) dv_out[k] *= alpha;
    std::copy(v.begin(), v.end(), dx_out.begin());
}

} // namespace

void rhs_pointwise(const SystemConfig& cfg, double t, std::span<const double> x,
                   std::span<const double> v, const StateLookup& lookup,
                   std::span<double> dx_out, std::span<double> dv_out) {
    if (!cfg.delay.is_pointwise())
        throw ConfigError("rhs_pointwise: config uses a distributed delay");
    scaled_rhs(cfg, t, x, v, lookup, dx_out, dv_out);
}

void rhs_distributed(const SystemConfig& cfg, double t, std::span<const double> x,
                     std::span<const double> v, const StateLookup& lookup,
                     std::span<double> dx_out, std::span<double> dv_out) {
    if (cfg.delay.is_pointwise())
        throw ConfigError("rhs_distributed: config uses a pointwise delay");
    scaled_rhs(cfg, t, x, v, lookup, dx_out, dv_out);
}

} // namespace flocksim
