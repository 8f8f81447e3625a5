#pragma once

#include <span>
#include <vector>

#include "flocksim/config.hpp"
#include "flocksim/history.hpp"

namespace flocksim {

/// b_ij: psi of the distance between a current position and a delayed one,
/// split evenly over the other N-1 agents.
double communication_rate(const InfluenceFunction& psi, int n_agents,
                          std::span<const double> x_self, std::span<const double> x_other_delayed);

/// Evaluates the coupling side of the model. The velocity derivative is
/// alpha(t) times the returned coupling sum; the position derivative is the
/// current velocity. Owns scratch buffers so repeated evaluation is
/// allocation-free after warmup.
class RhsEvaluator {
public:
    explicit RhsEvaluator(const SystemConfig& cfg);

    /// Writes the unscaled coupling sum (dv before multiplication by alpha)
    /// for all agents at time t with current state (x, v). Delayed lookups go
    /// through `lookup`; a lag of exactly zero short-circuits to the current
    /// state so the zero-delay limit is the classical ODE right-hand side.
    void coupling_sum(double t, std::span<const double> x, std::span<const double> v,
                      const StateLookup& lookup, std::span<double> out);

private:
    const SystemConfig& cfg_;
    std::vector<double> x_delayed_, v_delayed_;
    std::vector<std::vector<double>> x_nodes_, v_nodes_;
    std::vector<double> node_weight_;
};

/// Full pointwise-model derivative at time t (test/diagnostic entry point):
/// dx = v, dv = alpha(t) * coupling sum.
void rhs_pointwise(const SystemConfig& cfg, double t, std::span<const double> x,
                   std::span<const double> v, const StateLookup& lookup,
                   std::span<double> dx_out, std::span<double> dv_out);

/// Same for the distributed-delay model (cfg.delay must be distributed).
void rhs_distributed(const SystemConfig& cfg, double t, std::span<const double> x,
                     std::span<const double> v, const StateLookup& lookup,
                     std::span<double> dx_out, std::span<double> dv_out);

} // namespace flocksim
