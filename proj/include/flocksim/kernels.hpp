#pragma once

#include <span>
#include <vector>

#include "flocksim/influence.hpp"

namespace flocksim::kernels {

// Data-parallel inner loops. The OpenMP variants parallelize over agents (or
// point pairs) with per-iteration serial accumulation, so they are bitwise
// identical to the serial reference for any thread count. The serial versions
// are kept as the reference implementation for tests and benchmarks.

/// Alignment acceleration of the single-lag model, coupling term left unscaled
/// by alpha:
///   out_i = (1/(N-1)) * sum_{j != i} psi(|x_i - x_delayed_j|) * (w_delayed_j - w_i)
/// w is the coupled quantity: velocities in the standard mode, positions in
/// the literal position-coupling mode.
void pointwise_accel(int n_agents, int dim, const InfluenceFunction& psi,
                     std::span<const double> x_now, std::span<const double> w_now,
                     std::span<const double> x_delayed, std::span<const double> w_delayed,
                     std::span<double> out);

/// Distributed-lag acceleration, unscaled by alpha. node_weight[q] carries the
/// quadrature weight times beta divided by the normalizer h(t):
///   out_i = (1/(N-1)) * sum_q node_weight_q * sum_{j != i}
///             psi(|x_i - x_node[q]_j|) * (v_node[q]_j - v_i)
void distributed_accel(int n_agents, int dim, const InfluenceFunction& psi,
                       std::span<const double> x_now, std::span<const double> v_now,
                       std::span<const double> node_weight,
                       const std::vector<std::vector<double>>& x_nodes,
                       const std::vector<std::vector<double>>& v_nodes, std::span<double> out);

/// Max pairwise Euclidean distance within a flat (count, dim) point cloud.
double cloud_diameter(int count, int dim, std::span<const double> points);

/// Max Euclidean norm over the rows of a flat (count, dim) array.
double max_row_norm(int count, int dim, std::span<const double> points);

namespace serial {
void pointwise_accel(int n_agents, int dim, const InfluenceFunction& psi,
                     std::span<const double> x_now, std::span<const double> w_now,
                     std::span<const double> x_delayed, std::span<const double> w_delayed,
                     std::span<double> out);
void distributed_accel(int n_agents, int dim, const InfluenceFunction& psi,
                       std::span<const double> x_now, std::span<const double> v_now,
                       std::span<const double> node_weight,
                       const std::vector<std::vector<double>>& x_nodes,
                       const std::vector<std::vector<double>>& v_nodes, std::span<double> out);
double cloud_diameter(int count, int dim, std::span<const double> points);
double max_row_norm(int count, int dim, std::span<const double> points);
} // namespace serial

} // namespace flocksim::kernels
