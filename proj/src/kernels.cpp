#include <cmath>

#include "flocksim/geometry.hpp"
#include "flocksim/kernels.hpp"

// OpenMP counterparts of the serial reference kernels. Each parallel loop
// keeps the serial per-iteration accumulation order, and the only reductions
// are exact max folds, so results match the reference bitwise.

namespace flocksim::kernels {

void pointwise_accel(int n_agents, int dim, const InfluenceFunction& psi,
                     std::span<const double> x_now, std::span<const double> w_now,
                     std::span<const double> x_delayed, std::span<const double> w_delayed,
                     std::span<double> out) {
    const double inv = 1.0 / (n_agents - 1);
#pragma omp parallel for schedule(static) if (n_agents >= 64)
    for (int i = 0; i < n_agents; ++i) {
        const auto xi = agent_slice(x_now, i, dim);
        const auto wi = agent_slice(w_now, i, dim);
        auto oi = agent_slice(out, i, dim);
        for (int k = 0; k < dim; ++k) oi[k] = 0.0;
        for (int j = 0; j < n_agents; ++j) {
            if (j == i) continue;
            const double rate = psi(distance(xi, agent_slice(x_delayed, j, dim)));
            const auto wj = agent_slice(w_delayed, j, dim);
            for (int k = 0; k < dim; ++k) oi[k] += rate * (wj[k] - wi[k]);
        }
        for (int k = 0; k < dim; ++k) oi[k] *= inv;
    }
}

void distributed_accel(int n_agents, int dim, const InfluenceFunction& psi,
                       std::span<const double> x_now, std::span<const double> v_now,
                       std::span<const double> node_weight,
                       const std::vector<std::vector<double>>& x_nodes,
                       const std::vector<std::vector<double>>& v_nodes, std::span<double> out) {
    const double inv = 1.0 / (n_agents - 1);
    const auto m = node_weight.size();
#pragma omp parallel for schedule(static) if (n_agents >= 32)
    for (int i = 0; i < n_agents; ++i) {
        const auto xi = agent_slice(x_now, i, dim);
        const auto vi = agent_slice(v_now, i, dim);
        auto oi = agent_slice(out, i, dim);
        for (int k = 0; k < dim; ++k) oi[k] = 0.0;
        for (std::size_t q = 0; q < m; ++q) {
            const double cq = node_weight[q];
            const std::span<const double> xq{x_nodes[q]};
            const std::span<const double> vq{v_nodes[q]};
            for (int j = 0; j < n_agents; ++j) {
                if (j == i) continue;
                const double rate = cq * psi(distance(xi, agent_slice(xq, j, dim)));
                const auto vj = agent_slice(vq, j, dim);
                for (int k = 0; k < dim; ++k) oi[k] += rate * (vj[k] - vi[k]);
            }
        }
        for (int k = 0; k < dim; ++k) oi[k] *= inv;
    }
}

double cloud_diameter(int count, int dim, std::span<const double> points) {
    double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best) if (count >= 128)
    for (int i = 0; i < count; ++i) {
        const auto pi = agent_slice(points, i, dim);
        double row = 0.0;
        for (int j = i + 1; j < count; ++j) {
            double s = 0.0;
            const auto pj = agent_slice(points, j, dim);
            for (int k = 0; k < dim; ++k) {
                const double diff = pi[k] - pj[k];
                s += diff * diff;
            }
            if (s > row) row = s;
        }
        if (row > best) best = row;
    }
    return std::sqrt(best);
}

double max_row_norm(int count, int dim, std::span<const double> points) {
    double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best) if (count >= 256)
    for (int i = 0; i < count; ++i) {
        const double s = dot(agent_slice(points, i, dim), agent_slice(points, i, dim));
        if (s > best) best = s;
    }
    return std::sqrt(best);
}

} // namespace flocksim::kernels
