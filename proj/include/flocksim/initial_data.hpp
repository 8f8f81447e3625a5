#pragma once

#include <vector>

#include "flocksim/errors.hpp"

namespace flocksim {

/// Continuous per-agent initial functions on [-tau_bar, 0], evaluated lazily
/// from their functional form. One field (positions or velocities) per instance.
class InitialField {
public:
    enum class Kind { Constant, LinearInTime, SampledGrid };

    /// Empty field; config validation rejects it until populated.
    InitialField() = default;

    /// x(s) = value_i for each agent; values flat (n_agents, dim).
    static InitialField constant(int n_agents, int dim, std::vector<double> values);
    /// x(s) = value_i + slope_i * s.
    static InitialField linear_in_time(int n_agents, int dim, std::vector<double> values,
                                       std::vector<double> slopes);
    /// Samples on a uniform grid over [-tau_bar, 0] (first row at -tau_bar, last
    /// at 0), interpolated by a Catmull-Rom cubic. samples[k] is flat (n_agents, dim).
    static InitialField sampled_grid(int n_agents, int dim, double tau_bar,
                                     std::vector<std::vector<double>> samples);

    /// Evaluate all agents at time s (expected in [-tau_bar, 0]) into out (flat n*d).
    void evaluate(double s, std::vector<double>& out) const;

    Kind kind() const { return kind_; }
    int n_agents() const { return n_agents_; }
    int dim() const { return dim_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& slopes() const { return slopes_; }

private:
    Kind kind_ = Kind::Constant;
    int n_agents_ = 0;
    int dim_ = 0;
    std::vector<double> values_;
    std::vector<double> slopes_;
    double tau_bar_ = 0.0;
    std::vector<std::vector<double>> samples_;
};

struct InitialData {
    InitialField positions;
    InitialField velocities;

    int n_agents() const { return positions.n_agents(); }
    int dim() const { return positions.dim(); }

    void validate() const {
        if (positions.n_agents() != velocities.n_agents() || positions.dim() != velocities.dim())
            throw ConfigError("initial data: position/velocity shapes disagree");
    }
};

} // namespace flocksim
