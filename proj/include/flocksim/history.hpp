#pragma once

#include <span>
#include <vector>

#include "flocksim/initial_data.hpp"

namespace flocksim {

/// Read access to the full agent state at one past time.
class StateLookup {
public:
    virtual ~StateLookup() = default;
    /// Write all agents' positions and velocities at time s into flat (n, d) buffers.
    virtual void state_at(double s, std::vector<double>& x, std::vector<double>& v) const = 0;
};

/// Dense trajectory on [-tau_bar, t_now]. Times in [-tau_bar, 0] are served by
/// the initial-data functions; committed nodes carry state plus velocity
/// derivatives for cubic Hermite interpolation in between. Velocity derivatives
/// are stored as left/right limits so cells bracketing a weight-schedule jump
/// interpolate with the correct one-sided slope.
class TrajectoryHistory : public StateLookup {
public:
    TrajectoryHistory(InitialData initial, double tau_bar);

    int n_agents() const { return initial_.n_agents(); }
    int dim() const { return initial_.dim(); }
    double tau_bar() const { return tau_bar_; }
    /// Latest committed time (0 before the first append: the initial segment).
    double t_now() const { return times_.empty() ? 0.0 : times_.back(); }

    /// Commit a node. First append must be at t = 0, later ones strictly increasing.
    /// dv_in is the left-limit velocity derivative at t_new, dv_out the right limit.
    void append(double t_new, std::span<const double> x, std::span<const double> v,
                std::span<const double> dv_in, std::span<const double> dv_out);

    /// Interpolated full state at s in [-tau_bar, t_now]. Grid nodes reproduce
    /// stored samples exactly; times outside the range raise IntegrationError
    /// (no silent extrapolation).
    void sample(double s, std::vector<double>& x, std::vector<double>& v) const;

    void state_at(double s, std::vector<double>& x, std::vector<double>& v) const override {
        sample(s, x, v);
    }

    std::size_t node_count() const { return times_.size(); }
    const std::vector<double>& node_times() const { return times_; }
    std::span<const double> node_x(std::size_t k) const { return slice(xs_, k); }
    std::span<const double> node_v(std::size_t k) const { return slice(vs_, k); }
    std::span<const double> node_dv_in(std::size_t k) const { return slice(dvs_in_, k); }
    std::span<const double> node_dv_out(std::size_t k) const { return slice(dvs_out_, k); }

    const InitialData& initial_data() const { return initial_; }

private:
    std::span<const double> slice(const std::vector<double>& arr, std::size_t k) const {
        return {arr.data() + k * state_size_, state_size_};
    }

    InitialData initial_;
    double tau_bar_;
    std::size_t state_size_;
    std::vector<double> times_;
    std::vector<double> xs_, vs_, dvs_in_, dvs_out_;
};

/// Cubic Hermite on a cell of width h: u in [0, 1] (values outside extend the
/// same cubic). Writes y(u) for each component.
void hermite_eval(double u, double h, std::span<const double> y_left,
                  std::span<const double> d_left, std::span<const double> y_right,
                  std::span<const double> d_right, std::span<double> out);

} // namespace flocksim
