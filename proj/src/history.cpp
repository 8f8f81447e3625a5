#include "flocksim/history.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flocksim/errors.hpp"

namespace flocksim {

void hermite_eval(double u, double h, std::span<const double> y_left,
                  std::span<const double> d_left, std::span<const double> y_right,
                  std::span<const double> d_right, std::span<double> out) {
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = h00 * y_left[k] + h * h10 * d_left[k] + h01 * y_right[k] + h * h11 * d_right[k];
}

TrajectoryHistory::TrajectoryHistory(InitialData initial, double tau_bar)
    : initial_(std::move(initial)), tau_bar_(tau_bar) {
    initial_.validate();
    if (tau_bar_ < 0.0) throw ConfigError("history: tau_bar must be >= 0");
    state_size_ = static_cast<std::size_t>(initial_.n_agents()) * initial_.dim();
}

void TrajectoryHistory::append(double t_new, std::span<const double> x, std::span<const double> v,
                               std::span<const double> dv_in, std::span<const double> dv_out) {
    if (times_.empty()) {
        if (t_new != 0.0) throw IntegrationError("history: first committed node must be t = 0");
    } else if (!(t_new > times_.back())) {
        throw IntegrationError("history: append times must be strictly increasing");
    }
    if (x.size() != state_size_ || v.size() != state_size_ || dv_in.size() != state_size_ ||
        dv_out.size() != state_size_)
        throw IntegrationError("history: appended state has wrong size");
    times_.push_back(t_new);
    xs_.insert(xs_.end(), x.begin(), x.end());
    vs_.insert(vs_.end(), v.begin(), v.end());
    dvs_in_.insert(dvs_in_.end(), dv_in.begin(), dv_in.end());
    dvs_out_.insert(dvs_out_.end(), dv_out.begin(), dv_out.end());
}

void TrajectoryHistory::sample(double s, std::vector<double>& x, std::vector<double>& v) const {
    const double t_last = t_now();
    const double slack = 1e-9 * std::max({1.0, tau_bar_, std::abs(t_last)});
    if (s < -tau_bar_ - slack || s > t_last + slack) {
        std::ostringstream os;
        os << "history: lookup at t = " << s << " outside [" << -tau_bar_ << ", " << t_last << "]";
        throw IntegrationError(os.str());
    }

    x.resize(state_size_);
    v.resize(state_size_);

    if (s <= 0.0 || times_.empty()) {
        const double clamped = std::clamp(s, -tau_bar_, 0.0);
        initial_.positions.evaluate(clamped, x);
        initial_.velocities.evaluate(clamped, v);
        return;
    }

    const double t = std::min(s, t_last);
    // Largest node index with time <= t.
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    auto k = static_cast<std::size_t>(std::distance(times_.begin(), it));
    k = k == 0 ? 0 : k - 1;
    if (times_[k] == t || k + 1 >= times_.size()) {
        const auto xs = node_x(k);
        const auto vs = node_v(k);
        std::copy(xs.begin(), xs.end(), x.begin());
        std::copy(vs.begin(), vs.end(), v.begin());
        return;
    }

    const double h = times_[k + 1] - times_[k];
    const double u = (t - times_[k]) / h;
    // positions: derivative is the velocity; velocities: stored one-sided slopes
    hermite_eval(u, h, node_x(k), node_v(k), node_x(k + 1), node_v(k + 1), x);
    hermite_eval(u, h, node_v(k), node_dv_out(k), node_v(k + 1), node_dv_in(k + 1), v);
}

} // namespace flocksim
