#include "flocksim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flocksim/errors.hpp"
#include "flocksim/rhs.hpp"

namespace flocksim {

std::vector<double> align_breakpoints(const WeightSchedule& schedule, double h_step,
                                      double t_end) {
    if (!(h_step > 0.0)) throw ConfigError("align_breakpoints: h_step must be > 0");
    if (!(t_end > 0.0)) throw ConfigError("align_breakpoints: t_end must be > 0");

    std::vector<double> bounds{0.0};
    for (double b : schedule.breakpoints(t_end)) {
        // jumps within round-off of the range ends merge into them
        if (b > 1e-12 && b < t_end - 1e-12) bounds.push_back(b);
    }
    bounds.push_back(t_end);
    std::sort(bounds.begin(), bounds.end());
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        if (bounds[k + 1] - bounds[k] < 1e-12)
            throw ConfigError("align_breakpoints: degenerate schedule, breakpoints closer than 1e-12");
    }

    std::vector<double> plan{0.0};
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        const double a = bounds[k], b = bounds[k + 1];
        const double len = b - a;
        auto n_sub = static_cast<std::size_t>(std::ceil(len / h_step - 1e-9));
        if (n_sub < 1) n_sub = 1;
        if (len / static_cast<double>(n_sub) > h_step * (1.0 + 1e-12)) ++n_sub;
        const double step = len / static_cast<double>(n_sub);
        for (std::size_t i = 1; i < n_sub; ++i) plan.push_back(a + step * static_cast<double>(i));
        plan.push_back(b);
    }
    return plan;
}

namespace {

// Serves stage lookups: committed history for the past, a predictor for times
// inside the step being built. The predictor is a Taylor extension of the left
// node on the first sweep and the provisional Hermite cell afterwards.
class SteppingLookup final : public StateLookup {
public:
    explicit SteppingLookup(const TrajectoryHistory& history) : history_(history) {}

    void set_taylor(double t_left, std::span<const double> x, std::span<const double> v,
                    std::span<const double> dv) {
        t_left_ = t_left;
        t_right_ = t_left;
        has_right_ = false;
        assign(x_left_, x);
        assign(v_left_, v);
        assign(dv_left_, dv);
    }

    void set_cell(double t_left, std::span<const double> x_l, std::span<const double> v_l,
                  std::span<const double> dv_l, double t_right, std::span<const double> x_r,
                  std::span<const double> v_r, std::span<const double> dv_r) {
        t_left_ = t_left;
        t_right_ = t_right;
        has_right_ = true;
        assign(x_left_, x_l);
        assign(v_left_, v_l);
        assign(dv_left_, dv_l);
        assign(x_right_, x_r);
        assign(v_right_, v_r);
        assign(dv_right_, dv_r);
    }

    void state_at(double s, std::vector<double>& x, std::vector<double>& v) const override {
        const double committed = history_.t_now();
        if (s <= committed) {
            history_.sample(s, x, v);
            return;
        }
        used_prediction_ = true;
        const std::size_t size = x_left_.size();
        x.resize(size);
        v.resize(size);
        if (!has_right_) {
            const double dt = s - t_left_;
            for (std::size_t k = 0; k < size; ++k) {
                x[k] = x_left_[k] + dt * v_left_[k];
                v[k] = v_left_[k] + dt * dv_left_[k];
            }
            return;
        }
        const double h = t_right_ - t_left_;
        const double u = (s - t_left_) / h;
        hermite_eval(u, h, x_left_, v_left_, x_right_, v_right_, x);
        hermite_eval(u, h, v_left_, dv_left_, v_right_, dv_right_, v);
    }

    bool used_prediction() const { return used_prediction_; }
    void reset_prediction_flag() { used_prediction_ = false; }

private:
    static void assign(std::vector<double>& dst, std::span<const double> src) {
        dst.assign(src.begin(), src.end());
    }

    const TrajectoryHistory& history_;
    double t_left_ = 0.0, t_right_ = 0.0;
    bool has_right_ = false;
    mutable bool used_prediction_ = false;
    std::vector<double> x_left_, v_left_, dv_left_;
    std::vector<double> x_right_, v_right_, dv_right_;
};

void check_finite(std::span<const double> x, std::span<const double> v, double t) {
    for (double value : x)
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "integration aborted: non-finite position at t = " << t;
            throw IntegrationError(os.str());
        }
    for (double value : v)
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "integration aborted: non-finite velocity at t = " << t;
            throw IntegrationError(os.str());
        }
}

} // namespace

TrajectoryHistory integrate(const SystemConfig& cfg) {
    cfg.validate();
    const auto plan = align_breakpoints(cfg.schedule, cfg.integrator.h_step, cfg.integrator.t_end);
    const auto size = static_cast<std::size_t>(cfg.n_agents) * cfg.dim;

    TrajectoryHistory history(cfg.initial, cfg.tau_bar());
    RhsEvaluator rhs(cfg);
    SteppingLookup lookup(history);

    std::vector<double> x(size), v(size);
    history.sample(0.0, x, v);

    // Coupling sum at the last committed node; dv there is alpha * sum.
    std::vector<double> sum_left(size);
    std::vector<double> dv_node(size);

    auto alpha_of_step = [&](std::size_t step) {
        return cfg.schedule(0.5 * (plan[step] + plan[step + 1]));
    };

    const double alpha_first = plan.size() > 1 ? alpha_of_step(0) : cfg.schedule(0.0);
    rhs.coupling_sum(0.0, x, v, history, sum_left);
    for (std::size_t k = 0; k < size; ++k) dv_node[k] = alpha_first * sum_left[k];
    history.append(0.0, x, v, dv_node, dv_node);

    std::vector<double> k1x(size), k1v(size), k2x(size), k2v(size), k3x(size), k3v(size),
        k4x(size), k4v(size);
    std::vector<double> stage_x(size), stage_v(size), sum_stage(size);
    std::vector<double> x_new(size), v_new(size), sum_new(size);
    std::vector<double> dv_left(size), dv_in(size), dv_out(size);

    for (std::size_t step = 0; step + 1 < plan.size(); ++step) {
        const double t0 = plan[step];
        const double t1 = plan[step + 1];
        const double h = t1 - t0;
        const double alpha = alpha_of_step(step);

        // k1 never looks ahead of t0, so it is shared by all sweeps.
        for (std::size_t k = 0; k < size; ++k) {
            k1x[k] = v[k];
            k1v[k] = alpha * sum_left[k];
            dv_left[k] = k1v[k];
        }

        const int sweeps = cfg.integrator.overlap_iterations;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            if (sweep == 0)
                lookup.set_taylor(t0, x, v, dv_left);
            lookup.reset_prediction_flag();

            auto stage = [&](double ts, const std::vector<double>& kx, const std::vector<double>& kv,
                             double factor, std::vector<double>& out_kx, std::vector<double>& out_kv) {
                for (std::size_t k = 0; k < size; ++k) {
                    stage_x[k] = x[k] + factor * kx[k];
                    stage_v[k] = v[k] + factor * kv[k];
                }
                rhs.coupling_sum(ts, stage_x, stage_v, lookup, sum_stage);
                for (std::size_t k = 0; k < size; ++k) {
                    out_kx[k] = stage_v[k];
                    out_kv[k] = alpha * sum_stage[k];
                }
            };

            stage(t0 + 0.5 * h, k1x, k1v, 0.5 * h, k2x, k2v);
            stage(t0 + 0.5 * h, k2x, k2v, 0.5 * h, k3x, k3v);
            stage(t1, k3x, k3v, h, k4x, k4v);

            for (std::size_t k = 0; k < size; ++k) {
                x_new[k] = x[k] + (h / 6.0) * (k1x[k] + 2.0 * k2x[k] + 2.0 * k3x[k] + k4x[k]);
                v_new[k] = v[k] + (h / 6.0) * (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]);
            }

            if (sweep == 0 && !lookup.used_prediction()) break;
            if (sweep + 1 < sweeps) {
                // Refine with the provisional cell; k4v approximates the slope at t1.
                lookup.set_cell(t0, x, v, dv_left, t1, x_new, v_new, k4v);
            }
        }

        check_finite(x_new, v_new, t1);

        // Slope at the committed node, with this step's alpha for the cell just
        // built and the next step's alpha for the cell ahead.
        lookup.set_cell(t0, x, v, dv_left, t1, x_new, v_new, k4v);
        rhs.coupling_sum(t1, x_new, v_new, lookup, sum_new);
        const double alpha_next = step + 2 < plan.size() ? alpha_of_step(step + 1) : alpha;
        for (std::size_t k = 0; k < size; ++k) {
            dv_in[k] = alpha * sum_new[k];
            dv_out[k] = alpha_next * sum_new[k];
        }
        history.append(t1, x_new, v_new, dv_in, dv_out);

        x.swap(x_new);
        v.swap(v_new);
        sum_left.swap(sum_new);
    }

    return history;
}

} // namespace flocksim
