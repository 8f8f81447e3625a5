#include "flocksim/initial_data.hpp"

#include <cmath>
#include <cstddef>

namespace flocksim {

InitialField InitialField::constant(int n_agents, int dim, std::vector<double> values) {
    if (values.size() != static_cast<std::size_t>(n_agents) * dim)
        throw ConfigError("initial field: value array has wrong length");
    InitialField f;
    f.kind_ = Kind::Constant;
    f.n_agents_ = n_agents;
    f.dim_ = dim;
    f.values_ = std::move(values);
    return f;
}

InitialField InitialField::linear_in_time(int n_agents, int dim, std::vector<double> values,
                                          std::vector<double> slopes) {
    const auto expected = static_cast<std::size_t>(n_agents) * dim;
    if (values.size() != expected || slopes.size() != expected)
        throw ConfigError("initial field: value/slope arrays have wrong length");
    InitialField f;
    f.kind_ = Kind::LinearInTime;
    f.n_agents_ = n_agents;
    f.dim_ = dim;
    f.values_ = std::move(values);
    f.slopes_ = std::move(slopes);
    return f;
}

InitialField InitialField::sampled_grid(int n_agents, int dim, double tau_bar,
                                        std::vector<std::vector<double>> samples) {
    if (!(tau_bar > 0.0)) throw ConfigError("initial field: sampled grid needs tau_bar > 0");
    if (samples.size() < 2) throw ConfigError("initial field: sampled grid needs >= 2 rows");
    const auto expected = static_cast<std::size_t>(n_agents) * dim;
    for (const auto& row : samples)
        if (row.size() != expected) throw ConfigError("initial field: sample row has wrong length");
    InitialField f;
    f.kind_ = Kind::SampledGrid;
    f.n_agents_ = n_agents;
    f.dim_ = dim;
    f.tau_bar_ = tau_bar;
    f.samples_ = std::move(samples);
    return f;
}

void InitialField::evaluate(double s, std::vector<double>& out) const {
    const auto total = static_cast<std::size_t>(n_agents_) * dim_;
    out.resize(total);
    switch (kind_) {
        case Kind::Constant:
            for (std::size_t k = 0; k < total; ++k) out[k] = values_[k];
            return;
        case Kind::LinearInTime:
            for (std::size_t k = 0; k < total; ++k) out[k] = values_[k] + slopes_[k] * s;
            return;
        case Kind::SampledGrid: {
            const auto rows = samples_.size();
            const double dt = tau_bar_ / static_cast<double>(rows - 1);
            double pos = (s + tau_bar_) / dt;
            if (pos < 0.0) pos = 0.0;
            const auto last = rows - 1;
            auto cell = static_cast<std::size_t>(pos);
            if (cell >= last) cell = last - 1;
            const double u = pos - static_cast<double>(cell);

            // Catmull-Rom tangents, one-sided at the ends.
            const auto& p1 = samples_[cell];
            const auto& p2 = samples_[cell + 1];
            const auto& p0 = samples_[cell > 0 ? cell - 1 : 0];
            const auto& p3 = samples_[cell + 2 <= last ? cell + 2 : last];
            const double u2 = u * u, u3 = u2 * u;
            const double h00 = 2 * u3 - 3 * u2 + 1;
            const double h10 = u3 - 2 * u2 + u;
            const double h01 = -2 * u3 + 3 * u2;
            const double h11 = u3 - u2;
            for (std::size_t k = 0; k < total; ++k) {
                const double m1 = cell > 0 ? 0.5 * (p2[k] - p0[k]) : (p2[k] - p1[k]);
                const double m2 = cell + 2 <= last ? 0.5 * (p3[k] - p1[k]) : (p2[k] - p1[k]);
                out[k] = h00 * p1[k] + h10 * m1 + h01 * p2[k] + h11 * m2;
            }
            return;
        }
    }
}

} // namespace flocksim
