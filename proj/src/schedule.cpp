#include "flocksim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/errors.hpp"

namespace flocksim {

using detail::mixed_uniform;

namespace {

void check_pe_pair(const WeightSchedule::PePair& pe) {
    if (!(pe.pe_window > 0.0)) throw ConfigError("schedule: declared PE window must be > 0");
    if (!(pe.pe_mass > 0.0)) throw ConfigError("schedule: declared PE mass must be > 0");
    if (pe.pe_mass > pe.pe_window)
        throw ConfigError("schedule: declared PE mass cannot exceed the window length");
}

} // namespace

WeightSchedule WeightSchedule::always_on(PePair pe) {
    check_pe_pair(pe);
    WeightSchedule s;
    s.kind_ = Kind::AlwaysOn;
    s.pe_ = pe;
    return s;
}

WeightSchedule WeightSchedule::square_wave(double period, double duty, double phase, PePair pe) {
    check_pe_pair(pe);
    if (!(period > 0.0)) throw ConfigError("square wave: period must be > 0");
    if (!(duty > 0.0 && duty <= 1.0)) throw ConfigError("square wave: duty must be in (0, 1]");
    WeightSchedule s;
    s.kind_ = Kind::SquareWave;
    s.pe_ = pe;
    s.period_ = period;
    s.duty_ = duty;
    s.phase_ = phase;
    return s;
}

WeightSchedule WeightSchedule::blackout_list(std::vector<std::pair<double, double>> off_intervals,
                                             PePair pe) {
    check_pe_pair(pe);
    std::sort(off_intervals.begin(), off_intervals.end());
    for (std::size_t i = 0; i < off_intervals.size(); ++i) {
        if (!(off_intervals[i].second > off_intervals[i].first))
            throw ConfigError("blackout list: interval end must exceed its start");
        if (i > 0 && off_intervals[i].first < off_intervals[i - 1].second)
            throw ConfigError("blackout list: intervals must be disjoint");
    }
    WeightSchedule s;
    s.kind_ = Kind::BlackoutList;
    s.pe_ = pe;
    s.off_intervals_ = std::move(off_intervals);
    return s;
}

WeightSchedule WeightSchedule::seeded_random_blackouts(double period, double off_fraction,
                                                       std::uint64_t seed, PePair pe) {
    check_pe_pair(pe);
    if (!(period > 0.0)) throw ConfigError("random blackouts: period must be > 0");
    if (!(off_fraction >= 0.0 && off_fraction < 1.0))
        throw ConfigError("random blackouts: off fraction must be in [0, 1)");
    WeightSchedule s;
    s.kind_ = Kind::SeededRandomBlackouts;
    s.pe_ = pe;
    s.period_ = period;
    s.off_fraction_ = off_fraction;
    s.seed_ = seed;
    return s;
}

WeightSchedule WeightSchedule::with_duty(double duty) const {
    if (kind_ != Kind::SquareWave)
        throw ConfigError("with_duty: schedule is not a square wave");
    return square_wave(period_, duty, phase_, pe_);
}

std::pair<double, double> WeightSchedule::blackout_in_period(std::int64_t k) const {
    const double off_len = off_fraction_ * period_;
    const double slack = period_ - off_len;
    const double u = mixed_uniform(seed_, static_cast<std::uint64_t>(k));
    const double start = static_cast<double>(k) * period_ + u * slack;
    return {start, start + off_len};
}

double WeightSchedule::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("weight schedule evaluated at negative time");
    switch (kind_) {
        case Kind::AlwaysOn:
            return 1.0;
        case Kind::SquareWave: {
            const double cycles = (t - phase_) / period_;
            const double frac = cycles - std::floor(cycles);
            return frac < duty_ ? 1.0 : 0.0;
        }
        case Kind::BlackoutList: {
            for (const auto& [a, b] : off_intervals_) {
                if (t < a) break;
                if (t < b) return 0.0;
            }
            return 1.0;
        }
        case Kind::SeededRandomBlackouts: {
            if (off_fraction_ == 0.0) return 1.0;
            const auto k = static_cast<std::int64_t>(std::floor(t / period_));
            const auto [a, b] = blackout_in_period(k);
            return (t >= a && t < b) ? 0.0 : 1.0;
        }
    }
    return 0.0;  // unreachable
}

std::vector<double> WeightSchedule::breakpoints(double horizon) const {
    if (!(horizon > 0.0)) throw ConfigError("breakpoints: horizon must be > 0");
    std::vector<double> out;
    auto push = [&](double t) {
        if (t > 0.0 && t <= horizon) out.push_back(t);
    };
    switch (kind_) {
        case Kind::AlwaysOn:
            break;
        case Kind::SquareWave: {
            if (duty_ >= 1.0) break;  // no off phase, no jumps
            const auto k0 = static_cast<std::int64_t>(std::floor(-phase_ / period_)) - 1;
            for (std::int64_t k = k0;; ++k) {
                const double on_start = phase_ + static_cast<double>(k) * period_;
                if (on_start > horizon) break;
                push(on_start);
                push(on_start + duty_ * period_);
            }
            break;
        }
        case Kind::BlackoutList:
            for (const auto& [a, b] : off_intervals_) {
                push(a);
                push(b);
            }
            break;
        case Kind::SeededRandomBlackouts: {
            if (off_fraction_ == 0.0) break;
            const auto k_max = static_cast<std::int64_t>(std::floor(horizon / period_));
            for (std::int64_t k = 0; k <= k_max; ++k) {
                const auto [a, b] = blackout_in_period(k);
                push(a);
                push(b);
            }
            break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string WeightSchedule::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::AlwaysOn: os << "always_on"; break;
        case Kind::SquareWave:
            os << "square_wave(period=" << period_ << ", duty=" << duty_ << ", phase=" << phase_ << ")";
            break;
        case Kind::BlackoutList: os << "blackout_list(" << off_intervals_.size() << " intervals)"; break;
        case Kind::SeededRandomBlackouts:
            os << "seeded_random_blackouts(period=" << period_ << ", off_fraction=" << off_fraction_
               << ", seed=" << seed_ << ")";
            break;
    }
    return os.str();
}

PeResult verify_pe(const WeightSchedule& schedule, double window, double mass, double horizon) {
    if (!(window > 0.0)) throw ConfigError("verify_pe: window must be > 0");
    if (!(mass > 0.0)) throw ConfigError("verify_pe: mass must be > 0");
    if (horizon < window) throw ConfigError("verify_pe: horizon must be >= window");

    // Segment table of alpha on [0, horizon]: value on [edge_k, edge_{k+1}).
    std::vector<double> edges{0.0};
    for (double b : schedule.breakpoints(horizon)) edges.push_back(b);
    if (edges.back() < horizon) edges.push_back(horizon);

    std::vector<double> prefix(edges.size(), 0.0);  // exact integral of alpha on [0, edge_k]
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double value = schedule(edges[k]);
        prefix[k + 1] = prefix[k] + value * (edges[k + 1] - edges[k]);
    }

    auto integral_to = [&](double t) {
        // Largest edge <= t.
        const auto it = std::upper_bound(edges.begin(), edges.end(), t);
        const auto k = static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1;
        const double base = prefix[k];
        if (k + 1 >= edges.size()) return base;
        return base + schedule(edges[k]) * (t - edges[k]);
    };

    // Candidate window starts: breakpoints, breakpoints - window, and range ends.
    const double last_start = horizon - window;
    std::vector<double> starts{0.0, last_start};
    for (std::size_t k = 1; k + 1 < edges.size(); ++k) {
        const double b = edges[k];
        if (b <= last_start) starts.push_back(b);
        if (b - window >= 0.0 && b - window <= last_start) starts.push_back(b - window);
    }

    PeResult result;
    result.worst_window_integral = window + 1.0;
    for (double t : starts) {
        const double value = integral_to(t + window) - integral_to(t);
        if (value < result.worst_window_integral) {
            result.worst_window_integral = value;
            result.worst_window_start = t;
        }
    }
    result.pass = result.worst_window_integral >= mass - 1e-12;
    return result;
}

} // namespace flocksim
