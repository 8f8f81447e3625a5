#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace flocksim {

struct PeResult {
    bool pass = false;
    double worst_window_integral = 0.0;
    double worst_window_start = 0.0;
};

/// Communication weight alpha(t) in [0, 1]: piecewise constant with finitely
/// many breakpoints on any bounded horizon, right-continuous at breakpoints.
class WeightSchedule {
public:
    enum class Kind { AlwaysOn, SquareWave, BlackoutList, SeededRandomBlackouts };

    /// Declared persistence-of-excitation pair: every window of length
    /// pe_window is claimed to carry at least pe_mass of integrated weight.
    struct PePair {
        double pe_window = 1.0;   // T
        double pe_mass = 1.0;     // alpha tilde
    };

    static WeightSchedule always_on(PePair pe);
    /// On for the first duty*period of each period (shifted by phase), off for the rest.
    static WeightSchedule square_wave(double period, double duty, double phase, PePair pe);
    /// alpha = 0 on each [start, end), 1 elsewhere; intervals must be disjoint.
    static WeightSchedule blackout_list(std::vector<std::pair<double, double>> off_intervals,
                                        PePair pe);
    /// Each period contains one uniformly placed blackout of length
    /// off_fraction*period, derived deterministically from the seed.
    static WeightSchedule seeded_random_blackouts(double period, double off_fraction,
                                                  std::uint64_t seed, PePair pe);

    /// alpha(t); right-continuous. Throws std::domain_error for t < 0.
    double operator()(double t) const;

    /// All discontinuities of alpha in (0, horizon], sorted and deduplicated.
    std::vector<double> breakpoints(double horizon) const;

    Kind kind() const { return kind_; }
    const PePair& pe() const { return pe_; }
    double period() const { return period_; }
    double duty() const { return duty_; }
    double phase() const { return phase_; }
    double off_fraction() const { return off_fraction_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::pair<double, double>>& off_intervals() const { return off_intervals_; }
    std::string describe() const;

    WeightSchedule with_pe(PePair pe) const {
        WeightSchedule s = *this;
        s.pe_ = pe;
        return s;
    }
    WeightSchedule with_duty(double duty) const;

private:
    WeightSchedule() = default;

    /// Blackout [start, end) inside period index k (seeded variant).
    std::pair<double, double> blackout_in_period(std::int64_t k) const;

    Kind kind_ = Kind::AlwaysOn;
    PePair pe_;
    double period_ = 0.0;
    double duty_ = 1.0;
    double phase_ = 0.0;
    double off_fraction_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<std::pair<double, double>> off_intervals_;
};

/// Exact sliding-window check of the persistence condition on [0, horizon]:
/// minimizes the window integral over all starts in [0, horizon - window].
/// The integral is piecewise linear in the start, so the minimum is attained
/// at a breakpoint, a breakpoint minus the window length, or the range ends.
PeResult verify_pe(const WeightSchedule& schedule, double window, double mass, double horizon);

} // namespace flocksim
