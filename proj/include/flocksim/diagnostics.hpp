#pragma once

#include <limits>
#include <string>
#include <vector>

#include "flocksim/config.hpp"
#include "flocksim/history.hpp"

namespace flocksim {

struct Diameters {
    double d_x = 0.0;
    double d_v = 0.0;
};

/// Exact pairwise position/velocity diameters at one time, O(N^2).
Diameters diameters(int n_agents, int dim, std::span<const double> x, std::span<const double> v);

/// Extremes of the initial data over [-tau_bar, 0]: closed form for the
/// constant and linear-in-time families, dense scan (tau_bar / 1000) otherwise.
struct InitialConstants {
    double v_sup = 0.0;              // max_j sup |v_j(s)|
    double x_spread = 0.0;           // max_l sup |x_l(s) - x_l(r)|
    double v_window_diameter = 0.0;  // max over agent pairs and times s, t of |v_i(s) - v_j(t)|
    double dx_sup = 0.0;             // sup over s of the position diameter
};
InitialConstants initial_constants(const InitialData& data, double tau_bar);

/// c_star = min{ e^{-K(T+tau_bar)}, e^{-KT} phi alpha_tilde },  c = e^{-KT} c_star.
/// The same formula yields the per-window factors (phi at nT) and the uniform
/// one (phi over the certified diameter range).
struct ContractionConstants {
    double c_star = 0.0;
    double c = 0.0;
};
ContractionConstants contraction_constants(double K, double T, double tau_bar, double alpha_tilde,
                                           double phi_value);

/// mu = ln(1/(1 - c_hat)) / (3T), the certified exponential rate.
double decay_rate(double c_hat, double T);

/// Velocity diameter over the window [nT - tau_bar, nT], scanned at
/// record-grid resolution with interpolated window endpoints. n = 0 falls back
/// to the initial-data scan.
double generalized_diameter(const TrajectoryHistory& history, int n_index, double window,
                            int stride = 1);

/// Integral over [0, upper] of min{ e^{-K(T+tau_bar)}, e^{-KT} alpha_tilde
/// min_{[0,r]} psi }, by adaptive composite Simpson.
double contraction_mass(const InfluenceFunction& psi, double K, double T, double tau_bar,
                        double alpha_tilde, double upper);

/// Solves contraction_mass(d) = target_mass for d (the implicit bound on the
/// delayed-argument range). Returns +inf when the mass never reaches the target
/// within a practical search range.
double certified_diameter_bound(const InfluenceFunction& psi, double K, double T, double tau_bar,
                                double alpha_tilde, double target_mass);

struct CheckResult {
    std::string name;
    bool applicable = true;
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();  // negative when violated
    double worst_at = 0.0;  // time (or window index) of the worst margin
};

struct FlockingVerdict {
    bool position_bounded = false;
    bool velocity_aligned = false;
    double final_d_v = 0.0;
    double dx_threshold = std::numeric_limits<double>::infinity();
};

/// d_v(t) <= scale * D0 * e^{-mu (t - 3T)} * (1 + 1e-6) at every sample.
CheckResult check_decay_envelope(const std::vector<double>& times, const std::vector<double>& d_v,
                                 double D0, double mu, double T, double scale = 1.0);

/// The three window-sequence inequalities (monotone, one-window recursion,
/// three-window contraction) at tolerance 1e-8 * D0. d_v_at[n] is the velocity
/// diameter at nT and contraction[n] the per-window factor.
std::vector<CheckResult> check_window_sequences(const std::vector<double>& window_diameters,
                                                const std::vector<double>& contraction,
                                                const std::vector<double>& d_v_at, double K,
                                                double T, double D0);

struct LyapunovSeries {
    bool available = false;
    std::vector<double> t;
    std::vector<double> e;
    std::vector<double> w;
    double w_at_2T = std::numeric_limits<double>::quiet_NaN();
    bool seam_flag = false;  // decay functional rose at a seam before 2T bookkeeping starts
};

struct DiagnosticsOptions {
    int record_stride = 1;
    double dx_threshold = std::numeric_limits<double>::infinity();
    double align_tolerance = -1.0;  // < 0 selects the default 1e-6 * D0
    double envelope_scale = 1.0;    // test hook: tightens the decay envelope when < 1
};

struct DiagnosticsReport {
    bool distributed = false;
    double window = 1.0;      // T of the declared excitation pair
    double pe_mass = 1.0;     // alpha tilde
    double tau_bar = 0.0;
    double K = 0.0;

    std::vector<double> times;  // record grid, t >= 0
    std::vector<double> d_x;
    std::vector<double> d_v;
    std::vector<double> running_max_dx;

    InitialConstants initial;
    double sup_dx = 0.0;
    double d_star_observed = 0.0;
    double d_star_certified = std::numeric_limits<double>::infinity();
    double phi_hat = 0.0;
    double c_hat = 0.0;
    double mu = 0.0;
    double empirical_rate = std::numeric_limits<double>::quiet_NaN();

    int n_windows = 0;
    std::vector<double> window_diameters;      // D_n
    std::vector<double> d_v_at_window;         // d_V(nT)
    std::vector<double> phi_at_window;         // psi floor from the running diameter at nT
    std::vector<double> contraction_factors;   // per-window contraction constants

    LyapunovSeries lyapunov;

    std::vector<CheckResult> checks;
    FlockingVerdict flocking;
    double resolution_rel_change = 0.0;
    bool resolution_flagged = false;

    const CheckResult* find(const std::string& name) const;
    /// True when every listed check passes (all checks if the list is empty).
    bool all_pass(const std::vector<std::string>& enabled = {}) const;
};

/// Runs the full certification suite against a completed trajectory.
DiagnosticsReport analyze(const TrajectoryHistory& history, const SystemConfig& cfg,
                          const DiagnosticsOptions& opts = {});

} // namespace flocksim
