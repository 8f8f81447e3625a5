#include "flocksim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/geometry.hpp"
#include "flocksim/kernels.hpp"

namespace flocksim {

namespace {

constexpr int kInitialScanCells = 1000;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> initial_scan_times(double tau_bar) {
    if (!(tau_bar > 0.0)) return {0.0};
    std::vector<double> ts(kInitialScanCells + 1);
    for (int k = 0; k <= kInitialScanCells; ++k)
        ts[k] = -tau_bar + tau_bar * static_cast<double>(k) / kInitialScanCells;
    ts.back() = 0.0;
    return ts;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double m,
                        double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptively(const std::function<double(double)>& f, double a, double b,
                            double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, fa, m, fm, b, fb, whole, tol, 40);
}

struct FitResult {
    double rate = std::numeric_limits<double>::quiet_NaN();
};

FitResult fit_decay_rate(const std::vector<double>& ts, const std::vector<double>& dv) {
    std::vector<double> xs, ys;
    const double t_end = ts.empty() ? 0.0 : ts.back();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] >= 0.5 * t_end && dv[i] > 0.0 && std::isfinite(std::log(dv[i]))) {
            xs.push_back(ts[i]);
            ys.push_back(std::log(dv[i]));
        }
    }
    FitResult out;
    if (xs.size() < 2) return out;
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0.0) out.rate = -sxy / sxx;
    return out;
}

} // namespace

Diameters diameters(int n_agents, int dim, std::span<const double> x, std::span<const double> v) {
    if (n_agents < 2) throw ConfigError("diameters: need at least 2 agents");
    return {kernels::cloud_diameter(n_agents, dim, x), kernels::cloud_diameter(n_agents, dim, v)};
}

namespace {

// sup over agents and scan times of the row norm of one initial field.
double field_sup_norm(const InitialField& f, double tau_bar) {
    const int n = f.n_agents(), d = f.dim();
    switch (f.kind()) {
        case InitialField::Kind::Constant:
            return kernels::max_row_norm(n, d, f.values());
        case InitialField::Kind::LinearInTime: {
            // |affine in s| is convex: endpoints suffice.
            std::vector<double> at_left(static_cast<std::size_t>(n) * d);
            for (std::size_t k = 0; k < at_left.size(); ++k)
                at_left[k] = f.values()[k] - tau_bar * f.slopes()[k];
            return std::max(kernels::max_row_norm(n, d, f.values()),
                            kernels::max_row_norm(n, d, at_left));
        }
        case InitialField::Kind::SampledGrid: {
            double best = 0.0;
            std::vector<double> buf;
            for (double s : initial_scan_times(tau_bar)) {
                f.evaluate(s, buf);
                best = std::max(best, kernels::max_row_norm(n, d, buf));
            }
            return best;
        }
    }
    return 0.0;
}

// max over agents of the diameter of that agent's own path.
double field_spread(const InitialField& f, double tau_bar) {
    const int n = f.n_agents(), d = f.dim();
    switch (f.kind()) {
        case InitialField::Kind::Constant:
            return 0.0;
        case InitialField::Kind::LinearInTime: {
            double best = 0.0;
            for (int i = 0; i < n; ++i)
                best = std::max(best, norm(agent_slice(std::span<const double>(f.slopes()), i, d)));
            return best * tau_bar;
        }
        case InitialField::Kind::SampledGrid: {
            const auto ts = initial_scan_times(tau_bar);
            const auto rows = ts.size();
            // Per-agent contiguous path points.
            std::vector<double> path(rows * static_cast<std::size_t>(d));
            std::vector<std::vector<double>> all(rows);
            for (std::size_t r = 0; r < rows; ++r) f.evaluate(ts[r], all[r]);
            double best = 0.0;
            for (int i = 0; i < n; ++i) {
                for (std::size_t r = 0; r < rows; ++r)
                    for (int k = 0; k < d; ++k)
                        path[r * d + k] = all[r][static_cast<std::size_t>(i) * d + k];
                best = std::max(best, kernels::cloud_diameter(static_cast<int>(rows), d, path));
            }
            return best;
        }
    }
    return 0.0;
}

// max over agent pairs and time pairs of |f_i(s) - f_j(t)|.
double field_window_diameter(const InitialField& f, double tau_bar) {
    const int n = f.n_agents(), d = f.dim();
    switch (f.kind()) {
        case InitialField::Kind::Constant:
            return kernels::cloud_diameter(n, d, f.values());
        case InitialField::Kind::LinearInTime: {
            // |f_i(s) - f_j(t)| is convex on the time square: corner cloud.
            std::vector<double> cloud;
            cloud.reserve(static_cast<std::size_t>(2 * n) * d);
            cloud.insert(cloud.end(), f.values().begin(), f.values().end());
            for (std::size_t k = 0; k < f.values().size(); ++k)
                cloud.push_back(f.values()[k] - tau_bar * f.slopes()[k]);
            return kernels::cloud_diameter(2 * n, d, cloud);
        }
        case InitialField::Kind::SampledGrid: {
            const auto ts = initial_scan_times(tau_bar);
            std::vector<double> cloud;
            cloud.reserve(ts.size() * static_cast<std::size_t>(n) * d);
            std::vector<double> buf;
            for (double s : ts) {
                f.evaluate(s, buf);
                cloud.insert(cloud.end(), buf.begin(), buf.end());
            }
            return kernels::cloud_diameter(static_cast<int>(ts.size()) * n, d, cloud);
        }
    }
    return 0.0;
}

// sup over scan times of the instantaneous diameter of one field.
double field_diameter_sup(const InitialField& f, double tau_bar) {
    const int n = f.n_agents(), d = f.dim();
    switch (f.kind()) {
        case InitialField::Kind::Constant:
            return kernels::cloud_diameter(n, d, f.values());
        case InitialField::Kind::LinearInTime: {
            std::vector<double> at_left(f.values().size());
            for (std::size_t k = 0; k < at_left.size(); ++k)
                at_left[k] = f.values()[k] - tau_bar * f.slopes()[k];
            return std::max(kernels::cloud_diameter(n, d, f.values()),
                            kernels::cloud_diameter(n, d, at_left));
        }
        case InitialField::Kind::SampledGrid: {
            double best = 0.0;
            std::vector<double> buf;
            for (double s : initial_scan_times(tau_bar)) {
                f.evaluate(s, buf);
                best = std::max(best, kernels::cloud_diameter(n, d, buf));
            }
            return best;
        }
    }
    return 0.0;
}

} // namespace

InitialConstants initial_constants(const InitialData& data, double tau_bar) {
    data.validate();
    InitialConstants out;
    out.v_sup = field_sup_norm(data.velocities, tau_bar);
    out.x_spread = field_spread(data.positions, tau_bar);
    out.v_window_diameter = field_window_diameter(data.velocities, tau_bar);
    out.dx_sup = field_diameter_sup(data.positions, tau_bar);
    return out;
}

ContractionConstants contraction_constants(double K, double T, double tau_bar, double alpha_tilde,
                                           double phi_value) {
    if (!(K > 0.0)) throw ConfigError("contraction_constants: K must be > 0");
    if (!(T > 0.0)) throw ConfigError("contraction_constants: T must be > 0");
    if (tau_bar < 0.0) throw ConfigError("contraction_constants: tau_bar must be >= 0");
    if (!(alpha_tilde > 0.0)) throw ConfigError("contraction_constants: alpha_tilde must be > 0");
    if (alpha_tilde > T) throw ConfigError("contraction_constants: alpha_tilde cannot exceed T");
    if (!(phi_value > 0.0)) throw ConfigError("contraction_constants: phi must be > 0");
    ContractionConstants out;
    out.c_star = std::min(std::exp(-K * (T + tau_bar)), std::exp(-K * T) * phi_value * alpha_tilde);
    out.c = std::exp(-K * T) * out.c_star;
    return out;
}

double decay_rate(double c_hat, double T) {
    if (!(c_hat > 0.0 && c_hat < 1.0)) throw ConfigError("decay_rate: c_hat must be in (0, 1)");
    if (!(T > 0.0)) throw ConfigError("decay_rate: T must be > 0");
    return std::log(1.0 / (1.0 - c_hat)) / (3.0 * T);
}

double generalized_diameter(const TrajectoryHistory& history, int n_index, double window,
                            int stride) {
    if (n_index < 0) throw ConfigError("generalized_diameter: window index must be >= 0");
    if (stride < 1) throw ConfigError("generalized_diameter: stride must be >= 1");
    const double tau_bar = history.tau_bar();
    if (n_index == 0) return initial_constants(history.initial_data(), tau_bar).v_window_diameter;

    const double t_hi = n_index * window;
    const double t_lo = t_hi - tau_bar;
    const double slack = 1e-9 * std::max(1.0, std::abs(t_hi));
    if (t_hi > history.t_now() + slack)
        throw IntegrationError("generalized_diameter: window extends past the trajectory");

    const int d = history.dim();
    std::vector<double> cloud;
    std::vector<double> xbuf, vbuf;
    auto push_sample = [&](double t) {
        history.sample(t, xbuf, vbuf);
        cloud.insert(cloud.end(), vbuf.begin(), vbuf.end());
    };
    push_sample(std::max(t_lo, -tau_bar));
    const auto& times = history.node_times();
    const auto count = times.size();
    for (std::size_t k = 0; k < count; k += stride) {
        if (times[k] > t_lo + slack && times[k] < t_hi - slack)
            cloud.insert(cloud.end(), history.node_v(k).begin(), history.node_v(k).end());
    }
    push_sample(std::min(t_hi, history.t_now()));
    return kernels::cloud_diameter(static_cast<int>(cloud.size() / d), d, cloud);
}

double contraction_mass(const InfluenceFunction& psi, double K, double T, double tau_bar,
                        double alpha_tilde, double upper) {
    if (upper <= 0.0) return 0.0;
    const double c1 = std::exp(-K * (T + tau_bar));
    const double c2 = std::exp(-K * T) * alpha_tilde;
    auto g = [&](double r) { return std::min(c1, c2 * psi.min_on(r)); };
    const double tol = 1e-11 * (1.0 + c1 * upper);
    return integrate_adaptively(g, 0.0, upper, tol);
}

double certified_diameter_bound(const InfluenceFunction& psi, double K, double T, double tau_bar,
                                double alpha_tilde, double target_mass) {
    if (target_mass <= 0.0) return 0.0;
    double hi = 1.0;
    while (contraction_mass(psi, K, T, tau_bar, alpha_tilde, hi) < target_mass) {
        hi *= 2.0;
        if (hi > 1e9) return kInf;
    }
    double lo = 0.0;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * (1.0 + hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (contraction_mass(psi, K, T, tau_bar, alpha_tilde, mid) < target_mass)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CheckResult check_decay_envelope(const std::vector<double>& times, const std::vector<double>& d_v,
                                 double D0, double mu, double T, double scale) {
    CheckResult c{.name = "decay_envelope"};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double envelope = scale * D0 * std::exp(-mu * (times[i] - 3.0 * T));
        const double margin = envelope * (1.0 + 1e-6) - d_v[i];
        if (margin < c.worst_margin) {
            c.worst_margin = margin;
            c.worst_at = times[i];
        }
    }
    c.pass = c.worst_margin >= 0.0;
    return c;
}

std::vector<CheckResult> check_window_sequences(const std::vector<double>& window_diameters,
                                                const std::vector<double>& contraction,
                                                const std::vector<double>& d_v_at, double K,
                                                double T, double D0) {
    const int n_max = static_cast<int>(window_diameters.size()) - 1;
    const double tol = 1e-8 * D0;
    const double decay = std::exp(-K * T);

    // worst_at reports the first violating index when there is one, otherwise
    // the index of the smallest margin
    auto scan = [&](CheckResult& c, int m_first, auto&& margin_at) {
        bool violated = false;
        for (int m = m_first; m + 1 <= n_max; ++m) {
            const double margin = margin_at(m);
            if (margin < c.worst_margin) c.worst_margin = margin;
            if (margin < 0.0 && !violated) {
                violated = true;
                c.worst_at = m + 1;
            }
            if (!violated && margin == c.worst_margin) c.worst_at = m + 1;
        }
        c.applicable = n_max >= m_first + 1;
        c.pass = !c.applicable || c.worst_margin >= 0.0;
    };

    CheckResult mono{.name = "diameter_monotone"};
    scan(mono, 0,
         [&](int m) { return window_diameters[m] + tol - window_diameters[m + 1]; });

    CheckResult rec{.name = "diameter_recursion"};
    scan(rec, 0, [&](int m) {
        return decay * d_v_at[m] + (1.0 - decay) * window_diameters[m] + tol -
               window_diameters[m + 1];
    });

    CheckResult contr{.name = "window_contraction"};
    scan(contr, 2, [&](int m) {
        return (1.0 - contraction[m]) * window_diameters[m - 2] + tol - window_diameters[m + 1];
    });

    return {mono, rec, contr};
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool DiagnosticsReport::all_pass(const std::vector<std::string>& enabled) const {
    for (const auto& c : checks) {
        if (!enabled.empty() && std::find(enabled.begin(), enabled.end(), c.name) == enabled.end())
            continue;
        if (c.applicable && !c.pass) return false;
    }
    return true;
}

namespace {

struct RecordGrid {
    std::vector<std::size_t> node_index;
    std::vector<double> t;
};

RecordGrid make_record_grid(const TrajectoryHistory& history, int stride) {
    RecordGrid grid;
    const auto count = history.node_count();
    for (std::size_t k = 0; k < count; k += stride) {
        grid.node_index.push_back(k);
        grid.t.push_back(history.node_times()[k]);
    }
    if (count > 0 && grid.node_index.back() != count - 1) {
        grid.node_index.push_back(count - 1);
        grid.t.push_back(history.node_times().back());
    }
    return grid;
}

double interpolated_dx(const TrajectoryHistory& history, double t, std::vector<double>& xbuf,
                       std::vector<double>& vbuf) {
    history.sample(t, xbuf, vbuf);
    return kernels::cloud_diameter(history.n_agents(), history.dim(), xbuf);
}

// Gaussian via Box-Muller on the deterministic uniform stream.
std::vector<double> seeded_unit_vector(int dim, std::uint64_t seed) {
    std::vector<double> v(dim);
    for (int k = 0; k < dim; ++k) {
        const double u1 = detail::mixed_uniform(seed, 2 * k);
        const double u2 = detail::mixed_uniform(seed, 2 * k + 1);
        v[k] = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300))) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
    const double n = norm(v);
    for (auto& c : v) c /= n > 0.0 ? n : 1.0;
    return v;
}

} // namespace

DiagnosticsReport analyze(const TrajectoryHistory& history, const SystemConfig& cfg,
                          const DiagnosticsOptions& opts) {
    if (history.node_count() == 0)
        throw ConfigError("analyze: trajectory has no committed nodes");
    if (history.n_agents() != cfg.n_agents || history.dim() != cfg.dim)
        throw ConfigError("analyze: trajectory shape does not match the config");
    if (opts.record_stride < 1) throw ConfigError("analyze: record stride must be >= 1");

    const int n = cfg.n_agents;
    const int d = cfg.dim;
    DiagnosticsReport rep;
    rep.distributed = !cfg.delay.is_pointwise();
    rep.window = cfg.schedule.pe().pe_window;
    rep.pe_mass = cfg.schedule.pe().pe_mass;
    rep.tau_bar = cfg.tau_bar();
    rep.K = cfg.psi.sup_norm();

    const double T = rep.window;
    const double tau_bar = rep.tau_bar;
    const double K = rep.K;
    const double t_end = history.t_now();

    // --- record series -----------------------------------------------------
    const RecordGrid grid = make_record_grid(history, opts.record_stride);
    const auto records = grid.t.size();
    rep.times = grid.t;
    rep.d_x.resize(records);
    rep.d_v.resize(records);
    for (std::size_t i = 0; i < records; ++i) {
        const auto k = grid.node_index[i];
        rep.d_x[i] = kernels::cloud_diameter(n, d, history.node_x(k));
        rep.d_v[i] = kernels::cloud_diameter(n, d, history.node_v(k));
    }

    rep.initial = initial_constants(history.initial_data(), tau_bar);
    const double D0 = rep.initial.v_window_diameter;

    rep.running_max_dx.resize(records);
    double rm = rep.initial.dx_sup;
    for (std::size_t i = 0; i < records; ++i) {
        rm = std::max(rm, rep.d_x[i]);
        rep.running_max_dx[i] = rm;
    }
    rep.sup_dx = rm;
    rep.d_star_observed = tau_bar * rep.initial.v_sup + rep.initial.x_spread + rep.sup_dx;
    rep.phi_hat = cfg.psi.min_on(rep.d_star_observed);
    rep.c_hat = contraction_constants(K, T, tau_bar, rep.pe_mass, rep.phi_hat).c;
    rep.mu = decay_rate(rep.c_hat, T);
    rep.empirical_rate = fit_decay_rate(rep.times, rep.d_v).rate;

    std::vector<double> xbuf, vbuf;

    // running max of d_X up to an arbitrary time (record samples plus the
    // interpolated endpoint).
    auto running_max_at = [&](double t) {
        double value = rep.initial.dx_sup;
        const auto it = std::upper_bound(rep.times.begin(), rep.times.end(), t);
        if (it != rep.times.begin()) {
            const auto i = static_cast<std::size_t>(std::distance(rep.times.begin(), it)) - 1;
            value = std::max(value, rep.running_max_dx[i]);
        }
        if (t <= t_end) value = std::max(value, interpolated_dx(history, t, xbuf, vbuf));
        return value;
    };

    // --- window sequences ---------------------------------------------------
    const int n_max = static_cast<int>(std::floor(t_end / T + 1e-9));
    rep.n_windows = n_max;
    rep.window_diameters.resize(n_max + 1);
    rep.d_v_at_window.resize(n_max + 1);
    rep.phi_at_window.resize(n_max + 1);
    rep.contraction_factors.resize(n_max + 1);
    for (int m = 0; m <= n_max; ++m) {
        rep.window_diameters[m] = generalized_diameter(history, m, T, opts.record_stride);
        const double t_m = std::min(m * T, t_end);
        history.sample(t_m, xbuf, vbuf);
        rep.d_v_at_window[m] = kernels::cloud_diameter(n, d, vbuf);
        const double range = tau_bar * rep.initial.v_sup + rep.initial.x_spread + running_max_at(t_m);
        rep.phi_at_window[m] = cfg.psi.min_on(range);
        rep.contraction_factors[m] =
            contraction_constants(K, T, tau_bar, rep.pe_mass, rep.phi_at_window[m]).c;
    }

    // --- checks ---------------------------------------------------------------
    auto add_check = [&](CheckResult c) { rep.checks.push_back(std::move(c)); };

    {  // uniform velocity bound
        CheckResult c{.name = "velocity_bound"};
        const double bound = rep.initial.v_sup + 1e-8;
        for (std::size_t i = 0; i < records; ++i) {
            const double value = kernels::max_row_norm(n, d, history.node_v(grid.node_index[i]));
            const double margin = bound - value;
            if (margin < c.worst_margin) {
                c.worst_margin = margin;
                c.worst_at = rep.times[i];
            }
        }
        c.pass = c.worst_margin >= 0.0;
        add_check(std::move(c));
    }

    {  // d_V(t) <= D_n for t >= nT - tau_bar
        CheckResult c{.name = "window_diameter_bound"};
        std::vector<double> suffix_max(records);
        double acc = 0.0;
        for (std::size_t i = records; i-- > 0;) {
            acc = std::max(acc, rep.d_v[i]);
            suffix_max[i] = acc;
        }
        const double tol = 1e-8 * D0;
        for (int m = 0; m <= n_max; ++m) {
            const double cutoff = m * T - tau_bar;
            const auto it = std::lower_bound(rep.times.begin(), rep.times.end(), cutoff - 1e-9);
            if (it == rep.times.end()) continue;
            const auto i = static_cast<std::size_t>(std::distance(rep.times.begin(), it));
            const double margin = rep.window_diameters[m] + tol - suffix_max[i];
            if (margin < c.worst_margin) {
                c.worst_margin = margin;
                c.worst_at = m;
            }
        }
        c.pass = c.worst_margin >= 0.0;
        add_check(std::move(c));
    }

    for (auto& c : check_window_sequences(rep.window_diameters, rep.contraction_factors,
                                          rep.d_v_at_window, K, T, D0))
        add_check(std::move(c));

    add_check(check_decay_envelope(rep.times, rep.d_v, D0, rep.mu, T, opts.envelope_scale));

    {  // delayed argument range and rate floor
        CheckResult range_check{.name = "delayed_argument_bound"};
        CheckResult floor_check{.name = "rate_floor"};
        const double range_tol = 1e-8 * std::max(1.0, rep.d_star_observed);
        const double floor_tol = 1e-10 * (1.0 + K);
        std::vector<double> range_margin(records, kInf), floor_margin(records, kInf);

#pragma omp parallel
        {
            std::vector<double> xd, vd;
#pragma omp for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(records); ++ii) {
                const auto i = static_cast<std::size_t>(ii);
                const double t = rep.times[i];
                const auto x_now = history.node_x(grid.node_index[i]);
                const double base = tau_bar * rep.initial.v_sup + rep.initial.x_spread + rep.d_x[i];
                const double phi_t = cfg.psi.min_on(tau_bar * rep.initial.v_sup +
                                                    rep.initial.x_spread + rep.running_max_dx[i]);
                auto scan_pairs = [&](std::span<const double> x_past) {
                    for (int a = 0; a < n; ++a) {
                        const auto xa = agent_slice(x_now, a, d);
                        for (int b = 0; b < n; ++b) {
                            if (a == b) continue;
                            const double dist_ab = distance(xa, agent_slice(x_past, b, d));
                            range_margin[i] =
                                std::min(range_margin[i], base + range_tol - dist_ab);
                            floor_margin[i] =
                                std::min(floor_margin[i], cfg.psi(dist_ab) - phi_t + floor_tol);
                        }
                    }
                };
                if (cfg.delay.is_pointwise()) {
                    const double lag = cfg.delay.pointwise()(t);
                    history.sample(t - lag, xd, vd);
                    scan_pairs(xd);
                } else {
                    const auto& kernel = cfg.delay.distributed();
                    const auto w = kernel.window(t);
                    const double mid = 0.5 * (w.lo + w.hi), half = 0.5 * (w.hi - w.lo);
                    for (double xi : kernel.reference_nodes()) {
                        history.sample(t - (mid + half * xi), xd, vd);
                        scan_pairs(xd);
                    }
                }
            }
        }
        for (std::size_t i = 0; i < records; ++i) {
            if (range_margin[i] < range_check.worst_margin) {
                range_check.worst_margin = range_margin[i];
                range_check.worst_at = rep.times[i];
            }
            if (floor_margin[i] < floor_check.worst_margin) {
                floor_check.worst_margin = floor_margin[i];
                floor_check.worst_at = rep.times[i];
            }
        }
        range_check.pass = range_check.worst_margin >= 0.0;
        floor_check.pass = floor_check.worst_margin >= 0.0;
        add_check(std::move(range_check));
        add_check(std::move(floor_check));
    }

    {  // scalar projection invariance
        CheckResult c{.name = "scalar_invariance"};
        std::vector<std::vector<double>> dirs;
        {
            std::vector<double> e1(d, 0.0);
            e1[0] = 1.0;
            dirs.push_back(std::move(e1));
            dirs.push_back(seeded_unit_vector(d, 0x5eedu));
            dirs.push_back(seeded_unit_vector(d, 0xfeedu));
        }
        std::vector<double> starts{0.0};
        if (T <= 0.5 * t_end) starts.push_back(T);
        const double tol = 1e-8;
        for (const auto& dir : dirs) {
            for (double S : starts) {
                double lo = kInf, hi = -kInf;
                auto absorb = [&](std::span<const double> vs) {
                    for (int i = 0; i < n; ++i) {
                        const double p = dot(agent_slice(vs, i, d), dir);
                        lo = std::min(lo, p);
                        hi = std::max(hi, p);
                    }
                };
                // window extrema over [S - tau_bar, S]
                const int scan = 200;
                for (int k = 0; k <= scan; ++k) {
                    const double s = S - tau_bar + tau_bar * static_cast<double>(k) / scan;
                    history.sample(std::max(s, -tau_bar), xbuf, vbuf);
                    absorb(vbuf);
                    if (tau_bar == 0.0) break;
                }
                history.sample(S, xbuf, vbuf);
                absorb(vbuf);
                for (std::size_t i = 0; i < records; ++i) {
                    if (rep.times[i] <= S) continue;
                    const auto vs = history.node_v(grid.node_index[i]);
                    for (int a = 0; a < n; ++a) {
                        const double p = dot(agent_slice(vs, a, d), dir);
                        const double margin = std::min(p - (lo - tol), (hi + tol) - p);
                        if (margin < c.worst_margin) {
                            c.worst_margin = margin;
                            c.worst_at = rep.times[i];
                        }
                    }
                }
            }
        }
        c.pass = c.worst_margin >= 0.0;
        add_check(std::move(c));
    }

    {  // running-max diameter growth bounded by the velocity diameter
        CheckResult c{.name = "diameter_derivative"};
        for (std::size_t i = 0; i + 1 < records; ++i) {
            const double dt = rep.times[i + 1] - rep.times[i];
            if (!(dt > 0.0)) continue;
            const double slope = (rep.running_max_dx[i + 1] - rep.running_max_dx[i]) / dt;
            const double bound = std::max(rep.d_v[i], rep.d_v[i + 1]) + K * D0 * dt + 1e-12;
            const double margin = bound - slope;
            if (margin < c.worst_margin) {
                c.worst_margin = margin;
                c.worst_at = rep.times[i];
            }
        }
        c.pass = c.worst_margin >= 0.0;
        add_check(std::move(c));
    }

    // --- decay functionals (single-lag model only) ---------------------------
    {
        CheckResult c{.name = "lyapunov_monotone"};
        c.applicable = !rep.distributed && n_max >= 8;
        if (c.applicable) {
            auto eval_e = [&](double t) {
                if (t < 2.0 * T) return D0;
                const int m = static_cast<int>(std::floor(t / T + 1e-12));
                return rep.window_diameters[3 * m] *
                       (1.0 - rep.contraction_factors[3 * m + 2] / T * (t - m * T));
            };
            const double factor = std::exp(-K * T) / 3.0;
            auto eval_u = [&](double t) {
                return tau_bar * rep.initial.v_sup + rep.initial.x_spread +
                       running_max_at(3.0 * t + 2.0 * T);
            };

            // evaluable while the lookahead 3t + 2T and the window indices stay in range
            const double t_max_eval =
                std::min((t_end - 2.0 * T) / 3.0, (static_cast<double>(n_max) - 2.0) / 3.0 * T);

            // the integrand of the mass integral, accumulated incrementally along
            // the nondecreasing sequence of upper limits
            const double c1 = std::exp(-K * (T + tau_bar));
            const double c2 = std::exp(-K * T) * rep.pe_mass;
            std::function<double(double)> g = [&](double r) {
                return std::min(c1, c2 * cfg.psi.min_on(r));
            };
            double mass_acc = 0.0;
            double u_prev = 0.0;
            auto mass_to = [&](double u) {
                if (u > u_prev) {
                    mass_acc += integrate_adaptively(g, u_prev, u, 1e-12 * (1.0 + c1 * (u - u_prev)));
                    u_prev = u;
                }
                return mass_acc;
            };

            for (std::size_t i = 0; i < records; ++i) {
                const double t = rep.times[i];
                if (t > t_max_eval + 1e-12) break;
                const int m = static_cast<int>(std::floor(t / T + 1e-12));
                if (t >= 2.0 * T && 3 * m + 2 > n_max) break;
                const double e = eval_e(t);
                const double w = T * e + factor * mass_to(eval_u(t));
                rep.lyapunov.t.push_back(t);
                rep.lyapunov.e.push_back(e);
                rep.lyapunov.w.push_back(w);
            }
            rep.lyapunov.available = !rep.lyapunov.t.empty();

            if (2.0 * T <= t_max_eval + 1e-12) {
                const double e2 = eval_e(2.0 * T);
                rep.lyapunov.w_at_2T =
                    T * e2 + factor * contraction_mass(cfg.psi, K, T, tau_bar, rep.pe_mass,
                                                       eval_u(2.0 * T));
                rep.lyapunov.seam_flag = e2 > D0 * (1.0 + 1e-12);

                const double tol = 1e-6 * rep.lyapunov.w_at_2T;
                for (std::size_t i = 0; i + 1 < rep.lyapunov.t.size(); ++i) {
                    if (rep.lyapunov.t[i] < 2.0 * T - 1e-12) continue;
                    const double margin = rep.lyapunov.w[i] + tol - rep.lyapunov.w[i + 1];
                    if (margin < c.worst_margin) {
                        c.worst_margin = margin;
                        c.worst_at = rep.lyapunov.t[i + 1];
                    }
                }
                c.pass = c.worst_margin >= 0.0;

                // mass balance: (e^{-KT}/3) * integral over [0, U] of g <= W(2T)
                // for every reachable U, so the certified bound solves
                // integral = 3 e^{KT} W(2T)
                rep.d_star_certified = certified_diameter_bound(
                    cfg.psi, K, T, tau_bar, rep.pe_mass,
                    3.0 * std::exp(K * T) * rep.lyapunov.w_at_2T);
            } else {
                c.applicable = false;
            }
        }
        add_check(std::move(c));
    }

    // --- flocking verdict -----------------------------------------------------
    {
        rep.flocking.dx_threshold = opts.dx_threshold;
        rep.flocking.final_d_v = rep.d_v.empty() ? 0.0 : rep.d_v.back();
        double tail_max = 0.0;
        for (std::size_t i = 0; i < records; ++i)
            if (rep.times[i] >= 0.75 * t_end) tail_max = std::max(tail_max, rep.d_x[i]);
        const bool tail_ok = tail_max <= rep.sup_dx + 1e-12 * (1.0 + rep.sup_dx);
        rep.flocking.position_bounded = rep.sup_dx <= opts.dx_threshold && tail_ok;
        const double align_tol = opts.align_tolerance >= 0.0 ? opts.align_tolerance : 1e-6 * D0;
        rep.flocking.velocity_aligned = rep.flocking.final_d_v <= align_tol;

        CheckResult c{.name = "flocking"};
        c.pass = rep.flocking.position_bounded && rep.flocking.velocity_aligned;
        c.worst_margin = align_tol - rep.flocking.final_d_v;
        c.worst_at = t_end;
        add_check(std::move(c));
    }

    // --- record-resolution sensitivity -----------------------------------------
    {
        double worst = 0.0;
        for (int m = 1; m <= n_max; ++m) {
            const double coarse = generalized_diameter(history, m, T, opts.record_stride * 2);
            const double denom = std::max(D0, 1e-300);
            worst = std::max(worst, std::abs(coarse - rep.window_diameters[m]) / denom);
        }
        rep.resolution_rel_change = worst;
        rep.resolution_flagged = worst > 1e-3;
    }

    return rep;
}

} // namespace flocksim
