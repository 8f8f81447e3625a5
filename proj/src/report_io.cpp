#include "flocksim/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "flocksim/errors.hpp"

namespace flocksim {

using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// JSON has no infinity; encode as null.
ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
}

void write_trajectory_csv(const std::string& path, const TrajectoryHistory& history, int stride) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    const int n = history.n_agents(), d = history.dim();
    out << "t,agent";
    for (int k = 0; k < d; ++k) out << ",x" << k;
    for (int k = 0; k < d; ++k) out << ",v" << k;
    out << "\n";
    const auto count = history.node_count();
    for (std::size_t node = 0; node < count; ++node) {
        if (node % stride != 0 && node != count - 1) continue;
        const double t = history.node_times()[node];
        const auto x = history.node_x(node);
        const auto v = history.node_v(node);
        for (int i = 0; i < n; ++i) {
            out << fmt(t) << ',' << i;
            for (int k = 0; k < d; ++k) out << ',' << fmt(x[static_cast<std::size_t>(i) * d + k]);
            for (int k = 0; k < d; ++k) out << ',' << fmt(v[static_cast<std::size_t>(i) * d + k]);
            out << "\n";
        }
    }
}

void write_series_csv(const std::string& path, const DiagnosticsReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "t,d_x,d_v,E,W\n";
    std::size_t lyap = 0;
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        out << fmt(report.times[i]) << ',' << fmt(report.d_x[i]) << ',' << fmt(report.d_v[i]);
        if (lyap < report.lyapunov.t.size() && report.lyapunov.t[lyap] == report.times[i]) {
            out << ',' << fmt(report.lyapunov.e[lyap]) << ',' << fmt(report.lyapunov.w[lyap]);
            ++lyap;
        } else {
            out << ",nan,nan";
        }
        out << "\n";
    }
}

ordered_json report_to_json(const DiagnosticsReport& report, const std::string& name,
                            const std::vector<std::string>& enabled_checks) {
    ordered_json j;
    j["scenario"] = name;
    j["model"] = report.distributed ? "distributed" : "pointwise";

    ordered_json constants;
    constants["K"] = report.K;
    constants["tau_bar"] = report.tau_bar;
    constants["T"] = report.window;
    constants["alpha_tilde"] = report.pe_mass;
    constants["C0_V"] = report.initial.v_sup;
    constants["M0_X"] = report.initial.x_spread;
    constants["D0"] = report.initial.v_window_diameter;
    constants["sup_dX"] = report.sup_dx;
    constants["d_star_observed"] = report.d_star_observed;
    constants["d_star_certified"] = finite_or_null(report.d_star_certified);
    constants["phi_hat"] = report.phi_hat;
    constants["C_hat"] = report.c_hat;
    constants["mu"] = report.mu;
    constants["empirical_rate"] = finite_or_null(report.empirical_rate);
    j["constants"] = std::move(constants);

    ordered_json sequences;
    sequences["window_diameters"] = report.window_diameters;
    sequences["d_v_at_window"] = report.d_v_at_window;
    sequences["phi_at_window"] = report.phi_at_window;
    sequences["contraction_factors"] = report.contraction_factors;
    j["sequences"] = std::move(sequences);

    ordered_json lyap;
    lyap["available"] = report.lyapunov.available;
    lyap["w_at_2T"] = finite_or_null(report.lyapunov.w_at_2T);
    lyap["seam_flag"] = report.lyapunov.seam_flag;
    j["lyapunov"] = std::move(lyap);

    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json e;
        e["name"] = c.name;
        e["applicable"] = c.applicable;
        e["enabled"] = enabled_checks.empty() ||
                       std::find(enabled_checks.begin(), enabled_checks.end(), c.name) !=
                           enabled_checks.end();
        e["pass"] = c.pass;
        e["worst_margin"] = finite_or_null(c.worst_margin);
        e["worst_at"] = c.worst_at;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);

    ordered_json flock;
    flock["position_bounded"] = report.flocking.position_bounded;
    flock["velocity_aligned"] = report.flocking.velocity_aligned;
    flock["final_d_v"] = report.flocking.final_d_v;
    flock["dx_threshold"] = finite_or_null(report.flocking.dx_threshold);
    j["flocking"] = std::move(flock);

    ordered_json res;
    res["max_rel_change"] = report.resolution_rel_change;
    res["flagged"] = report.resolution_flagged;
    j["resolution_sensitivity"] = std::move(res);

    j["all_pass"] = report.all_pass(enabled_checks);
    return j;
}

} // namespace flocksim
