#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include "flocksim/diagnostics.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/integrator.hpp"
#include "flocksim/report_io.hpp"
#include "flocksim/scenario.hpp"

namespace flocksim {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string output_root() {
    if (const char* env = std::getenv("FLOCKSIM_OUT_ROOT")) return env;
    return "out";
}

std::string resolve_out_dir(const Scenario& scenario, const RunOptions& options) {
    if (!options.out_dir_override.empty()) return options.out_dir_override;
    if (!scenario.output_dir.empty()) return scenario.output_dir;
    return output_root() + "/" + scenario.name;
}

std::string fmt_axis(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct GridPoint {
    std::vector<std::pair<std::string, std::string>> axis_values;
    ordered_json document;
};

// Cartesian product of the sweep axes applied to the scenario document.
std::vector<GridPoint> expand_grid(const Scenario& scenario) {
    std::vector<GridPoint> points{GridPoint{{}, scenario.document}};
    auto apply = [&](const std::string& axis, const std::vector<std::string>& labels,
                     auto&& mutate) {
        if (labels.empty()) return;
        std::vector<GridPoint> next;
        for (const auto& p : points) {
            for (std::size_t v = 0; v < labels.size(); ++v) {
                GridPoint q = p;
                q.axis_values.emplace_back(axis, labels[v]);
                mutate(q.document, v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    };

    const auto& sw = scenario.sweep;
    {
        std::vector<std::string> labels;
        for (int v : sw.agents) labels.push_back(std::to_string(v));
        apply("agents", labels,
              [&](ordered_json& doc, std::size_t v) { doc["system"]["agents"] = sw.agents[v]; });
    }
    {
        std::vector<std::string> labels;
        for (double v : sw.tau_bar) labels.push_back(fmt_axis(v));
        apply("tau_bar", labels, [&](ordered_json& doc, std::size_t v) {
            doc["system"]["delay"]["tau_bar"] = sw.tau_bar[v];
        });
    }
    {
        std::vector<std::string> labels;
        for (double v : sw.duty) labels.push_back(fmt_axis(v));
        apply("duty", labels, [&](ordered_json& doc, std::size_t v) {
            if (!doc["system"]["schedule"].contains("duty"))
                throw ConfigError("sweep.duty: schedule has no duty cycle");
            doc["system"]["schedule"]["duty"] = sw.duty[v];
        });
    }
    {
        std::vector<std::string> labels;
        for (double v : sw.gamma) labels.push_back(fmt_axis(v));
        apply("gamma", labels, [&](ordered_json& doc, std::size_t v) {
            if (!doc["system"]["influence"].contains("gamma"))
                throw ConfigError("sweep.gamma: influence family has no gamma");
            doc["system"]["influence"]["gamma"] = sw.gamma[v];
        });
    }
    {
        std::vector<std::string> labels;
        for (auto v : sw.seed) labels.push_back(std::to_string(v));
        apply("seed", labels, [&](ordered_json& doc, std::size_t v) {
            bool applied = false;
            for (const char* field : {"positions", "velocities"}) {
                auto& spec = doc["system"]["initial_data"][field];
                if (spec.is_object() && spec.contains("seed")) {
                    // offset keeps position and velocity draws decorrelated
                    spec["seed"] = sw.seed[v] + (std::string(field) == "velocities" ? 1 : 0);
                    applied = true;
                }
            }
            if (!applied) throw ConfigError("sweep.seed: initial data has no seeded generator");
        });
    }
    return points;
}

struct SingleResult {
    int exit_code = 0;
    std::string message;
    double mu = 0.0;
    double final_d_v = 0.0;
    bool all_pass = false;
    std::vector<std::string> failed;
};

SingleResult run_one(const Scenario& scenario, const std::string& out_dir, int stride_override) {
    SingleResult result;
    fs::create_directories(out_dir);
    try {
        TrajectoryHistory history = integrate(scenario.config);
        DiagnosticsOptions opts = scenario.check_options;
        if (stride_override > 0) opts.record_stride = stride_override;
        const DiagnosticsReport report = analyze(history, scenario.config, opts);

        write_trajectory_csv(out_dir + "/trajectory.csv", history, opts.record_stride);
        write_series_csv(out_dir + "/series.csv", report);
        const ordered_json verdict = report_to_json(report, scenario.name, scenario.checks);
        write_text_file(out_dir + "/diagnostics.json", verdict.dump(2) + "\n");

        result.mu = report.mu;
        result.final_d_v = report.flocking.final_d_v;
        result.all_pass = report.all_pass(scenario.checks);
        for (const auto& c : report.checks) {
            const bool enabled = scenario.checks.empty() ||
                                 std::find(scenario.checks.begin(), scenario.checks.end(),
                                           c.name) != scenario.checks.end();
            if (enabled && c.applicable && !c.pass) result.failed.push_back(c.name);
        }
        result.exit_code = result.all_pass ? 0 : 1;
        if (!result.all_pass) {
            std::ostringstream os;
            os << "checks failed:";
            for (const auto& f : result.failed) os << ' ' << f;
            result.message = os.str();
        }
    } catch (const IntegrationError& e) {
        result.exit_code = 3;
        result.message = e.what();
        write_text_file(out_dir + "/error.txt", std::string(e.what()) + "\n");
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.message = e.what();
        write_text_file(out_dir + "/error.txt", std::string(e.what()) + "\n");
    }
    return result;
}

} // namespace

RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options) {
    RunOutcome outcome;
    outcome.out_dir = resolve_out_dir(scenario, options);
    const SingleResult r = run_one(scenario, outcome.out_dir, options.stride_override);
    outcome.exit_code = r.exit_code;
    outcome.message = r.message;
    return outcome;
}

RunOutcome run_sweep(const Scenario& scenario, const RunOptions& options) {
    RunOutcome outcome;
    outcome.out_dir = resolve_out_dir(scenario, options);
    fs::create_directories(outcome.out_dir);

    const auto grid = expand_grid(scenario);
    std::vector<SingleResult> results(grid.size());
    std::vector<std::string> subdirs(grid.size());
    std::vector<Scenario> subscenarios(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::string label;
        for (const auto& [axis, value] : grid[g].axis_values) {
            if (!label.empty()) label += "__";
            label += axis + "=" + value;
        }
        if (label.empty()) label = "base";
        subdirs[g] = outcome.out_dir + "/" + label;
        subscenarios[g] = parse_scenario(grid[g].document.dump());
        subscenarios[g].name = scenario.name + "/" + label;
    }

    const int workers = std::max(1, options.workers);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t g = next.fetch_add(1);
            if (g >= grid.size()) return;
            results[g] = run_one(subscenarios[g], subdirs[g], options.stride_override);
        }
    };
    if (workers == 1 || grid.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // aggregate table
    std::ostringstream csv;
    csv << "point";
    for (const auto& [axis, value] : grid.front().axis_values) csv << ',' << axis;
    csv << ",mu,final_d_v,all_pass,failed_checks\n";
    int exit_code = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        csv << fs::path(subdirs[g]).filename().string();
        for (const auto& [axis, value] : grid[g].axis_values) csv << ',' << value;
        char buf[64];
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", results[g].mu, results[g].final_d_v);
        csv << buf << ',' << (results[g].all_pass ? "true" : "false") << ',';
        for (std::size_t f = 0; f < results[g].failed.size(); ++f) {
            if (f) csv << ';';
            csv << results[g].failed[f];
        }
        csv << "\n";
        exit_code = std::max(exit_code, results[g].exit_code);
    }
    write_text_file(outcome.out_dir + "/summary.csv", csv.str());
    outcome.exit_code = exit_code;
    if (exit_code != 0) outcome.message = "one or more grid points failed";
    return outcome;
}

nlohmann::ordered_json a_priori_bounds(const Scenario& scenario) {
    const SystemConfig& cfg = scenario.config;
    const auto& pe = cfg.schedule.pe();
    const InitialConstants init = initial_constants(cfg.initial, cfg.tau_bar());

    const double horizon = cfg.integrator.t_end + pe.pe_window;
    const PeResult pr = verify_pe(cfg.schedule, pe.pe_window, pe.pe_mass, horizon);

    // psi floor over the range reachable from the initial data alone
    const double range0 = cfg.tau_bar() * init.v_sup + init.x_spread + init.dx_sup;
    const double phi0 = cfg.psi.min_on(range0);
    const auto cc = contraction_constants(cfg.psi.sup_norm(), pe.pe_window, cfg.tau_bar(),
                                          pe.pe_mass, phi0);
    const double mu0 = decay_rate(cc.c, pe.pe_window);

    ordered_json j;
    j["scenario"] = scenario.name;
    j["K"] = cfg.psi.sup_norm();
    j["integral_diverges"] = cfg.psi.integral_diverges();
    j["tau_bar"] = cfg.tau_bar();
    j["T"] = pe.pe_window;
    j["alpha_tilde"] = pe.pe_mass;
    j["pe"] = {{"pass", pr.pass},
               {"worst_window_integral", pr.worst_window_integral},
               {"worst_window_start", pr.worst_window_start}};
    j["C0_V"] = init.v_sup;
    j["M0_X"] = init.x_spread;
    j["D0"] = init.v_window_diameter;
    j["initial_dx_sup"] = init.dx_sup;
    j["phi_at_start"] = phi0;
    j["C_star_at_start"] = cc.c_star;
    j["C_at_start"] = cc.c;
    j["mu_at_start"] = mu0;
    return j;
}

} // namespace flocksim
