#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "flocksim/errors.hpp"
#include "flocksim/report_io.hpp"
#include "flocksim/scenario.hpp"
#include "flocksim/schedule.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw flocksim::ConfigError("cannot open scenario file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void print_verdicts(const flocksim::RunOutcome& outcome) {
    const std::string path = outcome.out_dir + "/diagnostics.json";
    std::ifstream in(path);
    if (!in) return;
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("checks")) return;
    for (const auto& c : j["checks"]) {
        if (!c["applicable"].get<bool>()) continue;
        if (!c["enabled"].get<bool>()) {
            std::cout << "[ -- ] " << c["name"].get<std::string>() << "  (not enabled; "
                      << (c["pass"].get<bool>() ? "would pass" : "would fail") << ")\n";
            continue;
        }
        std::cout << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << c["name"].get<std::string>();
        if (!c["worst_margin"].is_null())
            std::cout << "  (worst margin " << c["worst_margin"].get<double>() << ")";
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flocking simulator and certification suite for delayed "
                 "alignment dynamics under intermittent communication"};
    app.require_subcommand(1);

    std::string scenario_path;
    flocksim::RunOptions options;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
        cmd->add_option("--out", options.out_dir_override, "output directory");
        cmd->add_option("--stride", options.stride_override, "record every k-th step");
        cmd->add_option("--workers", options.workers, "concurrent sweep workers");
    };

    auto* cmd_run = app.add_subcommand("run", "integrate one scenario and run every enabled check");
    add_common(cmd_run);
    auto* cmd_sweep = app.add_subcommand("sweep", "run the scenario's sweep grid");
    add_common(cmd_sweep);
    auto* cmd_verify = app.add_subcommand("verify-pe", "check the declared excitation pair");
    add_common(cmd_verify);
    auto* cmd_bounds = app.add_subcommand("bounds", "theory constants only, no integration");
    add_common(cmd_bounds);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_verify->parsed()) {
            const auto scenario = flocksim::parse_scenario(read_file(scenario_path), false);
            const auto& pe = scenario.config.schedule.pe();
            const double horizon = scenario.config.integrator.t_end + pe.pe_window;
            const auto result =
                flocksim::verify_pe(scenario.config.schedule, pe.pe_window, pe.pe_mass, horizon);
            std::cout << "schedule: " << scenario.config.schedule.describe() << "\n"
                      << "declared window T = " << pe.pe_window << ", mass = " << pe.pe_mass << "\n"
                      << "worst window integral = " << result.worst_window_integral
                      << " at t = " << result.worst_window_start << "\n"
                      << (result.pass ? "PASS" : "FAIL") << "\n";
            return result.pass ? 0 : 1;
        }

        if (cmd_bounds->parsed()) {
            const auto scenario = flocksim::parse_scenario(read_file(scenario_path));
            const auto j = flocksim::a_priori_bounds(scenario);
            const std::string out_dir = options.out_dir_override.empty()
                                            ? (scenario.output_dir.empty() ? "." : scenario.output_dir)
                                            : options.out_dir_override;
            std::filesystem::create_directories(out_dir);
            flocksim::write_text_file(out_dir + "/bounds.json", j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        const auto scenario = flocksim::parse_scenario(read_file(scenario_path));
        const auto outcome = cmd_sweep->parsed() ? flocksim::run_sweep(scenario, options)
                                                 : flocksim::run_scenario(scenario, options);
        if (cmd_run->parsed()) print_verdicts(outcome);
        if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
        std::cout << "artifacts: " << outcome.out_dir << "\n";
        return outcome.exit_code;
    } catch (const flocksim::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const flocksim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const flocksim::IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
