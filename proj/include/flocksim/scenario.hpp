#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "flocksim/config.hpp"
#include "flocksim/diagnostics.hpp"

namespace flocksim {

struct SweepAxes {
    std::vector<int> agents;
    std::vector<double> tau_bar;
    std::vector<double> duty;
    std::vector<double> gamma;
    std::vector<std::uint64_t> seed;

    bool empty() const {
        return agents.empty() && tau_bar.empty() && duty.empty() && gamma.empty() && seed.empty();
    }
};

/// One parsed scenario: the materialized config plus the normalized document
/// (defaults filled) that serialization round-trips.
struct Scenario {
    std::string name;
    SystemConfig config;
    std::vector<std::string> checks;  // empty = every check
    DiagnosticsOptions check_options;
    std::string output_dir;  // empty = resolved from the output root
    SweepAxes sweep;
    nlohmann::ordered_json document;
};

/// Parses and validates a scenario document (JSON text). Unknown keys,
/// invariant violations and a failing declared PE pair raise ParseError with
/// the offending path. `verify_pe_declaration = false` skips only the PE
/// verification (used by the verify-pe subcommand, which reports it instead).
Scenario parse_scenario(const std::string& text, bool verify_pe_declaration = true);

/// Canonical serialization (normalized document, 2-space indent).
std::string serialize_scenario(const Scenario& scenario);

/// Names accepted in the scenario "checks" list.
const std::vector<std::string>& known_check_names();

struct RunOptions {
    std::string out_dir_override;
    int stride_override = 0;  // 0 = keep scenario value
    int workers = 1;
};

struct RunOutcome {
    int exit_code = 0;  // 0 pass, 1 checks failed, 2 config/parse, 3 integration abort
    std::string out_dir;
    std::string message;
};

/// Integrates, analyzes and writes trajectory.csv, series.csv and
/// diagnostics.json into the output directory. Exit code 0 iff every enabled
/// check passes.
RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Expands the sweep grid (cartesian product of the axes) and runs every grid
/// point, up to options.workers concurrently; writes one subdirectory per
/// point plus summary.csv. Exit code 0 iff every grid point passes.
RunOutcome run_sweep(const Scenario& scenario, const RunOptions& options = {});

/// Theory constants computable without integration (initial data only):
/// written by the `bounds` subcommand.
nlohmann::ordered_json a_priori_bounds(const Scenario& scenario);

} // namespace flocksim
