#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "flocksim/diagnostics.hpp"
#include "flocksim/history.hpp"

namespace flocksim {

/// CSV rows: t, agent index, position components, velocity components.
void write_trajectory_csv(const std::string& path, const TrajectoryHistory& history, int stride);

/// CSV columns: t, d_x, d_v, E, W (E/W are nan outside their evaluable range).
void write_series_csv(const std::string& path, const DiagnosticsReport& report);

/// Deterministic JSON verdict document (fixed key order, no timestamps).
nlohmann::ordered_json report_to_json(const DiagnosticsReport& report, const std::string& name,
                                      const std::vector<std::string>& enabled_checks);

void write_text_file(const std::string& path, const std::string& content);

} // namespace flocksim
