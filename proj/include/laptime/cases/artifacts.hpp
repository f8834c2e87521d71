#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "laptime/cases/maneuver.hpp"
#include "laptime/cases/runner.hpp"

namespace laptime::cases {

// Summary without the trajectory. Timing sits under "timing" so that the rest
// is identical between repeated runs.
nlohmann::json summary_json(const CaseReport& r);
// Inverse of summary_json for the fields it carries.
CaseReport summary_from_json(const nlohmann::json& j);
CaseReport load_summary(const std::string& path);

// Racing line rebuilt from (s, n) on the centreline next to the integrated
// X, Y states, per node.
struct RacingLine {
  std::vector<double> s, n, x_sn, y_sn, x, y;
  double max_gap() const;
};
RacingLine racing_line(const CaseReport& r, const track::Track& t);

// trajectory.csv, summary.json, solution.json, solver_log.csv and the plot
// data racing_line.csv, speed.csv, steering.csv. Returns the written paths.
std::vector<std::string> emit_artifacts(const CaseReport& r, const track::Track& t, const std::string& dir);
std::vector<std::string> emit_sweep(const std::vector<CaseReport>& reports, const std::string& dir);
std::vector<std::string> emit_maneuver(const ManeuverResult& m, const std::string& dir);

void write_trajectory_csv(const CaseReport& r, const std::string& path);

}  // namespace laptime::cases
