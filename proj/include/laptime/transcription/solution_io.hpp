#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "laptime/transcription/layout.hpp"

namespace laptime::transcription {

// {"layout": {nodes, nx, nu, np, state_names, control_names, design_names},
//  "tf": .., "x": [nodes * nx], "u": [nodes * nu], "p": [np]}
nlohmann::json to_json(const Trajectory& t, const std::vector<std::string>& design_names = {});
Trajectory trajectory_from_json(const nlohmann::json& j);

void save_trajectory(const Trajectory& t, const std::string& path, const std::vector<std::string>& design_names = {});
Trajectory load_trajectory(const std::string& path);

}  // namespace laptime::transcription
