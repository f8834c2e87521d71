#include "laptime/transcription/solution_io.hpp"

#include <fstream>

#include "laptime/error.hpp"
#include "laptime/vehicle/state.hpp"

namespace laptime::transcription {

nlohmann::json to_json(const Trajectory& t, const std::vector<std::string>& design_names) {
  nlohmann::json layout{{"nodes", t.nodes}, {"nx", t.nx}, {"nu", t.nu}, {"np", t.p.size()}};
  if (t.nx == vehicle::kNx && t.nu == vehicle::kNu) {
    layout["state_names"] = std::vector<std::string>(vehicle::kStateNames.begin(), vehicle::kStateNames.end());
    layout["control_names"] = std::vector<std::string>(vehicle::kControlNames.begin(), vehicle::kControlNames.end());
  }
  if (!design_names.empty()) layout["design_names"] = design_names;
  return {{"layout", layout}, {"tf", t.tf}, {"x", t.x}, {"u", t.u}, {"p", t.p}};
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  try {
    const auto& l = j.at("layout");
    Trajectory t;
    t.nodes = l.at("nodes").get<int>();
    t.nx = l.at("nx").get<int>();
    t.nu = l.at("nu").get<int>();
    t.tf = j.at("tf").get<double>();
    t.x = j.at("x").get<std::vector<double>>();
    t.u = j.at("u").get<std::vector<double>>();
    t.p = j.at("p").get<std::vector<double>>();
    if (t.nodes < 2 || t.x.size() != static_cast<size_t>(t.nodes) * t.nx ||
        t.u.size() != static_cast<size_t>(t.nodes) * t.nu || t.p.size() != l.at("np").get<size_t>())
      throw InputError("trajectory arrays do not match the layout");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed trajectory JSON: ") + e.what());
  }
}

void save_trajectory(const Trajectory& t, const std::string& path, const std::vector<std::string>& design_names) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << to_json(t, design_names).dump(1) << "\n";
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return trajectory_from_json(j);
}

}  // namespace laptime::transcription
