#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laptime/nlp/problem.hpp"
#include "laptime/transcription/lap_problem.hpp"
#include "laptime/vehicle/design.hpp"

namespace laptime::cases {

enum class CaseKind { OWD, COG, DMT, ATR, ALL, SimStep, SimSwept, SweepMass, SweepInertia };

std::string to_string(CaseKind k);
CaseKind case_kind_from_string(const std::string& s);
bool is_design_case(CaseKind k);
vehicle::CaseId design_case(CaseKind k);

struct ManeuverSettings {
  double speed = 15.0;          // held speed [m/s]
  double steer = 0.02;          // amplitude at the road wheel [rad]
  double t_start = 0.2;         // onset of the input [s]
  double duration = 3.0;        // simulated time [s]
  double step = 1e-3;           // RK4 step [s]
  double gain = 2000.0;         // speed regulator, total torque per m/s error [N m s/m]
  double f_start = 0.2, f_end = 3.0;  // swept-sine frequencies [Hz]
  bool lock_suspension = false;
  int stride = 10;              // output every stride-th step
};

struct SweepSettings {
  // Frozen design used at every point.
  vehicle::CaseId design = vehicle::CaseId::OWD;
  // Spin inertia J_u per wheel [kg m^2] or mass moved from the sprung body to
  // each corner [kg], depending on the case kind.
  std::vector<double> values;
};

struct CaseConfig {
  CaseKind kind = CaseKind::OWD;
  std::string vehicle_path;
  std::string tire_path;  // optional override of the vehicle's tire
  std::string track_path;
  // Track CSV of raw X,Y[,width] points, resampled at this spacing [m].
  double track_spacing = 2.0;

  // Design bounds and start point; absent means the case defaults.
  std::optional<std::vector<double>> design_lower, design_upper, design_initial;

  int nodes = 200;
  transcription::Boundary boundary = transcription::Boundary::FlyingLap;
  double v0 = 20.0;
  nlp::Options solver;
  std::string output_dir = "out";

  ManeuverSettings maneuver;
  SweepSettings sweep;

  // Directory relative paths are resolved against.
  std::string base_dir = ".";
};

// Solver settings used for lap problems when the config does not set them.
nlp::Options default_lap_solver_options();

CaseConfig case_config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
CaseConfig load_case_config(const std::string& path);
nlohmann::json to_json(const CaseConfig& c);

// Throws InputError for inconsistent bounds, a zero-length design vector or
// missing files.
void validate(const CaseConfig& c);

std::string resolve_path(const CaseConfig& c, const std::string& path);

}  // namespace laptime::cases
