#pragma once

#include <string>
#include <vector>

#include "laptime/cases/case_config.hpp"
#include "laptime/vehicle/model.hpp"

namespace laptime::cases {

enum class Maneuver { StepSteer, SweptSine };
Maneuver maneuver_from_string(const std::string& s);
std::string to_string(Maneuver m);

// Road-wheel steer demand at time t.
double steer_input(Maneuver kind, const ManeuverSettings& s, double t);

struct ManeuverResult {
  std::vector<double> t, steer, speed, yaw_rate, ay, roll;
  bool ok = true;
  double failed_at = 0.0;  // time of the blow-up when !ok
  std::string message;
};

// Fixed-step RK4 run at constant speed on a straight reference line, the
// speed held by a proportional torque regulator shared by the four wheels.
ManeuverResult run_maneuver(const vehicle::VehicleModel& m, Maneuver kind, const ManeuverSettings& s);
ManeuverResult run_maneuver(const CaseConfig& c);

// Rolling start at speed v: static suspension, wheels rolling without slip.
vehicle::State rolling_state(const vehicle::VehicleModel& m, double v);

}  // namespace laptime::cases
