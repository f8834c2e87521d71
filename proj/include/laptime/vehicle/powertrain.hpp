#pragma once

#include "laptime/vehicle/params.hpp"

namespace laptime::vehicle {

// Wheel-side torque available at motor speed N [rpm]:
// 9550 i_g P / max(N, N_b), constant below the base speed.
double motor_torque_limit(double motor_speed_rpm, double gear_ratio, double power_kw, double base_speed_rpm);

struct PowertrainMass {
  double motor = 0.0;
  double gearbox = 0.0;
  double total() const { return motor + gearbox; }
};

// Motor and gearbox mass for one unit. The gearbox term carries the
// calibrated scale from PowertrainParams.
PowertrainMass powertrain_mass(double power_kw, double base_speed_rpm, double gear_ratio, const PowertrainParams& p);

// Gearbox scale so that four reference units weigh reference_mass.
double calibrate_gearbox_scale(const PowertrainParams& p);

// Effective spin inertia J_u + i_g^2 J_d.
double effective_spin_inertia(double j_u, double j_d, double gear_ratio);

}  // namespace laptime::vehicle
