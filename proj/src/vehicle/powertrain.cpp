#include "laptime/vehicle/powertrain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "laptime/error.hpp"

namespace laptime::vehicle {
namespace {

double raw_gearbox_mass(double power_kw, double base_speed, double i, const PowertrainParams& p) {
  double t_in = 9550.0 * power_kw / base_speed;
  return (500.0 * t_in / p.stiffness_k) * p.psi_fill * p.rho_gc * p.rho_g * std::numbers::pi *
         (1.0 + 1.0 / i + i + i * i);
}

}  // namespace

double motor_torque_limit(double motor_speed_rpm, double gear_ratio, double power_kw, double base_speed_rpm) {
  return 9550.0 * gear_ratio * power_kw / std::max(motor_speed_rpm, base_speed_rpm);
}

PowertrainMass powertrain_mass(double power_kw, double base_speed_rpm, double gear_ratio, const PowertrainParams& p) {
  if (!(power_kw > 0.0) || !(base_speed_rpm > 0.0) || !(gear_ratio > 0.0)) {
    throw InputError("powertrain mass needs positive power, base speed and gear ratio");
  }
  PowertrainMass m;
  m.motor = p.rho_m * std::pow(1000.0 * power_kw / base_speed_rpm, 0.75);
  m.gearbox = p.gearbox_mass_scale * raw_gearbox_mass(power_kw, base_speed_rpm, gear_ratio, p);
  return m;
}

double calibrate_gearbox_scale(const PowertrainParams& p) {
  double motor = p.rho_m * std::pow(1000.0 * p.ref_power_kw / p.ref_base_speed, 0.75);
  double gearbox = p.reference_mass / 4.0 - motor;
  if (!(gearbox > 0.0)) throw InputError("powertrain reference mass is smaller than the motor mass alone");
  return gearbox / raw_gearbox_mass(p.ref_power_kw, p.ref_base_speed, p.ref_gear_ratio, p);
}

double effective_spin_inertia(double j_u, double j_d, double gear_ratio) { return j_u + gear_ratio * gear_ratio * j_d; }

}  // namespace laptime::vehicle
