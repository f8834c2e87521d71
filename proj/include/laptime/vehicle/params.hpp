#pragma once

#include <array>
#include <string>

#include <json.hpp>

#include "laptime/suspension/suspension.hpp"
#include "laptime/tire/magic_formula.hpp"

namespace laptime::vehicle {

struct AeroParams {
  double cd = 1.0;
  double rho = 1.225;
  double area = 1.2;
  double cl_front = 0.0;  // negative for downforce
  double cl_rear = 0.0;
  bool drag_pitch_moment = false;
  double drag_height = 0.0;  // drag line above the CG when the moment is enabled
};

enum class Mounting { OnBoard, InWheel };

struct PowertrainParams {
  double p_max_kw = 165.0;  // whole vehicle
  double rho_m = 0.2845;
  double psi_fill = 0.7;
  double rho_g = 78550.0;
  double stiffness_k = 8.92e6;
  double rho_gc = 3.1136;
  // Reference motor that fixes the gearbox mass scale: its four units weigh
  // reference_mass in total.
  double ref_base_speed = 6195.0;
  double ref_gear_ratio = 7.86;
  double ref_power_kw = 41.25;
  double reference_mass = 46.55;
  double gearbox_mass_scale = 0.0;  // derived from the reference
  // Baseline motor when the design does not set it.
  double base_speed = 6195.0;
  double beta = 3.92;
  double gear_ratio = 7.86;
  double rotor_inertia = 0.005;  // J_d [kg m^2]
  double max_motor_speed = 20000.0;  // cap on N_b * beta [rpm]
  double brake_torque = 2000.0;      // per-wheel braking bound [N m]
  Mounting mounting = Mounting::OnBoard;
  double in_wheel_extra_mass = 0.0;     // moved from sprung to unsprung per corner
  double in_wheel_extra_inertia = 0.0;  // added spin inertia per corner
};

struct Limits {
  double fz_min = 50.0;
  double fz_max = 8000.0;
  double kappa_max = 0.25;
  double alpha_max = 0.25;
};

struct VehicleParams {
  std::string name = "vehicle";
  double g = 9.81;
  double m_b = 490.0;  // sprung mass including the reference powertrain
  std::array<double, 4> m_u{11.0, 11.0, 13.0, 13.0};
  double jxx = 60.0, jyy = 280.0, jzz = 320.0;
  std::array<double, 4> j_u{0.5, 0.5, 0.5, 0.5};
  double l_f = 1.595, l_r = 1.135, w_f = 1.585, w_r = 1.535;
  double h_cg = 0.30;  // static CG height
  AeroParams aero;
  PowertrainParams powertrain;
  suspension::AxleSuspension front, rear;
  Limits limits;
  std::string tire_path;
};

VehicleParams params_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
VehicleParams load_vehicle(const std::string& path);
nlohmann::json to_json(const VehicleParams& p);
void validate(const VehicleParams& p);

tire::MagicFormula load_tire_for(const VehicleParams& p);

}  // namespace laptime::vehicle
