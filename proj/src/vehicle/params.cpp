#include "laptime/vehicle/params.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "laptime/error.hpp"
#include "laptime/vehicle/powertrain.hpp"

namespace laptime::vehicle {
namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError("vehicle: " + what + " must be positive and finite");
}

}  // namespace

VehicleParams params_from_json(const nlohmann::json& j, const std::string& base_dir) {
  VehicleParams p;
  try {
    read(j, "name", p.name);
    read(j, "g", p.g);
    if (j.contains("mass")) {
      const auto& m = j["mass"];
      read(m, "m_b", p.m_b);
      read(m, "m_u", p.m_u);
      read(m, "J_xx", p.jxx);
      read(m, "J_yy", p.jyy);
      read(m, "J_zz", p.jzz);
      read(m, "J_u", p.j_u);
      read(m, "J_d", p.powertrain.rotor_inertia);
    }
    if (j.contains("geometry")) {
      const auto& g = j["geometry"];
      read(g, "l_f", p.l_f);
      read(g, "l_r", p.l_r);
      read(g, "w_f", p.w_f);
      read(g, "w_r", p.w_r);
      read(g, "h_cg", p.h_cg);
    }
    if (j.contains("aero")) {
      const auto& a = j["aero"];
      read(a, "C_d", p.aero.cd);
      read(a, "rho", p.aero.rho);
      read(a, "A", p.aero.area);
      read(a, "C_l_front", p.aero.cl_front);
      read(a, "C_l_rear", p.aero.cl_rear);
      read(a, "drag_pitch_moment", p.aero.drag_pitch_moment);
      read(a, "h_g", p.aero.drag_height);
    }
    if (j.contains("powertrain")) {
      const auto& t = j["powertrain"];
      auto& pt = p.powertrain;
      read(t, "P_max_kW", pt.p_max_kw);
      read(t, "rho_m", pt.rho_m);
      read(t, "psi_fill", pt.psi_fill);
      read(t, "rho_g", pt.rho_g);
      read(t, "K", pt.stiffness_k);
      read(t, "rho_gc", pt.rho_gc);
      if (t.contains("reference")) {
        const auto& r = t["reference"];
        read(r, "N_b", pt.ref_base_speed);
        read(r, "i_g", pt.ref_gear_ratio);
        read(r, "P_kW", pt.ref_power_kw);
        read(r, "mass_total", pt.reference_mass);
      }
      if (t.contains("motor")) {
        const auto& m = t["motor"];
        read(m, "N_b", pt.base_speed);
        read(m, "beta", pt.beta);
        read(m, "i_g", pt.gear_ratio);
      }
      read(t, "N_max_limit", pt.max_motor_speed);
      read(t, "brake_torque", pt.brake_torque);
      std::string mounting = t.value("mounting", std::string("on_board"));
      if (mounting == "on_board") {
        pt.mounting = Mounting::OnBoard;
      } else if (mounting == "in_wheel") {
        pt.mounting = Mounting::InWheel;
      } else {
        throw InputError("vehicle: mounting must be on_board or in_wheel, got " + mounting);
      }
      read(t, "in_wheel_extra_mass", pt.in_wheel_extra_mass);
      read(t, "in_wheel_extra_inertia", pt.in_wheel_extra_inertia);
    }
    if (j.contains("limits")) {
      const auto& l = j["limits"];
      read(l, "fz_min", p.limits.fz_min);
      read(l, "fz_max", p.limits.fz_max);
      read(l, "kappa_max", p.limits.kappa_max);
      read(l, "alpha_max", p.limits.alpha_max);
    }
    if (!j.contains("suspension")) throw InputError("vehicle: missing suspension block");
    p.front = suspension::axle_from_json(j["suspension"].at("front"), "suspension.front");
    p.rear = suspension::axle_from_json(j["suspension"].at("rear"), "suspension.rear");
    if (j.contains("tire")) {
      std::filesystem::path tp = j["tire"].get<std::string>();
      if (tp.is_relative()) tp = std::filesystem::path(base_dir) / tp;
      p.tire_path = tp.lexically_normal().string();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("vehicle config: ") + e.what());
  }
  p.powertrain.gearbox_mass_scale = calibrate_gearbox_scale(p.powertrain);
  validate(p);
  return p;
}

VehicleParams load_vehicle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vehicle config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  auto dir = std::filesystem::path(path).parent_path().string();
  return params_from_json(j, dir.empty() ? "." : dir);
}

void validate(const VehicleParams& p) {
  require_positive(p.g, "g");
  require_positive(p.m_b, "m_b");
  for (double m : p.m_u) require_positive(m, "m_u");
  for (double jj : p.j_u) require_positive(jj, "J_u");
  require_positive(p.jxx, "J_xx");
  require_positive(p.jyy, "J_yy");
  require_positive(p.jzz, "J_zz");
  require_positive(p.l_f, "l_f");
  require_positive(p.l_r, "l_r");
  require_positive(p.w_f, "w_f");
  require_positive(p.w_r, "w_r");
  require_positive(p.h_cg, "h_cg");
  require_positive(p.aero.rho, "rho");
  require_positive(p.aero.area, "A");
  if (p.aero.cd < 0.0) throw InputError("vehicle: C_d must be non-negative");
  const auto& pt = p.powertrain;
  require_positive(pt.p_max_kw, "P_max_kW");
  require_positive(pt.base_speed, "motor N_b");
  require_positive(pt.beta, "motor beta");
  require_positive(pt.gear_ratio, "motor i_g");
  require_positive(pt.max_motor_speed, "N_max_limit");
  require_positive(pt.brake_torque, "brake_torque");
  if (pt.rotor_inertia < 0.0) throw InputError("vehicle: J_d must be non-negative");
  if (pt.in_wheel_extra_mass < 0.0 || 4.0 * pt.in_wheel_extra_mass >= p.m_b) {
    throw InputError("vehicle: in_wheel_extra_mass out of range");
  }
  if (p.limits.fz_min < 0.0 || p.limits.fz_max <= p.limits.fz_min) throw InputError("vehicle: bad Fz limits");
  require_positive(p.limits.kappa_max, "kappa_max");
  require_positive(p.limits.alpha_max, "alpha_max");
}

nlohmann::json to_json(const VehicleParams& p) {
  const auto& pt = p.powertrain;
  return {
      {"name", p.name},
      {"g", p.g},
      {"tire", p.tire_path},
      {"mass", {{"m_b", p.m_b}, {"m_u", p.m_u}, {"J_xx", p.jxx}, {"J_yy", p.jyy}, {"J_zz", p.jzz},
                {"J_u", p.j_u}, {"J_d", pt.rotor_inertia}}},
      {"geometry", {{"l_f", p.l_f}, {"l_r", p.l_r}, {"w_f", p.w_f}, {"w_r", p.w_r}, {"h_cg", p.h_cg}}},
      {"aero", {{"C_d", p.aero.cd}, {"rho", p.aero.rho}, {"A", p.aero.area}, {"C_l_front", p.aero.cl_front},
                {"C_l_rear", p.aero.cl_rear}, {"drag_pitch_moment", p.aero.drag_pitch_moment},
                {"h_g", p.aero.drag_height}}},
      {"powertrain",
       {{"P_max_kW", pt.p_max_kw}, {"rho_m", pt.rho_m}, {"psi_fill", pt.psi_fill}, {"rho_g", pt.rho_g},
        {"K", pt.stiffness_k}, {"rho_gc", pt.rho_gc},
        {"reference", {{"N_b", pt.ref_base_speed}, {"i_g", pt.ref_gear_ratio}, {"P_kW", pt.ref_power_kw},
                       {"mass_total", pt.reference_mass}}},
        {"motor", {{"N_b", pt.base_speed}, {"beta", pt.beta}, {"i_g", pt.gear_ratio}}},
        {"N_max_limit", pt.max_motor_speed}, {"brake_torque", pt.brake_torque},
        {"mounting", pt.mounting == Mounting::OnBoard ? "on_board" : "in_wheel"},
        {"in_wheel_extra_mass", pt.in_wheel_extra_mass}, {"in_wheel_extra_inertia", pt.in_wheel_extra_inertia}}},
      {"limits", {{"fz_min", p.limits.fz_min}, {"fz_max", p.limits.fz_max}, {"kappa_max", p.limits.kappa_max},
                  {"alpha_max", p.limits.alpha_max}}},
      {"suspension", {{"front", suspension::to_json(p.front)}, {"rear", suspension::to_json(p.rear)}}},
  };
}

tire::MagicFormula load_tire_for(const VehicleParams& p) {
  if (p.tire_path.empty()) throw InputError("vehicle: no tire file configured");
  return tire::MagicFormula(tire::TirFile::load(p.tire_path));
}

}  // namespace laptime::vehicle
