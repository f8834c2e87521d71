#include "laptime/vehicle/model.hpp"

#include "laptime/error.hpp"
#include "laptime/vehicle/powertrain.hpp"

namespace laptime::vehicle {

double VehicleModel::total_mass() const {
  double m = inertia.m_b;
  for (double mu : inertia.m_u) m += mu;
  return m;
}

VehicleModel make_model(const VehicleParams& p, const tire::MagicFormula& tire, const Design& d,
                        const ModelOptions& opt) {
  VehicleModel m;
  m.params = p;
  m.design = d;
  m.tire = tire;
  m.options = opt;

  const double wheelbase = p.l_f + p.l_r;
  if (!(d.l_f > 0.0 && d.l_f < wheelbase)) throw InputError("design l_f outside the wheelbase");
  const double l_f = d.l_f;
  const double l_r = wheelbase - l_f;

  m.axles = {p.front, p.rear};
  m.axles[0].spring_stiffness = d.k_bs_f;
  m.axles[1].spring_stiffness = d.k_bs_r;
  m.axles[0].damping_scale = d.c_f;
  m.axles[1].damping_scale = d.c_r;
  m.axles[0].arb_scale = d.k_atr_f;
  m.axles[1].arb_scale = d.k_atr_r;
  for (const auto& a : m.axles) {
    if (!(a.spring_stiffness > 0.0) || a.damping_scale < 0.0 || a.arb_scale < 0.0) {
      throw InputError("design produces a non-physical suspension setting");
    }
  }

  const auto& pt = p.powertrain;
  const bool in_wheel = pt.mounting == Mounting::InWheel;
  double sprung = p.m_b - pt.reference_mass;
  auto& b = m.inertia;
  for (int w = 0; w < 4; ++w) {
    const auto& mot = d.motors[w];
    double unit = powertrain_mass(mot.power_kw, mot.base_speed, mot.gear_ratio, pt).total();
    m.powertrain_mass[w] = unit;
    b.m_u[w] = p.m_u[w];
    if (in_wheel) {
      b.m_u[w] += unit + pt.in_wheel_extra_mass;
      sprung -= pt.in_wheel_extra_mass;
    } else {
      sprung += unit;
    }
    m.spin_inertia[w] = effective_spin_inertia(p.j_u[w], pt.rotor_inertia, mot.gear_ratio) +
                        (in_wheel ? pt.in_wheel_extra_inertia : 0.0);
  }
  if (!(sprung > 0.0)) throw InputError("sprung mass is not positive for this design");
  b.m_b = sprung;
  b.jxx = p.jxx;
  b.jyy = p.jyy;
  b.jzz = p.jzz;
  b.x = {l_f, l_f, -l_r, -l_r};
  b.y = {-0.5 * p.w_f, 0.5 * p.w_f, -0.5 * p.w_r, 0.5 * p.w_r};

  // Spring preloads carry the sprung weight with zero pitch moment.
  const double g = p.g;
  const double kz = tire.vertical_stiffness();
  const double r0 = tire.unloaded_radius();
  auto& rest = m.rest;
  rest.z_body = p.h_cg;
  for (int w = 0; w < 4; ++w) {
    double share = w < 2 ? l_r / wheelbase : l_f / wheelbase;
    rest.preload[w] = 0.5 * b.m_b * g * share;
    double fz = rest.preload[w] + b.m_u[w] * g;
    rest.z_u[w] = r0 - fz / kz;
    if (!(rest.z_u[w] > 0.0)) throw InputError("static tire deflection exceeds the unloaded radius");
    rest.z_w0[w] = rest.z_u[w] - rest.z_body;
  }
  return m;
}

State static_state(const VehicleModel& m) {
  State x{};
  x[ix::kZ] = m.rest.z_body;
  for (int w = 0; w < 4; ++w) x[ix::kWheelZ + w] = m.rest.z_u[w];
  return x;
}

}  // namespace laptime::vehicle
