#include "laptime/vehicle/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "laptime/error.hpp"
#include "laptime/vehicle/powertrain.hpp"

namespace laptime::vehicle {
namespace {

constexpr double kRadPerSecToRpm = 60.0 / (2.0 * std::numbers::pi);

using Q14 = std::array<double, 14>;

// Vertical force F acting upward on the body at wheel w.
void body_vertical(Q14& q, const BodyInertia& b, int w, double f) {
  q[2] += f;
  q[3] += f * b.y[w];
  q[4] += -f * b.x[w];
}

MassConfig mass_config(const double* x) {
  MassConfig c;
  for (int i = 0; i < 6; ++i) c.q[i] = x[ix::kX + i];
  for (int w = 0; w < 4; ++w) c.z_u[w] = x[ix::kWheelZ + w];
  return c;
}

// Evaluates wheel quantities and the generalised forces. `wheels` and
// `aero_out` may be null.
void assemble(const VehicleModel& m, const double* x, const double* u, ForceBreakdown& fb,
              std::array<WheelOutputs, 4>* wheels, AeroLoads* aero_out) {
  const auto& b = m.inertia;
  const auto& p = m.params;
  const MassConfig cfg = mass_config(x);
  const double psi = x[ix::kYaw];
  const double cp = std::cos(psi);
  const double sp = std::sin(psi);
  const double vxb = cp * x[ix::kVx] + sp * x[ix::kVy];
  const double vyb = -sp * x[ix::kVx] + cp * x[ix::kVy];
  const double kz = m.tire.vertical_stiffness();
  const double cz = m.tire.vertical_damping();
  const double r0 = m.tire.unloaded_radius();

  std::array<WheelOutputs, 4> local;
  auto& wo = wheels ? *wheels : local;

  // Gravity.
  fb.conservative[2] -= b.m_b * p.g;
  for (int w = 0; w < 4; ++w) fb.conservative[6 + w] -= b.m_u[w] * p.g;

  for (int w = 0; w < 4; ++w) {
    auto& o = wo[w];
    const auto& axle = m.axle_of(w);
    const double zw = relative_wheel_height(b, cfg, w);
    const double zu = x[ix::kWheelZ + w];
    const double zu_dot = x[ix::kWheelVz + w];
    const double zw_dot = zu_dot - (b.y[w] * x[ix::kRollRate] - b.x[w] * x[ix::kPitchRate] + x[ix::kVz]);
    o.jounce = zw - m.rest.z_w0[w];
    o.jounce_rate = zw_dot;

    // Spring and damper between body and wheel.
    const double lam = axle.motion_ratio(o.jounce);
    const double f_el = m.rest.preload[w] + lam * axle.spring_stiffness * lam * o.jounce;
    const double f_damp = lam * axle.damping * axle.damping_scale * lam * o.jounce_rate;
    o.spring_force = f_el + f_damp;
    body_vertical(fb.conservative, b, w, f_el);
    fb.conservative[6 + w] -= f_el;
    body_vertical(fb.damper, b, w, f_damp);
    fb.damper[6 + w] -= f_damp;

    // Tire normal load, elastic part kept conservative.
    const double defl = r0 - zu;
    o.fz = tire::tire_vertical_force(defl, -zu_dot, kz, cz);
    const double fz_el = defl > 0.0 ? kz * defl : 0.0;
    fb.conservative[6 + w] += fz_el;
    fb.tire[6 + w] += o.fz - fz_el;

    const double steer_driver = w < 2 ? u[iu::kSteer] : 0.0;
    o.kin = suspension::wheel_kinematics(o.jounce, steer_driver, axle,
                                         (w % 2 == 0) ? suspension::Side::Right : suspension::Side::Left);
    const double delta = o.kin.steer;
    const double cd = std::cos(delta);
    const double sd = std::sin(delta);

    const double vux = vxb + zw * x[ix::kPitchRate] - b.y[w] * x[ix::kYawRate];
    const double vuy = vyb - zw * x[ix::kRollRate] + b.x[w] * x[ix::kYawRate];
    o.slip = slip_quantities(vux, vuy, delta, x[ix::kSpinRate + w], zu);
    o.force = m.tire.evaluate(tire::TireInput{o.fz, o.slip.kappa, o.slip.alpha, o.kin.camber, o.slip.vx});

    const auto& f = o.force;
    const double fbx = f.fx * cd - f.fy * sd;
    const double fby = f.fx * sd + f.fy * cd;
    const double h = -zw;
    fb.tire[0] += fbx * cp - fby * sp;
    fb.tire[1] += fbx * sp + fby * cp;
    fb.tire[3] += fby * h + f.mx * cd;
    fb.tire[4] += -fbx * h + f.mx * sd;
    fb.tire[5] += fby * b.x[w] - fbx * b.y[w] + f.mz;
    fb.tire[10 + w] += f.my - f.fx * zu;

    const double torque = u[iu::kTorque + w];
    fb.drive[10 + w] += torque;
    fb.drive[3] += torque * sd;
    fb.drive[4] += -torque * cd;

    const auto& mot = m.design.motors[w];
    o.motor_speed = x[ix::kSpinRate + w] * mot.gear_ratio * kRadPerSecToRpm;
    o.torque_limit = motor_torque_limit(o.motor_speed, mot.gear_ratio, mot.power_kw, mot.base_speed);
  }

  // Anti-roll bars: right wheel gets -F, left wheel +F, body the reaction.
  for (int a = 0; a < 2; ++a) {
    const int right = 2 * a;
    const int left = 2 * a + 1;
    const auto& axle = m.axles[a];
    const double f = suspension::antiroll_force(wo[right].jounce, wo[left].jounce, axle.arb, axle.arb_scale);
    wo[right].arb_force = -f;
    wo[left].arb_force = f;
    fb.conservative[6 + right] += -f;
    fb.conservative[6 + left] += f;
    body_vertical(fb.conservative, b, right, f);
    body_vertical(fb.conservative, b, left, -f);
  }

  const AeroLoads aero = aero_loads(p.aero, vxb);
  fb.aero[0] -= aero.drag * cp;
  fb.aero[1] -= aero.drag * sp;
  fb.aero[2] += aero.lift_front + aero.lift_rear;
  fb.aero[4] += -aero.lift_front * b.x[0] - aero.lift_rear * b.x[2];
  if (p.aero.drag_pitch_moment) fb.aero[4] += -aero.drag * p.aero.drag_height;
  if (aero_out) *aero_out = aero;
}

}  // namespace

SlipState slip_quantities(double v_body_x, double v_body_y, double steer, double spin_rate, double radius) {
  SlipState s;
  const double cd = std::cos(steer);
  const double sd = std::sin(steer);
  s.vx = v_body_x * cd + v_body_y * sd;
  s.vy = -v_body_x * sd + v_body_y * cd;
  const double denom = std::max(std::abs(s.vx), kSlipSpeedFloor);
  s.kappa = (spin_rate * radius - s.vx) / denom;
  s.alpha = -std::atan2(s.vy, denom);
  return s;
}

AeroLoads aero_loads(const AeroParams& a, double v_x) {
  const double q = 0.5 * a.rho * a.area * v_x * v_x;
  return AeroLoads{a.cd * q, a.cl_front * q, a.cl_rear * q};
}

void evaluate(const VehicleModel& m, const double* x, const double* u, const track::Track* track, Evaluation& out) {
  ForceBreakdown fb;
  assemble(m, x, u, fb, &out.wheel, &out.aero);
  const auto& b = m.inertia;
  const MassConfig cfg = mass_config(x);

  std::array<double, 6> qd;
  std::array<double, 4> zd;
  for (int i = 0; i < 6; ++i) qd[i] = x[i];
  for (int w = 0; w < 4; ++w) zd[w] = x[ix::kWheelVz + w];

  Q14 q{};
  for (int i = 0; i < 14; ++i) {
    q[i] = fb.conservative[i] + fb.damper[i] + fb.tire[i] + fb.aero[i] + fb.drive[i];
  }

  const Mat6 mass = body_mass_matrix(b, cfg);
  const Coupling c = velocity_coupling(b, cfg, qd, zd);
  Vec6 rhs;
  for (int i = 0; i < 6; ++i) rhs[i] = q[i] - c.body[i];

  Vec6 acc = Vec6::Zero();
  if (m.options.lock_suspension) {
    const int idx[3] = {0, 1, 5};
    Eigen::Matrix3d mr;
    Eigen::Vector3d rr;
    for (int i = 0; i < 3; ++i) {
      rr[i] = rhs[idx[i]];
      for (int j = 0; j < 3; ++j) mr(i, j) = mass(idx[i], idx[j]);
    }
    Eigen::Vector3d a = mr.ldlt().solve(rr);
    for (int i = 0; i < 3; ++i) acc[idx[i]] = a[i];
  } else {
    Eigen::LLT<Mat6> llt(mass);
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Mat6> es(mass);
      throw EvaluationError("body mass matrix is not positive definite (eigenvalues " +
                            std::to_string(es.eigenvalues().minCoeff()) + " .. " +
                            std::to_string(es.eigenvalues().maxCoeff()) + ")");
    }
    acc = llt.solve(rhs);
  }

  State& xd = out.xdot;
  for (int i = 0; i < 6; ++i) {
    xd[i] = acc[i];
    out.body_accel[i] = acc[i];
  }
  for (int w = 0; w < 4; ++w) {
    xd[ix::kWheelVz + w] = m.options.lock_suspension ? 0.0 : (q[6 + w] - c.wheel[w]) / b.m_u[w];
    xd[ix::kSpinRate + w] = q[10 + w] / m.spin_inertia[w];
  }
  for (int i = 0; i < 6; ++i) xd[ix::kX + i] = x[i];
  for (int w = 0; w < 4; ++w) {
    xd[ix::kWheelZ + w] = x[ix::kWheelVz + w];
    xd[ix::kSpin + w] = x[ix::kSpinRate + w];
  }

  out.curvature = track ? track->curvature_at(x[ix::kS]) : 0.0;
  const auto pr = track::path_rates(x[ix::kVx], x[ix::kVy], x[ix::kYaw], x[ix::kYawRate], x[ix::kN], x[ix::kChi],
                                    out.curvature);
  xd[ix::kS] = pr.sdot;
  xd[ix::kN] = pr.ndot;
  xd[ix::kChi] = pr.chidot;

  for (int i = 0; i < kNx; ++i) {
    if (!std::isfinite(xd[i])) throw EvaluationError("non-finite state derivative at index " + std::to_string(i));
  }
}

State dynamics(const VehicleModel& m, const State& x, const Control& u, const track::Track* track) {
  Evaluation e;
  evaluate(m, x.data(), u.data(), track, e);
  return e.xdot;
}

ForceBreakdown generalized_forces(const VehicleModel& m, const double* x, const double* u) {
  ForceBreakdown fb;
  assemble(m, x, u, fb, nullptr, nullptr);
  return fb;
}

double mechanical_energy(const VehicleModel& m, const double* x) {
  const auto& b = m.inertia;
  const auto& p = m.params;
  const MassConfig cfg = mass_config(x);
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = x[i];
  double e = 0.5 * v.dot(body_mass_matrix(b, cfg) * v);
  e += b.m_b * p.g * x[ix::kZ];
  const double kz = m.tire.vertical_stiffness();
  const double r0 = m.tire.unloaded_radius();
  std::array<double, 4> jounce{};
  for (int w = 0; w < 4; ++w) {
    const double zd = x[ix::kWheelVz + w];
    const double spin = x[ix::kSpinRate + w];
    const double zu = x[ix::kWheelZ + w];
    e += 0.5 * b.m_u[w] * zd * zd + 0.5 * m.spin_inertia[w] * spin * spin;
    e += b.m_u[w] * p.g * zu;
    jounce[w] = relative_wheel_height(b, cfg, w) - m.rest.z_w0[w];
    e += m.rest.preload[w] * jounce[w] + suspension::spring_potential(jounce[w], m.axle_of(w));
    const double defl = r0 - zu;
    if (defl > 0.0) e += 0.5 * kz * defl * defl;
  }
  for (int a = 0; a < 2; ++a) e += suspension::antiroll_potential(jounce[2 * a], jounce[2 * a + 1], m.axles[a]);
  return e;
}

double nonconservative_power(const VehicleModel& m, const double* x, const double* u) {
  const ForceBreakdown fb = generalized_forces(m, x, u);
  std::array<double, 14> qd{};
  for (int i = 0; i < 6; ++i) qd[i] = x[i];
  for (int w = 0; w < 4; ++w) {
    qd[6 + w] = x[ix::kWheelVz + w];
    qd[10 + w] = x[ix::kSpinRate + w];
  }
  double pw = 0.0;
  for (int i = 0; i < 14; ++i) pw += (fb.damper[i] + fb.tire[i] + fb.aero[i] + fb.drive[i]) * qd[i];
  return pw;
}

}  // namespace laptime::vehicle
