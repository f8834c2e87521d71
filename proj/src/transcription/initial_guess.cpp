#include "laptime/transcription/initial_guess.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <string>

#include "laptime/error.hpp"
#include "laptime/vehicle/dynamics.hpp"
#include "laptime/vehicle/powertrain.hpp"

namespace laptime::transcription {

using namespace vehicle;

namespace {

// Unknowns of the per-node trim: spin rates, steer, common torque, sideslip,
// heave, roll, pitch and wheel heights.
constexpr int kTrim = 14;
constexpr double kInfNorm = std::numeric_limits<double>::infinity();
using TrimVec = Eigen::Matrix<double, kTrim, 1>;

void apply_trim(const TrimVec& q, double v0, double psi, double* x, double* u) {
  for (int w = 0; w < 4; ++w) {
    x[ix::kSpinRate + w] = q[w];
    u[iu::kTorque + w] = q[5];
  }
  u[iu::kSteer] = q[4];
  x[ix::kVx] = v0 * std::cos(psi + q[6]);
  x[ix::kVy] = v0 * std::sin(psi + q[6]);
  x[ix::kZ] = q[7];
  x[ix::kRoll] = q[8];
  x[ix::kPitch] = q[9];
  for (int w = 0; w < 4; ++w) x[ix::kWheelZ + w] = q[10 + w];
}

TrimVec trim_residual(const VehicleModel& m, const track::Track& t, double v0, double psi, double omega, double* x,
                      double* u, const TrimVec& q) {
  apply_trim(q, v0, psi, x, u);
  Evaluation e;
  evaluate(m, x, u, &t, e);
  const auto& a = e.xdot;
  TrimVec r;
  for (int w = 0; w < 4; ++w) r[w] = a[ix::kSpinRate + w];
  r[4] = a[ix::kVx] + v0 * omega * std::sin(psi + q[6]);
  r[5] = a[ix::kVy] - v0 * omega * std::cos(psi + q[6]);
  r[6] = a[ix::kYawRate];
  r[7] = a[ix::kVz];
  r[8] = a[ix::kRollRate];
  r[9] = a[ix::kPitchRate];
  for (int w = 0; w < 4; ++w) r[10 + w] = a[ix::kWheelVz + w];
  return r;
}

// Damped Newton on the steady-state trim; keeps the best iterate.
TrimVec solve_trim(const VehicleModel& m, const track::Track& t, double v0, double psi, double omega, double* x,
                   double* u, TrimVec q) {
  TrimVec best = q;
  double best_norm = kInfNorm;
  for (int it = 0; it < 30; ++it) {
    TrimVec r;
    try {
      r = trim_residual(m, t, v0, psi, omega, x, u, q);
    } catch (const EvaluationError&) {
      break;
    }
    const double norm = r.norm();
    if (norm < best_norm) {
      best_norm = norm;
      best = q;
    } else {
      break;
    }
    if (norm < 1e-9) break;
    Eigen::Matrix<double, kTrim, kTrim> jac;
    for (int j = 0; j < kTrim; ++j) {
      TrimVec qp = q;
      const double h = 1e-7 * std::max(1.0, std::abs(q[j]));
      qp[j] += h;
      jac.col(j) = (trim_residual(m, t, v0, psi, omega, x, u, qp) - r) / h;
    }
    TrimVec dq = jac.colPivHouseholderQr().solve(-r);
    if (!dq.allFinite()) break;
    // keep steer, sideslip and attitude steps modest
    double scale = 1.0;
    for (int j : {4, 6, 8, 9}) scale = std::min(scale, 0.05 / std::max(0.05, std::abs(dq[j])));
    for (int j : {7, 10, 11, 12, 13}) scale = std::min(scale, 0.01 / std::max(0.01, std::abs(dq[j])));
    q += scale * dq;
  }
  apply_trim(best, v0, psi, x, u);
  return best;
}

}  // namespace

Trajectory initial_guess(const track::Track& t, const VehicleModel& m, int nodes, double v0,
                         const std::vector<double>& p) {
  if (nodes < 2) throw InputError("initial guess needs at least two nodes");
  if (!(v0 > 0.0)) throw InputError("initial-guess speed must be positive");
  Trajectory tr;
  tr.nodes = nodes;
  tr.nx = kNx;
  tr.nu = kNu;
  tr.x.assign(static_cast<size_t>(nodes) * kNx, 0.0);
  tr.u.assign(static_cast<size_t>(nodes) * kNu, 0.0);
  tr.tf = t.length / v0;
  tr.p = p;

  const State rest = static_state(m);
  const double wheelbase = m.params.l_f + m.params.l_r;
  const double drag = aero_loads(m.params.aero, v0).drag;
  TrimVec q;
  bool have_trim = false;
  for (int k = 0; k < nodes; ++k) {
    const double time = tr.time(k);
    const double s = k == nodes - 1 ? t.length : v0 * time;
    const double psi = t.heading_at(s);
    const double c = t.curvature_at(s);
    double* x = tr.state(k);
    for (int i = 0; i < kNx; ++i) x[i] = rest[i];
    x[ix::kVx] = v0 * std::cos(psi);
    x[ix::kVy] = v0 * std::sin(psi);
    x[ix::kYawRate] = v0 * c;
    x[ix::kX] = t.x_at(s);
    x[ix::kY] = t.y_at(s);
    x[ix::kYaw] = psi;
    x[ix::kS] = s;
    double* u = tr.control(k);
    u[iu::kSteer] = wheelbase * c;
    for (int w = 0; w < 4; ++w) {
      const double r = rest[ix::kWheelZ + w];
      x[ix::kSpinRate + w] = v0 / r;
      x[ix::kSpin + w] = v0 * time / r;
      const double torque = drag * r / 4.0;
      const auto& mot = m.design.motors[w];
      const double speed = x[ix::kSpinRate + w] * mot.gear_ratio * 60.0 / (2.0 * M_PI);
      const double limit = motor_torque_limit(speed, mot.gear_ratio, mot.power_kw, mot.base_speed);
      if (torque > limit || speed > mot.base_speed * mot.beta) {
        throw InputError("initial-guess speed " + std::to_string(v0) + " m/s is outside the motor envelope");
      }
      u[iu::kTorque + w] = torque;
    }

    if (!have_trim) {
      for (int w = 0; w < 4; ++w) q[w] = x[ix::kSpinRate + w];
      q[4] = u[iu::kSteer];
      q[5] = u[iu::kTorque];
      q[6] = 0.0;
      q[7] = x[ix::kZ];
      q[8] = x[ix::kRoll];
      q[9] = x[ix::kPitch];
      for (int w = 0; w < 4; ++w) q[10 + w] = x[ix::kWheelZ + w];
      have_trim = true;
    }
    q = solve_trim(m, t, v0, psi, v0 * c, x, u, q);
    for (int w = 0; w < 4; ++w) {
      const auto& mot = m.design.motors[w];
      const double speed = x[ix::kSpinRate + w] * mot.gear_ratio * 60.0 / (2.0 * M_PI);
      if (u[iu::kTorque + w] > motor_torque_limit(speed, mot.gear_ratio, mot.power_kw, mot.base_speed)) {
        throw InputError("initial-guess speed " + std::to_string(v0) + " m/s is outside the motor envelope");
      }
      x[ix::kSpin + w] = k == 0 ? 0.0 : tr.state(k - 1)[ix::kSpin + w] +
                                            0.5 * tr.step() * (tr.state(k - 1)[ix::kSpinRate + w] + x[ix::kSpinRate + w]);
    }
  }
  return tr;
}

}  // namespace laptime::transcription
