#pragma once

// Linear two-degree-of-freedom bicycle model built from the same vehicle and
// tire data as the full model, for step and frequency-response comparisons.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "laptime/suspension/suspension.hpp"
#include "laptime/vehicle/dynamics.hpp"

namespace oracle {

struct Bicycle {
  double m = 0.0, iz = 0.0;
  double a = 0.0, b = 0.0;   // CG to front / rear axle
  double cf = 0.0, cr = 0.0;  // axle cornering stiffness [N/rad]
  double mf = 0.0, mr = 0.0;  // axle aligning stiffness [N m/rad]
  double steer_ratio = 1.0;   // road-wheel steer per driver steer
  double v = 0.0;

  // State (v_y, r). Yaw moment per unit slip angle of each axle.
  double nf() const { return a * cf + mf; }
  double nr() const { return mr - b * cr; }

  Eigen::Matrix2d A() const {
    Eigen::Matrix2d A;
    A << -(cf + cr) / (m * v), (b * cr - a * cf) / (m * v) - v,
        -(nf() + nr()) / (iz * v), (b * nr() - a * nf()) / (iz * v);
    return A;
  }
  Eigen::Vector2d B() const { return Eigen::Vector2d(cf / m, nf() / iz) * steer_ratio; }

  // Steady yaw rate per unit steer.
  double yaw_gain() const { return -(A().inverse() * B())[1]; }
  // Kinematic yaw rate V delta / L per unit steer.
  double kinematic_gain() const { return v * steer_ratio / (a + b); }

  double yaw_gain_at(double f_hz) const {
    const std::complex<double> jw(0.0, 2.0 * M_PI * f_hz);
    Eigen::Matrix2cd S = jw * Eigen::Matrix2cd::Identity() - A().cast<std::complex<double>>();
    Eigen::Vector2cd x = S.inverse() * B().cast<std::complex<double>>();
    return std::abs(x[1]);
  }

  double natural_frequency_hz() const { return std::sqrt(A().determinant()) / (2.0 * M_PI); }

  // Yaw-rate step response to `steer` applied at t = 0, RK4 at step h.
  std::vector<double> step_response(double steer, double duration, double h) const {
    const Eigen::Matrix2d a_ = A();
    const Eigen::Vector2d b_ = B() * steer;
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    std::vector<double> r{0.0};
    auto f = [&](const Eigen::Vector2d& s) { return Eigen::Vector2d(a_ * s + b_); };
    const long n = std::lround(duration / h);
    for (long k = 0; k < n; ++k) {
      const Eigen::Vector2d k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      r.push_back(x[1]);
    }
    return r;
  }
};

// Central differences of Fy and Mz in alpha at slip ratio kappa.
inline double cornering_stiffness(const laptime::tire::MagicFormula& t, double fz, double vx, double kappa = 0.0) {
  const double h = 1e-5;
  return (t.evaluate({fz, kappa, h, 0.0, vx}).fy - t.evaluate({fz, kappa, -h, 0.0, vx}).fy) / (2.0 * h);
}
inline double aligning_stiffness(const laptime::tire::MagicFormula& t, double fz, double vx, double kappa = 0.0) {
  const double h = 1e-5;
  return (t.evaluate({fz, kappa, h, 0.0, vx}).mz - t.evaluate({fz, kappa, -h, 0.0, vx}).mz) / (2.0 * h);
}

// Slip ratio at which the tire delivers longitudinal force fx, by bisection.
inline double drive_slip(const laptime::tire::MagicFormula& t, double fz, double vx, double fx) {
  double lo = -0.05, hi = 0.05;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t.evaluate({fz, mid, 0.0, 0.0, vx}).fx < fx ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline Bicycle bicycle_of(const laptime::vehicle::VehicleModel& m, double v) {
  using namespace laptime::vehicle;
  Bicycle bk;
  bk.v = v;
  const State x0 = static_state(m);
  MassConfig cfg;
  for (int i = 0; i < 6; ++i) cfg.q[i] = x0[ix::kX + i];
  for (int w = 0; w < 4; ++w) cfg.z_u[w] = x0[ix::kWheelZ + w];
  const Mat6 M = body_mass_matrix(m.inertia, cfg);
  bk.m = M(0, 0);
  const double x_cg = M(1, 5) / bk.m;
  const double y_cg = -M(0, 5) / bk.m;
  bk.iz = M(5, 5) - bk.m * (x_cg * x_cg + y_cg * y_cg);
  bk.a = m.inertia.x[0] - x_cg;
  bk.b = x_cg - m.inertia.x[2];

  // With the suspension locked the tire deflection, and so the load, stays static.
  const AeroLoads aero = aero_loads(m.params.aero, v);
  const double g = m.params.g;
  auto load = [&](int w) {
    const double lift = m.options.lock_suspension ? 0.0 : (w < 2 ? aero.lift_front : aero.lift_rear);
    return m.rest.preload[w] + m.inertia.m_u[w] * g - 0.5 * lift;
  };
  // Equal drive torque on every wheel shares the aero drag equally.
  for (int w = 0; w < 4; ++w) {
    const double kappa = drive_slip(m.tire, load(w), v, 0.25 * aero.drag);
    (w < 2 ? bk.cf : bk.cr) += cornering_stiffness(m.tire, load(w), v, kappa);
    (w < 2 ? bk.mf : bk.mr) += aligning_stiffness(m.tire, load(w), v, kappa);
  }
  const double d = 0.01;
  bk.steer_ratio =
      laptime::suspension::wheel_kinematics(0.0, d, m.axles[0], laptime::suspension::Side::Right).steer / d;
  return bk;
}

}  // namespace oracle
