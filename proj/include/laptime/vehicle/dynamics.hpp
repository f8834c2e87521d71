#pragma once

#include <array>

#include "laptime/track/track.hpp"
#include "laptime/vehicle/model.hpp"

namespace laptime::vehicle {

inline constexpr double kSlipSpeedFloor = 0.1;  // V_eps [m/s]

struct SlipState {
  double kappa = 0.0;
  double alpha = 0.0;
  double vx = 0.0;  // wheel-frame longitudinal speed
  double vy = 0.0;
};

// Slip from the wheel-centre planar velocity in the body frame, the wheel
// steer angle, spin rate and rolling radius.
SlipState slip_quantities(double v_body_x, double v_body_y, double steer, double spin_rate, double radius);

// Lift (negative for downforce) per axle and drag, F = 1/2 C rho A V^2.
struct AeroLoads {
  double drag = 0.0;
  double lift_front = 0.0;
  double lift_rear = 0.0;
};
AeroLoads aero_loads(const AeroParams& a, double v_x);

struct WheelOutputs {
  double jounce = 0.0, jounce_rate = 0.0;
  double spring_force = 0.0;  // including preload
  double arb_force = 0.0;     // upward on the wheel
  double fz = 0.0;
  suspension::WheelKinematics kin;
  SlipState slip;
  tire::TireForces force;
  double motor_speed = 0.0;  // rpm
  double torque_limit = 0.0;
};

struct Evaluation {
  State xdot{};
  std::array<WheelOutputs, 4> wheel;
  AeroLoads aero;
  double curvature = 0.0;
  std::array<double, 6> body_accel{};
};

// Full state derivative. `track` may be null for a straight reference line.
void evaluate(const VehicleModel& m, const double* x, const double* u, const track::Track* track, Evaluation& out);
State dynamics(const VehicleModel& m, const State& x, const Control& u, const track::Track* track = nullptr);

// Generalised forces split by origin, over the 14 mechanical coordinates
// (6 body, 4 wheel heights, 4 spins).
struct ForceBreakdown {
  std::array<double, 14> conservative{};
  std::array<double, 14> damper{};
  std::array<double, 14> tire{};
  std::array<double, 14> aero{};
  std::array<double, 14> drive{};
};
ForceBreakdown generalized_forces(const VehicleModel& m, const double* x, const double* u);

// Mechanical energy (kinetic, gravity, springs, anti-roll bars, tire springs).
double mechanical_energy(const VehicleModel& m, const double* x);
// Power of the non-conservative forces, Q_nc . qdot.
double nonconservative_power(const VehicleModel& m, const double* x, const double* u);

}  // namespace laptime::vehicle
