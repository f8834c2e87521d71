#pragma once

#include <json.hpp>

#include "laptime/suspension/table.hpp"

namespace laptime::suspension {

enum class Side { Right, Left };

// One axle. Tables are written for the right-hand wheel; the left wheel
// reads them mirrored in steer and toe.
struct AxleSuspension {
  double spring_stiffness = 0.0;  // k_bs [N/m]
  double damping = 0.0;           // c_d [N s/m]
  double damping_scale = 1.0;     // proportional coefficient on c_d
  double arb_scale = 1.0;         // k_atr, proportional coefficient on the ARB table
  double travel_limit = 0.05;     // |dD| bound [m]
  Table1D motion_ratio = Table1D::constant(1.0);  // lambda_s(dD)
  Table2D arb = Table2D::constant(0.0);           // F(mean jounce, D_r - D_l) [N]
  Table2D camber = Table2D::constant(0.0);        // gamma(dD, steer)
  Table1D toe = Table1D::constant(0.0);           // xi(dD)
  Table2D ground_steer = Table2D::constant(0.0);  // delta_d(dD, steer)
};

struct WheelKinematics {
  double camber = 0.0;
  double toe = 0.0;
  double steer = 0.0;  // ground steer plus toe
};

// lambda (k lambda dD + c lambda dDdot), without preload.
double suspension_force(double jounce, double jounce_rate, double k, double c, double motion_ratio);
double suspension_force(double jounce, double jounce_rate, const AxleSuspension& axle);

// Axle anti-roll force from the right and left jounces. The right wheel
// receives -F and the left wheel +F (upward positive).
double antiroll_force(double jounce_right, double jounce_left, const Table2D& table, double scale);

WheelKinematics wheel_kinematics(double jounce, double driver_steer, const AxleSuspension& axle, Side side);

// Stored energy of the spring law k lambda(u)^2 u from 0 to jounce.
double spring_potential(double jounce, const AxleSuspension& axle);
double antiroll_potential(double jounce_right, double jounce_left, const AxleSuspension& axle);

AxleSuspension axle_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json to_json(const AxleSuspension& a);

}  // namespace laptime::suspension
