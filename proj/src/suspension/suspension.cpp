#include "laptime/suspension/suspension.hpp"

#include <algorithm>
#include <cmath>

#include "laptime/error.hpp"

namespace laptime::suspension {

double suspension_force(double jounce, double jounce_rate, double k, double c, double motion_ratio) {
  return motion_ratio * (k * motion_ratio * jounce + c * motion_ratio * jounce_rate);
}

double suspension_force(double jounce, double jounce_rate, const AxleSuspension& axle) {
  return suspension_force(jounce, jounce_rate, axle.spring_stiffness, axle.damping * axle.damping_scale,
                          axle.motion_ratio(jounce));
}

double antiroll_force(double jounce_right, double jounce_left, const Table2D& table, double scale) {
  double mean = 0.5 * (jounce_right + jounce_left);
  return scale * table(mean, jounce_right - jounce_left);
}

WheelKinematics wheel_kinematics(double jounce, double driver_steer, const AxleSuspension& axle, Side side) {
  WheelKinematics k;
  if (side == Side::Right) {
    k.camber = axle.camber(jounce, driver_steer);
    k.toe = axle.toe(jounce);
    k.steer = axle.ground_steer(jounce, driver_steer) + k.toe;
  } else {
    k.camber = -axle.camber(jounce, -driver_steer);
    k.toe = -axle.toe(jounce);
    k.steer = -axle.ground_steer(jounce, -driver_steer) + k.toe;
  }
  return k;
}

double spring_potential(double jounce, const AxleSuspension& axle) {
  // Integrand is piecewise cubic between table knots; 3-point Gauss is exact.
  static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double lo = std::min(0.0, jounce);
  double hi = std::max(0.0, jounce);
  std::vector<double> knots{lo};
  for (double x : axle.motion_ratio.x()) {
    if (x > lo && x < hi) knots.push_back(x);
  }
  knots.push_back(hi);
  double s = 0.0;
  for (size_t i = 1; i < knots.size(); ++i) {
    double a = knots[i - 1];
    double b = knots[i];
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    for (int q = 0; q < 3; ++q) {
      double u = mid + half * gx[q];
      double lam = axle.motion_ratio(u);
      s += gw[q] * half * axle.spring_stiffness * lam * lam * u;
    }
  }
  return jounce < 0.0 ? -s : s;
}

double antiroll_potential(double jounce_right, double jounce_left, const AxleSuspension& axle) {
  double mean = 0.5 * (jounce_right + jounce_left);
  return axle.arb_scale * axle.arb.integral_y(mean, jounce_right - jounce_left);
}

AxleSuspension axle_from_json(const nlohmann::json& j, const std::string& what) {
  AxleSuspension a;
  try {
    a.spring_stiffness = j.at("spring_stiffness").get<double>();
    a.damping = j.at("damping").get<double>();
    a.damping_scale = j.value("damping_scale", 1.0);
    a.arb_scale = j.value("arb_scale", 1.0);
    a.travel_limit = j.value("travel_limit", 0.05);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  if (j.contains("motion_ratio")) a.motion_ratio = table1d_from_json(j["motion_ratio"], what + ".motion_ratio");
  if (j.contains("arb")) a.arb = table2d_from_json(j["arb"], what + ".arb");
  if (j.contains("camber")) a.camber = table2d_from_json(j["camber"], what + ".camber");
  if (j.contains("toe")) a.toe = table1d_from_json(j["toe"], what + ".toe");
  if (j.contains("ground_steer")) a.ground_steer = table2d_from_json(j["ground_steer"], what + ".ground_steer");
  if (!(a.spring_stiffness > 0.0)) throw InputError(what + ": spring_stiffness must be positive");
  if (a.damping < 0.0 || a.damping_scale < 0.0 || a.arb_scale < 0.0) {
    throw InputError(what + ": damping and scale factors must be non-negative");
  }
  if (!(a.travel_limit > 0.0)) throw InputError(what + ": travel_limit must be positive");
  return a;
}

nlohmann::json to_json(const AxleSuspension& a) {
  return {{"spring_stiffness", a.spring_stiffness},
          {"damping", a.damping},
          {"damping_scale", a.damping_scale},
          {"arb_scale", a.arb_scale},
          {"travel_limit", a.travel_limit},
          {"motion_ratio", to_json(a.motion_ratio)},
          {"arb", to_json(a.arb)},
          {"camber", to_json(a.camber)},
          {"toe", to_json(a.toe)},
          {"ground_steer", to_json(a.ground_steer)}};
}

}  // namespace laptime::suspension
