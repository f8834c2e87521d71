#include "laptime/cases/maneuver.hpp"

#include <cmath>
#include <numbers>

#include "laptime/cases/runner.hpp"
#include "laptime/error.hpp"
#include "laptime/vehicle/dynamics.hpp"
#include "laptime/vehicle/integrate.hpp"

namespace laptime::cases {

using namespace vehicle;

Maneuver maneuver_from_string(const std::string& s) {
  if (s == "step-steer" || s == "step" || s == "SIM-STEP") return Maneuver::StepSteer;
  if (s == "swept-sine" || s == "swept" || s == "SIM-SWEPT") return Maneuver::SweptSine;
  throw InputError("unknown maneuver " + s + " (step-steer|swept-sine)");
}

std::string to_string(Maneuver m) { return m == Maneuver::StepSteer ? "step-steer" : "swept-sine"; }

double steer_input(Maneuver kind, const ManeuverSettings& s, double t) {
  if (t < s.t_start) return 0.0;
  const double tau = t - s.t_start;
  if (kind == Maneuver::StepSteer) return s.steer;
  const double span = std::max(s.duration - s.t_start, 1e-9);
  const double phase = 2.0 * std::numbers::pi * (s.f_start * tau + 0.5 * (s.f_end - s.f_start) * tau * tau / span);
  return s.steer * std::sin(phase);
}

State rolling_state(const VehicleModel& m, double v) {
  State x = static_state(m);
  x[ix::kVx] = v;
  for (int w = 0; w < 4; ++w) x[ix::kSpinRate + w] = v / x[ix::kWheelZ + w];
  return x;
}

ManeuverResult run_maneuver(const VehicleModel& m, Maneuver kind, const ManeuverSettings& s) {
  ManeuverResult r;
  auto law = [&](double t, const State& x) {
    Control u{};
    u[iu::kSteer] = steer_input(kind, s, t);
    const double v = std::hypot(x[ix::kVx], x[ix::kVy]);
    const double torque = s.gain * (s.speed - v) / 4.0;
    for (int w = 0; w < 4; ++w) u[iu::kTorque + w] = torque;
    return u;
  };
  auto record = [&](double t, const State& x) {
    const Control u = law(t, x);
    const State xd = dynamics(m, x, u);
    const double psi = x[ix::kYaw];
    r.t.push_back(t);
    r.steer.push_back(u[iu::kSteer]);
    r.speed.push_back(std::hypot(x[ix::kVx], x[ix::kVy]));
    r.yaw_rate.push_back(x[ix::kYawRate]);
    r.ay.push_back(-std::sin(psi) * xd[ix::kVx] + std::cos(psi) * xd[ix::kVy]);
    r.roll.push_back(x[ix::kRoll]);
  };

  State x = rolling_state(m, s.speed);
  const long steps = std::lround(s.duration / s.step);
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * s.step;
    try {
      if (k % s.stride == 0 || k == steps) record(t, x);
      if (k == steps) break;
      x = rk4_step(m, nullptr, x, t, s.step, law);
    } catch (const EvaluationError& e) {
      r.ok = false;
      r.failed_at = t;
      r.message = e.what();
      return r;
    }
    for (double v : x) {
      if (!std::isfinite(v)) {
        r.ok = false;
        r.failed_at = t + s.step;
        r.message = "state is no longer finite";
        return r;
      }
    }
  }
  return r;
}

ManeuverResult run_maneuver(const CaseConfig& c) {
  if (c.kind != CaseKind::SimStep && c.kind != CaseKind::SimSwept) {
    throw InputError(to_string(c.kind) + " is not a maneuver");
  }
  validate(c);
  CaseConfig noload = c;
  noload.track_path.clear();
  const Inputs in = load_inputs(noload);
  ModelOptions mo;
  mo.lock_suspension = c.maneuver.lock_suspension;
  const Design d = c.design_initial ? sweep_design(c, in.params) : baseline(in.params);
  const VehicleModel m = make_model(in.params, in.tire, d, mo);
  return run_maneuver(m, c.kind == CaseKind::SimStep ? Maneuver::StepSteer : Maneuver::SweptSine, c.maneuver);
}

}  // namespace laptime::cases
