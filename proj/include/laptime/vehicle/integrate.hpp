#pragma once

#include <functional>
#include <vector>

#include "laptime/vehicle/dynamics.hpp"

namespace laptime::vehicle {

using ControlLaw = std::function<Control(double t, const State& x)>;

// One classical RK4 step with the control held by the law at each stage.
State rk4_step(const VehicleModel& m, const track::Track* track, const State& x, double t, double h,
               const ControlLaw& law);

struct Trajectory {
  std::vector<double> t;
  std::vector<State> x;
  std::vector<Control> u;
};

// Fixed-step RK4 from t0 to t1, storing every `stride`-th state.
Trajectory simulate(const VehicleModel& m, const track::Track* track, const State& x0, double t0, double t1, double h,
                    const ControlLaw& law, int stride = 1);

}  // namespace laptime::vehicle
