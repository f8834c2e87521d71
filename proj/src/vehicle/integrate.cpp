#include "laptime/vehicle/integrate.hpp"

#include <cmath>

namespace laptime::vehicle {
namespace {

State axpy(const State& x, double a, const State& k) {
  State r;
  for (int i = 0; i < kNx; ++i) r[i] = x[i] + a * k[i];
  return r;
}

}  // namespace

State rk4_step(const VehicleModel& m, const track::Track* track, const State& x, double t, double h,
               const ControlLaw& law) {
  const State k1 = dynamics(m, x, law(t, x), track);
  const State x2 = axpy(x, 0.5 * h, k1);
  const State k2 = dynamics(m, x2, law(t + 0.5 * h, x2), track);
  const State x3 = axpy(x, 0.5 * h, k2);
  const State k3 = dynamics(m, x3, law(t + 0.5 * h, x3), track);
  const State x4 = axpy(x, h, k3);
  const State k4 = dynamics(m, x4, law(t + h, x4), track);
  State r;
  for (int i = 0; i < kNx; ++i) r[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

Trajectory simulate(const VehicleModel& m, const track::Track* track, const State& x0, double t0, double t1, double h,
                    const ControlLaw& law, int stride) {
  Trajectory tr;
  const long steps = std::lround((t1 - t0) / h);
  State x = x0;
  for (long k = 0; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    if (k % stride == 0 || k == steps) {
      tr.t.push_back(t);
      tr.x.push_back(x);
      tr.u.push_back(law(t, x));
    }
    if (k == steps) break;
    x = rk4_step(m, track, x, t, h, law);
  }
  return tr;
}

}  // namespace laptime::vehicle
