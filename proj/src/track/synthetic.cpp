#include <cmath>
#include <numbers>

#include "laptime/error.hpp"
#include "laptime/track/track.hpp"

namespace laptime::track {
namespace {

constexpr double kPi = std::numbers::pi;

// Integrates a curvature profile C(s) from the origin heading along +X and
// emits points roughly every `every` metres.
template <class F>
RawPoints integrate_profile(F curvature, double length, double width, double every = 1.0) {
  RawPoints p;
  const double h = 0.01;
  const int steps = static_cast<int>(std::ceil(length / h));
  const double dh = length / steps;
  const int stride = std::max(1, static_cast<int>(std::lround(every / dh)));
  double x = 0.0, y = 0.0, th = 0.0;
  for (int k = 0; k <= steps; ++k) {
    if (k % stride == 0 || k == steps) {
      p.x.push_back(x);
      p.y.push_back(y);
      p.w.push_back(width);
    }
    if (k == steps) break;
    double s = k * dh;
    // Midpoint rule on heading.
    double thm = th + 0.5 * dh * curvature(s + 0.25 * dh);
    double th1 = th + dh * curvature(s + 0.5 * dh);
    x += dh * std::cos(thm);
    y += dh * std::sin(thm);
    th = th1;
  }
  return p;
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

// Curvature of a constant-radius turn entered and left through smoothstep
// ramps, so C(s) has a continuous slope. Each ramp turns by c * ramp / 2.
double turn_profile(double s, double ramp, double arc, double c) {
  if (s < 0.0) return 0.0;
  if (s < ramp) return c * smoothstep(s / ramp);
  if (s < ramp + arc) return c;
  if (s < 2.0 * ramp + arc) return c * smoothstep((2.0 * ramp + arc - s) / ramp);
  return 0.0;
}

}  // namespace

RawPoints synth_oval(double length, double radius, double transition, double width) {
  const double arc = kPi * radius - transition;
  if (arc <= 0.0) throw InputError("oval: transition too long for the radius");
  const double turn_len = arc + 2.0 * transition;
  const double straight = 0.5 * (length - 2.0 * turn_len);
  if (straight <= 0.0) throw InputError("oval: length too short for two turns");
  const double c = 1.0 / radius;

  // First half: half straight, turn, half straight. The second half is the
  // first rotated by pi, which closes the loop exactly.
  const double half = straight + turn_len;
  auto profile = [&](double s) { return turn_profile(s - 0.5 * straight, transition, arc, c); };
  RawPoints a = integrate_profile(profile, half, width);
  RawPoints p;
  const double ex = a.x.back();
  const double ey = a.y.back();
  for (size_t i = 0; i + 1 < a.x.size(); ++i) {
    p.x.push_back(a.x[i]);
    p.y.push_back(a.y[i]);
    p.w.push_back(width);
  }
  for (size_t i = 0; i + 1 < a.x.size(); ++i) {
    p.x.push_back(ex - a.x[i]);
    p.y.push_back(ey - a.y[i]);
    p.w.push_back(width);
  }
  p.closed = true;
  return p;
}

RawPoints synth_mini_circuit(double length, double width) {
  const int n = 4000;
  std::vector<double> x(n), y(n);
  double perim = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * kPi * i / n;
    double r = 1.0 + 0.25 * std::cos(2.0 * t) + 0.12 * std::sin(3.0 * t) + 0.08 * std::cos(5.0 * t + 0.5);
    x[i] = r * std::cos(t);
    y[i] = r * std::sin(t);
    if (i > 0) perim += std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  }
  perim += std::hypot(x[0] - x[n - 1], y[0] - y[n - 1]);
  const double k = length / perim;
  RawPoints p;
  for (int i = 0; i < n; ++i) {
    p.x.push_back(k * x[i]);
    p.y.push_back(k * y[i]);
    p.w.push_back(width);
  }
  p.closed = true;
  return p;
}

RawPoints synth_s_curve(double width) {
  const double lead = 100.0, ramp = 15.0, radius = 60.0;
  const double arc = radius * kPi / 3.0 - ramp;
  const double turn = arc + 2.0 * ramp;
  const double total = 2.0 * lead + 2.0 * turn;
  auto profile = [&](double s) {
    return turn_profile(s - lead, ramp, arc, 1.0 / radius) - turn_profile(s - lead - turn, ramp, arc, 1.0 / radius);
  };
  RawPoints p = integrate_profile(profile, total, width);
  p.closed = false;
  return p;
}

RawPoints synth_straight(double length, double width) {
  RawPoints p;
  const int n = std::max(3, static_cast<int>(std::ceil(length)));
  for (int i = 0; i <= n; ++i) {
    p.x.push_back(length * i / n);
    p.y.push_back(0.0);
    p.w.push_back(width);
  }
  p.closed = false;
  return p;
}

RawPoints synth_circle(double radius, double step_deg) {
  RawPoints p;
  const int n = static_cast<int>(std::lround(360.0 / step_deg));
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * kPi * i / n;
    p.x.push_back(radius * std::cos(t));
    p.y.push_back(radius * std::sin(t));
    p.w.push_back(std::min(6.0, 0.5 * radius));
  }
  p.closed = true;
  return p;
}

}  // namespace laptime::track
