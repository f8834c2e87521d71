#include "laptime/vehicle/mass_matrix.hpp"

#include <cmath>

namespace laptime::vehicle {
namespace {

struct Sums {
  double a = 0.0;   // sum m z
  double b = 0.0;   // sum m z^2
  double ax = 0.0;  // sum m z x
  double ay = 0.0;  // sum m z y
};

// Part of M that is linear in the wheel-height sums.
void add_height_terms(Mat6& m, double cpsi, double spsi, const Sums& s) {
  m(0, 3) += spsi * s.a;
  m(1, 3) += -cpsi * s.a;
  m(0, 4) += cpsi * s.a;
  m(1, 4) += spsi * s.a;
  m(3, 3) += s.b;
  m(4, 4) += s.b;
  m(3, 5) += -s.ax;
  m(4, 5) += -s.ay;
  m(3, 0) = m(0, 3);
  m(3, 1) = m(1, 3);
  m(4, 0) = m(0, 4);
  m(4, 1) = m(1, 4);
  m(5, 3) = m(3, 5);
  m(5, 4) = m(4, 5);
}

// dM/d(z_i) for the relative height of wheel i.
Mat6 height_partial(const BodyInertia& b, double cpsi, double spsi, double zi, int i) {
  Mat6 m = Mat6::Zero();
  Sums d;
  d.a = b.m_u[i];
  d.b = 2.0 * b.m_u[i] * zi;
  d.ax = b.m_u[i] * b.x[i];
  d.ay = b.m_u[i] * b.y[i];
  add_height_terms(m, cpsi, spsi, d);
  return m;
}

Mat6 yaw_partial(const BodyInertia& b, double cpsi, double spsi, const Sums& s) {
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < 4; ++i) {
    sx += b.m_u[i] * b.x[i];
    sy += b.m_u[i] * b.y[i];
  }
  Mat6 m = Mat6::Zero();
  m(0, 3) = cpsi * s.a;
  m(1, 3) = spsi * s.a;
  m(0, 4) = -spsi * s.a;
  m(1, 4) = cpsi * s.a;
  m(0, 5) = spsi * sy - cpsi * sx;
  m(1, 5) = -spsi * sx - cpsi * sy;
  for (int r = 0; r < 2; ++r) {
    for (int c = 3; c < 6; ++c) m(c, r) = m(r, c);
  }
  return m;
}

Sums height_sums(const BodyInertia& b, const MassConfig& c) {
  Sums s;
  for (int i = 0; i < 4; ++i) {
    double z = relative_wheel_height(b, c, i);
    double mz = b.m_u[i] * z;
    s.a += mz;
    s.b += mz * z;
    s.ax += mz * b.x[i];
    s.ay += mz * b.y[i];
  }
  return s;
}

// dz_i/dq_k for the 10 mass-matrix coordinates.
double height_jacobian(const BodyInertia& b, int i, int k) {
  switch (k) {
    case 2: return -1.0;
    case 3: return -b.y[i];
    case 4: return b.x[i];
    default: return k == 6 + i ? 1.0 : 0.0;
  }
}

}  // namespace

double relative_wheel_height(const BodyInertia& b, const MassConfig& c, int wheel) {
  return c.z_u[wheel] - (b.y[wheel] * c.q[3] - b.x[wheel] * c.q[4] + c.q[2]);
}

Mat6 body_mass_matrix(const BodyInertia& b, const MassConfig& c) {
  const double psi = c.q[5];
  const double cp = std::cos(psi);
  const double sp = std::sin(psi);
  double mu = 0.0, sx = 0.0, sy = 0.0, sr2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    mu += b.m_u[i];
    sx += b.m_u[i] * b.x[i];
    sy += b.m_u[i] * b.y[i];
    sr2 += b.m_u[i] * (b.x[i] * b.x[i] + b.y[i] * b.y[i]);
  }
  Mat6 m = Mat6::Zero();
  m(0, 0) = b.m_b + mu;
  m(1, 1) = b.m_b + mu;
  m(2, 2) = b.m_b;
  m(3, 3) = b.jxx;
  m(4, 4) = b.jyy;
  m(5, 5) = b.jzz + sr2;
  m(0, 5) = -cp * sy - sp * sx;
  m(1, 5) = cp * sx - sp * sy;
  m(5, 0) = m(0, 5);
  m(5, 1) = m(1, 5);
  add_height_terms(m, cp, sp, height_sums(b, c));
  return m;
}

Mat6 body_mass_partial(const BodyInertia& b, const MassConfig& c, int k) {
  const double cp = std::cos(c.q[5]);
  const double sp = std::sin(c.q[5]);
  if (k == 5) return yaw_partial(b, cp, sp, height_sums(b, c));
  Mat6 m = Mat6::Zero();
  for (int i = 0; i < 4; ++i) {
    double dz = height_jacobian(b, i, k);
    if (dz != 0.0) m += dz * height_partial(b, cp, sp, relative_wheel_height(b, c, i), i);
  }
  return m;
}

Mat6 body_mass_rate(const BodyInertia& b, const MassConfig& c, const std::array<double, 6>& qd,
                    const std::array<double, 4>& zd) {
  const double cp = std::cos(c.q[5]);
  const double sp = std::sin(c.q[5]);
  Mat6 m = qd[5] * yaw_partial(b, cp, sp, height_sums(b, c));
  for (int i = 0; i < 4; ++i) {
    double zi_dot = zd[i] - (b.y[i] * qd[3] - b.x[i] * qd[4] + qd[2]);
    m += zi_dot * height_partial(b, cp, sp, relative_wheel_height(b, c, i), i);
  }
  return m;
}

Coupling velocity_coupling(const BodyInertia& b, const MassConfig& c, const std::array<double, 6>& qd,
                           const std::array<double, 4>& zd) {
  const double cp = std::cos(c.q[5]);
  const double sp = std::sin(c.q[5]);
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = qd[i];

  Mat6 myaw = yaw_partial(b, cp, sp, height_sums(b, c));
  Mat6 mdot = qd[5] * myaw;
  std::array<double, 4> quad{};
  for (int i = 0; i < 4; ++i) {
    Mat6 mz = height_partial(b, cp, sp, relative_wheel_height(b, c, i), i);
    double zi_dot = zd[i] - (b.y[i] * qd[3] - b.x[i] * qd[4] + qd[2]);
    mdot += zi_dot * mz;
    quad[i] = v.dot(mz * v);
  }

  Coupling out;
  out.body = mdot * v;
  out.body[5] -= 0.5 * v.dot(myaw * v);
  for (int k = 2; k <= 4; ++k) {
    double g = 0.0;
    for (int i = 0; i < 4; ++i) g += height_jacobian(b, i, k) * quad[i];
    out.body[k] -= 0.5 * g;
  }
  for (int i = 0; i < 4; ++i) out.wheel[i] = -0.5 * quad[i];
  return out;
}

}  // namespace laptime::vehicle
