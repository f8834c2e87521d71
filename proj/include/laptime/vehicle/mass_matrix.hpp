#pragma once

#include <array>

#include <Eigen/Dense>

namespace laptime::vehicle {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Inertial data entering the body mass matrix.
struct BodyInertia {
  double m_b = 0.0;
  double jxx = 0.0, jyy = 0.0, jzz = 0.0;
  std::array<double, 4> m_u{};
  std::array<double, 4> x{}, y{};  // wheel positions in the body frame
};

// Configuration the mass matrix depends on: body coordinates
// (X, Y, Z, roll, pitch, yaw) and the four absolute wheel-centre heights.
struct MassConfig {
  std::array<double, 6> q{};
  std::array<double, 4> z_u{};
};

// Wheel-centre height relative to the body frame: z_u - (y roll - x pitch + Z).
double relative_wheel_height(const BodyInertia& b, const MassConfig& c, int wheel);

Mat6 body_mass_matrix(const BodyInertia& b, const MassConfig& c);

// dM/dq_k for k in 0..9 over (X, Y, Z, roll, pitch, yaw, z_u1..z_u4).
Mat6 body_mass_partial(const BodyInertia& b, const MassConfig& c, int k);

// dM/dt for coordinate rates (6 body rates, 4 wheel vertical rates).
Mat6 body_mass_rate(const BodyInertia& b, const MassConfig& c, const std::array<double, 6>& qd,
                    const std::array<double, 4>& zd);

// Velocity-dependent terms of the Lagrange equations:
//   body:   dM/dt qd - 1/2 d/dq (qd' M qd)
//   wheels: -1/2 d/dz_u (qd' M qd)
struct Coupling {
  Vec6 body = Vec6::Zero();
  std::array<double, 4> wheel{};
};
Coupling velocity_coupling(const BodyInertia& b, const MassConfig& c, const std::array<double, 6>& qd,
                           const std::array<double, 4>& zd);

}  // namespace laptime::vehicle
