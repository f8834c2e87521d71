#include <doctest.h>

#include <random>

#include "laptime/error.hpp"
#include "laptime/suspension/suspension.hpp"

using namespace laptime::suspension;

TEST_CASE("spring-damper force scales with the motion ratio squared") {
  CHECK(suspension_force(0.01, 0.0, 5e4, 0.0, 1.0) == doctest::Approx(500.0));
  CHECK(suspension_force(0.01, 0.0, 5e4, 0.0, 0.5) == doctest::Approx(125.0));
  CHECK(suspension_force(0.0, 0.2, 0.0, 3000.0, 0.5) == doctest::Approx(150.0));
}

TEST_CASE("anti-roll force from the jounce difference") {
  Table2D t = Table2D::linear_in_y(1e5, 0.1, 0.2);
  CHECK(antiroll_force(0.01, -0.01, t, 1.0) == doctest::Approx(2000.0));
  CHECK(antiroll_force(-0.01, 0.01, t, 1.0) == doctest::Approx(-2000.0));
  CHECK(antiroll_force(0.01, -0.01, t, 0.0) == 0.0);
}

TEST_CASE("wheel steer adds toe to ground steer") {
  AxleSuspension a;
  a.toe = Table1D::constant(0.002);
  a.ground_steer = Table2D({-0.1, 0.1}, {-0.6, 0.6}, {{-0.6, 0.6}, {-0.6, 0.6}});
  WheelKinematics k = wheel_kinematics(0.0, 0.095, a, Side::Right);
  CHECK(k.steer == doctest::Approx(0.097));
  WheelKinematics l = wheel_kinematics(0.0, 0.095, a, Side::Left);
  CHECK(l.steer == doctest::Approx(0.093));
}

TEST_CASE("camber table odd in steer stays odd") {
  AxleSuspension a;
  a.camber = Table2D({-0.1, 0.1}, {-0.5, 0.5}, {{-0.02, 0.02}, {-0.03, 0.03}});
  for (double d : {0.1, 0.3}) {
    CHECK(wheel_kinematics(0.02, -d, a, Side::Right).camber ==
          doctest::Approx(-wheel_kinematics(0.02, d, a, Side::Right).camber));
  }
}

TEST_CASE("bilinear interpolation reproduces planes") {
  std::vector<double> xs{-1.0, -0.2, 0.5, 2.0};
  std::vector<double> ys{-3.0, 0.0, 1.0};
  std::vector<std::vector<double>> v;
  auto plane = [](double x, double y) { return 1.5 + 2.0 * x - 0.7 * y + 0.3 * x * y; };
  for (double x : xs) {
    std::vector<double> row;
    for (double y : ys) row.push_back(plane(x, y));
    v.push_back(row);
  }
  Table2D t(xs, ys, v);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ux(-1.0, 2.0), uy(-3.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double x = ux(rng), y = uy(rng);
    // Bilinear is exact for functions linear in each coordinate.
    CHECK(t(x, y) == doctest::Approx(plane(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("table validation and range handling") {
  CHECK_THROWS_AS(Table1D({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}), laptime::InputError);
  CHECK_THROWS_AS(Table1D({0.0, 1.0}, {1.0}), laptime::InputError);
  CHECK_THROWS_AS(Table2D({0.0, 1.0}, {0.0, 1.0}, {{1.0, 2.0}}), laptime::InputError);
  Table1D clamp({0.0, 1.0}, {2.0, 4.0});
  CHECK(clamp(5.0) == 4.0);
  CHECK(clamp(-5.0) == 2.0);
  Table1D reject({0.0, 1.0}, {2.0, 4.0}, OutOfRange::Reject);
  CHECK_THROWS_AS(reject(1.5), laptime::EvaluationError);
  CHECK(reject(0.25) == doctest::Approx(2.5));
}

TEST_CASE("stored spring energy matches the closed form for a constant ratio") {
  AxleSuspension a;
  a.spring_stiffness = 8e4;
  a.motion_ratio = Table1D::constant(0.8);
  for (double d : {-0.03, 0.0, 0.02}) {
    CHECK(spring_potential(d, a) == doctest::Approx(0.5 * 8e4 * 0.64 * d * d).epsilon(1e-12));
  }
}

TEST_CASE("stored spring energy derivative equals the spring force") {
  AxleSuspension a;
  a.spring_stiffness = 8e4;
  a.motion_ratio = Table1D({-0.05, 0.0, 0.05}, {0.7, 0.9, 1.1});
  for (double d : {-0.04, -0.01, 0.013, 0.045}) {
    double h = 1e-6;
    double num = (spring_potential(d + h, a) - spring_potential(d - h, a)) / (2.0 * h);
    CHECK(num == doctest::Approx(suspension_force(d, 0.0, a)).epsilon(1e-6));
  }
}

TEST_CASE("axle config round-trips through JSON") {
  AxleSuspension a;
  a.spring_stiffness = 1.1e5;
  a.damping = 3000.0;
  a.arb = Table2D::linear_in_y(2e4, 0.1, 0.2);
  AxleSuspension b = axle_from_json(to_json(a), "axle");
  CHECK(b.spring_stiffness == a.spring_stiffness);
  CHECK(b.arb(0.0, 0.05) == doctest::Approx(a.arb(0.0, 0.05)));
  nlohmann::json bad = to_json(a);
  bad["spring_stiffness"] = -1.0;
  CHECK_THROWS_AS(axle_from_json(bad, "axle"), laptime::InputError);
}
