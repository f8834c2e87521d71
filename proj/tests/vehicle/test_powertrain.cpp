#include <doctest.h>

#include "../test_support.hpp"
#include "laptime/vehicle/design.hpp"
#include "laptime/vehicle/powertrain.hpp"

using namespace laptime::vehicle;

TEST_CASE("motor envelope") {
  CHECK(motor_torque_limit(3000.0, 7.86, 41.25, 6195.0) == doctest::Approx(9550.0 * 7.86 * 41.25 / 6195.0));
  CHECK(motor_torque_limit(6195.0, 7.86, 41.25, 6195.0) == doctest::Approx(499.8).epsilon(1e-3));
  // Continuous at the base speed, power-limited above it.
  CHECK(motor_torque_limit(6195.0, 7.86, 41.25, 6195.0) == motor_torque_limit(6195.0 - 1e-9, 7.86, 41.25, 6195.0));
  CHECK(motor_torque_limit(12390.0, 7.86, 41.25, 6195.0) ==
        doctest::Approx(0.5 * motor_torque_limit(0.0, 7.86, 41.25, 6195.0)));
}

TEST_CASE("effective spin inertia") { CHECK(effective_spin_inertia(0.5, 0.05, 8.0) == doctest::Approx(3.7)); }

TEST_CASE("powertrain mass reproduces the reference units") {
  const auto& p = test_support::vehicle_params();
  auto m = powertrain_mass(41.25, 6195.0, 7.86, p.powertrain);
  CHECK(4.0 * m.total() == doctest::Approx(46.55));
  // Heavier gearbox for a larger ratio, lighter motor for a faster one.
  CHECK(powertrain_mass(41.25, 6195.0, 9.0, p.powertrain).gearbox > m.gearbox);
  CHECK(powertrain_mass(41.25, 9000.0, 7.86, p.powertrain).motor < m.motor);
}

TEST_CASE("baseline model keeps the configured sprung mass") {
  auto m = test_support::model();
  CHECK(m.inertia.m_b == doctest::Approx(490.0));
  for (int w = 0; w < 4; ++w) CHECK(m.rest.z_u[w] < m.tire.unloaded_radius());
}

TEST_CASE("in-wheel mounting moves powertrain mass to the corners") {
  auto p = test_support::vehicle_params();
  p.powertrain.mounting = Mounting::InWheel;
  p.powertrain.in_wheel_extra_mass = 2.0;
  auto m = make_model(p, test_support::tire(), baseline(p));
  auto ref = test_support::model();
  CHECK(m.total_mass() == doctest::Approx(ref.total_mass()));
  CHECK(m.inertia.m_u[0] > ref.inertia.m_u[0] + 2.0);
}

TEST_CASE("design vectors decode and validate") {
  const auto& p = test_support::vehicle_params();
  for (CaseId id : {CaseId::OWD, CaseId::COG, CaseId::DMT, CaseId::ATR, CaseId::ALL}) {
    DesignVector v = baseline_design(id, p);
    CHECK(v.values.size() == design_names(id).size());
    Design d = decode(v, p);
    CHECK(d.motors[2].power_kw == doctest::Approx(p.powertrain.p_max_kw / 4.0));
    validate(v, default_design_space(id, p));
  }
  CHECK(design_names(CaseId::ALL).size() == 14);
  DesignVector bad{CaseId::OWD, {6000.0, 4.0}};
  CHECK_THROWS(decode(bad, p));
  DesignVector oob{CaseId::OWD, {100.0, 4.0, 8.0}};
  CHECK_THROWS(validate(oob, default_design_space(CaseId::OWD, p)));
}
