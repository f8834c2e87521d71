#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "../oracles/bicycle.hpp"
#include "../test_support.hpp"
#include "laptime/cases/artifacts.hpp"
#include "laptime/cases/maneuver.hpp"
#include "laptime/cases/runner.hpp"
#include "laptime/error.hpp"

using namespace laptime;
using namespace laptime::cases;

namespace {

namespace fs = std::filesystem;

CaseConfig oval_config(CaseKind kind, int nodes) {
  CaseConfig c;
  c.kind = kind;
  c.vehicle_path = test_support::data("vehicles/f3_4iwd.json");
  c.track_path = test_support::data("tracks/oval.csv");
  c.nodes = nodes;
  c.solver = default_lap_solver_options();
  return c;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("laptime_test_" + name);
  fs::remove_all(p);
  return p;
}

size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  return static_cast<size_t>(std::count(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>(), '\n'));
}

// Yaw-rate amplitude over the last `periods` full periods of a sine dwell.
double sine_dwell_gain(const vehicle::VehicleModel& m, double f, double speed, double steer) {
  ManeuverSettings s;
  s.speed = speed;
  s.steer = steer;
  s.t_start = 0.0;
  s.f_start = f;
  s.f_end = f;
  const double periods = 4.0;
  s.duration = std::max(3.0, 4.0 / f) + periods / f;
  s.stride = 1;
  s.step = 1e-3;
  const ManeuverResult r = run_maneuver(m, Maneuver::SweptSine, s);
  REQUIRE(r.ok);
  const double t0 = s.duration - periods / f;
  double hi = -1e9, lo = 1e9;
  for (size_t k = 0; k < r.t.size(); ++k) {
    if (r.t[k] < t0) continue;
    hi = std::max(hi, r.yaw_rate[k]);
    lo = std::min(lo, r.yaw_rate[k]);
  }
  return 0.5 * (hi - lo) / steer;
}

}  // namespace

TEST_CASE("grip metrics") {
  SUBCASE("single node, one tire at (3, 4)") {
    std::vector<std::array<double, 4>> fx{{3, 0, 0, 0}}, fy{{4, 0, 0, 0}};
    const auto g = grip_metrics(fx, fy);
    CHECK(g.per_tire[0] == doctest::Approx(5.0));
    CHECK(g.per_tire[1] == 0.0);
    CHECK(g.total == doctest::Approx(std::sqrt(25.0 / 4.0)));
  }
  SUBCASE("all zero") {
    std::vector<std::array<double, 4>> z(3, std::array<double, 4>{});
    const auto g = grip_metrics(z, z);
    for (double v : g.per_tire) CHECK(v == 0.0);
    CHECK(g.total == 0.0);
  }
  SUBCASE("two nodes (5, 0) and (0, 5)") {
    std::vector<std::array<double, 4>> fx{{5, 0, 0, 0}, {0, 0, 0, 0}}, fy{{0, 0, 0, 0}, {5, 0, 0, 0}};
    CHECK(grip_metrics(fx, fy).per_tire[0] == doctest::Approx(5.0));
  }
  SUBCASE("length mismatch") {
    std::vector<std::array<double, 4>> a(2), b(3);
    CHECK_THROWS_AS(grip_metrics(a, b), InputError);
  }
}

TEST_CASE("total grip does not depend on the tire labels") {
  std::vector<std::array<double, 4>> fx{{100, -250, 3000, 40}, {-7, 1200, 0, 800}};
  std::vector<std::array<double, 4>> fy{{-900, 15, 60, 2100}, {330, -40, 1000, 5}};
  const double ref = grip_metrics(fx, fy).total;
  std::array<int, 4> perm{0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto px = fx, py = fy;
    for (size_t k = 0; k < fx.size(); ++k) {
      for (int w = 0; w < 4; ++w) {
        px[k][w] = fx[k][perm[w]];
        py[k][w] = fy[k][perm[w]];
      }
    }
    CHECK(grip_metrics(px, py).total == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("case config") {
  CaseConfig c = oval_config(CaseKind::OWD, 50);
  CHECK_NOTHROW(validate(c));

  SUBCASE("zero-length design vector is rejected") {
    c.design_lower = std::vector<double>{};
    CHECK_THROWS_AS(validate(c), InputError);
  }
  SUBCASE("design vector of the wrong case is rejected") {
    c.design_upper = std::vector<double>{1, 2, 3, 4};
    CHECK_THROWS_AS(validate(c), InputError);
  }
  SUBCASE("crossed bounds are rejected") {
    c.design_lower = std::vector<double>{9000, 2, 5};
    c.design_upper = std::vector<double>{8000, 3, 6};
    CHECK_THROWS_AS(validate(c), InputError);
  }
  SUBCASE("missing files are rejected") {
    c.track_path = "/no/such/track.csv";
    CHECK_THROWS_AS(validate(c), InputError);
  }
  SUBCASE("unknown case name") { CHECK_THROWS_AS(case_kind_from_string("XYZ"), InputError); }
  SUBCASE("case names parse in either spelling") {
    CHECK(case_kind_from_string("sweep_inertia") == CaseKind::SweepInertia);
    CHECK(case_kind_from_string("SIM-STEP") == CaseKind::SimStep);
  }
  SUBCASE("JSON round trip") {
    c.design_lower = std::vector<double>{4000, 2, 5};
    c.boundary = transcription::Boundary::StandingStart;
    c.maneuver.speed = 12.5;
    const auto j = to_json(c);
    const CaseConfig back = case_config_from_json(j, c.base_dir);
    CHECK(to_json(back) == j);
  }
  SUBCASE("shipped sample config loads") {
    const CaseConfig r = load_case_config(test_support::data("cases/owd_oval.json"));
    CHECK(r.kind == CaseKind::OWD);
    CHECK(r.nodes == 200);
    CHECK_NOTHROW(validate(r));
  }
  SUBCASE("relative paths resolve against the config directory") {
    const auto j = nlohmann::json{{"case", "OWD"}, {"vehicle", "vehicles/f3_4iwd.json"}, {"track", "tracks/oval.csv"}};
    const CaseConfig r = case_config_from_json(j, LAPTIME_DATA_DIR);
    CHECK_NOTHROW(validate(r));
  }
}

TEST_CASE("mass redistribution keeps the total") {
  auto p = test_support::vehicle_params();
  const double before = p.m_b + p.m_u[0] + p.m_u[1] + p.m_u[2] + p.m_u[3];
  redistribute_mass(p, 2.5);
  CHECK(p.m_b + p.m_u[0] + p.m_u[1] + p.m_u[2] + p.m_u[3] == doctest::Approx(before));
  CHECK(p.m_u[0] == doctest::Approx(test_support::vehicle_params().m_u[0] + 2.5));
  CHECK_THROWS_AS(redistribute_mass(p, -20.0), InputError);
}

TEST_CASE("zero steering keeps the yaw rate at zero") {
  ManeuverSettings s;
  s.steer = 0.0;
  s.duration = 1.0;
  const auto r = run_maneuver(test_support::model(), Maneuver::StepSteer, s);
  REQUIRE(r.ok);
  for (double v : r.yaw_rate) CHECK(v == 0.0);
}

TEST_CASE("low-speed step steer settles at the kinematic yaw rate") {
  const auto m = test_support::model();
  ManeuverSettings s;
  s.speed = 8.0;
  s.steer = 0.02;
  s.duration = 3.0;
  const auto r = run_maneuver(m, Maneuver::StepSteer, s);
  REQUIRE(r.ok);
  const auto bk = oracle::bicycle_of(m, s.speed);
  const double expected = bk.kinematic_gain() * s.steer;
  CHECK(std::abs(r.ay.back()) < 0.2 * 9.81);
  CHECK(r.yaw_rate.back() == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("swept sine: yaw gain falls with frequency above the yaw resonance") {
  const auto m = test_support::model();
  const double v = 20.0, steer = 0.01;
  const auto bk = oracle::bicycle_of(m, v);
  // Frequency of the oracle's gain peak (zero when the response is monotone).
  double f_peak = 0.0, g_peak = bk.yaw_gain_at(0.0);
  for (double f = 0.01; f < 5.0; f += 0.01) {
    if (bk.yaw_gain_at(f) > g_peak) {
      g_peak = bk.yaw_gain_at(f);
      f_peak = f;
    }
  }
  const double f0 = std::max(f_peak, bk.natural_frequency_hz());
  double prev = 1e9;
  for (double k : {1.5, 2.0, 3.0, 4.0}) {
    const double g = sine_dwell_gain(m, k * f0, v, steer);
    CAPTURE(k);
    CHECK(g < prev);
    CHECK(bk.yaw_gain_at(k * f0) < bk.yaw_gain_at((k - 0.5) * f0));
    prev = g;
  }

  ManeuverSettings s;
  s.f_start = 0.5;
  s.f_end = 2.0;
  s.duration = 2.0;
  s.t_start = 0.0;
  CHECK(steer_input(Maneuver::SweptSine, s, 0.0) == 0.0);
  CHECK(std::abs(steer_input(Maneuver::SweptSine, s, 0.5)) <= s.steer);
}

TEST_CASE("maneuver config rejects bad settings") {
  CaseConfig c;
  c.kind = CaseKind::SimSwept;
  c.vehicle_path = test_support::data("vehicles/f3_4iwd.json");
  c.maneuver.f_start = 2.0;
  c.maneuver.f_end = 1.0;
  CHECK_THROWS_AS(validate(c), InputError);
  c.maneuver.f_end = 3.0;
  c.maneuver.step = 0.0;
  CHECK_THROWS_AS(validate(c), InputError);
}

TEST_CASE("maneuver artifact") {
  ManeuverSettings s;
  s.duration = 0.1;
  s.stride = 10;
  const auto r = run_maneuver(test_support::model(), Maneuver::StepSteer, s);
  const auto dir = scratch("maneuver");
  const auto files = emit_maneuver(r, dir.string());
  REQUIRE(files.size() == 1);
  CHECK(count_lines(files[0]) == r.t.size() + 1);
  fs::remove_all(dir);
}

TEST_CASE("small OWD case: artifacts, summary round trip and determinism") {
  CaseConfig c = oval_config(CaseKind::OWD, 30);
  const CaseReport r = run_case(c);
  REQUIRE(r.converged());
  CHECK(r.constraint_violation <= 1e-7);
  CHECK(r.envelope_violation <= 1e-7);
  for (const auto& d : r.design) {
    CHECK(d.value >= d.lower);
    CHECK(d.value <= d.upper);
  }
  for (double g : r.grip.per_tire) CHECK(g >= 0.0);

  const auto dir = scratch("owd");
  const auto inputs = load_inputs(c);
  emit_artifacts(r, inputs.track, dir.string());
  CHECK(count_lines(dir / "trajectory.csv") == static_cast<size_t>(c.nodes) + 1);
  for (const char* f : {"summary.json", "solution.json", "solver_log.csv", "racing_line.csv", "speed.csv",
                        "steering.csv"}) {
    CHECK(fs::exists(dir / f));
  }

  const CaseReport back = load_summary((dir / "summary.json").string());
  CHECK(summary_json(back) == summary_json(r));

  const CaseReport again = run_case(c);
  auto a = summary_json(r), b = summary_json(again);
  a.erase("timing");
  b.erase("timing");
  CHECK(a.dump() == b.dump());
  fs::remove_all(dir);
}

TEST_CASE("single-point sweep equals the frozen-design case") {
  CaseConfig c = oval_config(CaseKind::SweepInertia, 30);
  const double j_u = test_support::vehicle_params().j_u[0];
  c.sweep.values = {j_u};
  const auto sweep = run_sweep(c);
  REQUIRE(sweep.size() == 1);
  REQUIRE(sweep[0].converged());

  RunOptions opt;
  opt.frozen_design = vehicle::baseline(test_support::vehicle_params());
  const CaseReport direct = run_case(c, opt);
  REQUIRE(direct.converged());
  CHECK(sweep[0].tf == doctest::Approx(direct.tf).epsilon(1e-12));
  CHECK(sweep[0].design.empty());
}

TEST_CASE("a failing sweep point is recorded and the sweep continues") {
  CaseConfig c = oval_config(CaseKind::SweepMass, 30);
  c.sweep.values = {-100.0, 0.0};
  const auto sweep = run_sweep(c);
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0].status == nlp::Status::Error);
  CHECK(sweep[1].converged());
}

TEST_CASE("racing line from (s, n) matches the integrated position on the oval") {
  CaseConfig c = oval_config(CaseKind::OWD, 200);
  const auto in = load_inputs(c);
  RunOptions opt;
  opt.inputs = &in;
  const CaseReport r = run_case(c, opt);
  REQUIRE(r.converged());
  const RacingLine l = racing_line(r, in.track);
  CHECK(l.s.size() == 200);
  CHECK(l.max_gap() <= 0.1);
}
