#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "laptime/error.hpp"
#include "laptime/track/track.hpp"

using namespace laptime::track;

TEST_CASE("circle curvature from 1 degree samples") {
  RawPoints p = synth_circle(50.0, 1.0);
  auto c = curvature_from_points(p.x, p.y, true);
  for (double v : c) CHECK(std::abs(v - 0.02) < 1e-5);
}

TEST_CASE("circle curvature error drops by about four when the spacing halves") {
  auto err = [](double step) {
    RawPoints p = synth_circle(50.0, step);
    auto c = curvature_from_points(p.x, p.y, true);
    double e = 0.0;
    for (double v : c) e = std::max(e, std::abs(v - 0.02));
    return e;
  };
  double ratio = err(2.0) / err(1.0);
  CHECK(ratio >= 3.5);
}

TEST_CASE("sine crest curvature") {
  std::vector<double> x, y;
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    double t = -1.0 + 2.0 * i / (n - 1) + std::numbers::pi / 2.0;
    x.push_back(t);
    y.push_back(std::sin(t));
  }
  auto c = curvature_from_points(x, y, false);
  CHECK(std::abs(std::abs(c[n / 2]) - 1.0) < 1e-4);
}

TEST_CASE("path rates") {
  // Aligned with the centreline at n C = 0.5 the arc length runs twice as fast.
  PathRates r = path_rates(10.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.1);
  CHECK(r.sdot == doctest::Approx(20.0));
  CHECK(r.ndot == doctest::Approx(0.0));
  CHECK(r.chidot == doctest::Approx(-2.0));
  CHECK_THROWS_AS(path_rates(10.0, 0.0, 0.0, 0.0, 10.0, 0.0, 0.1), laptime::EvaluationError);
  // Heading offset chi rotates the velocity into the lateral rate.
  PathRates q = path_rates(std::cos(0.3) * 5.0, std::sin(0.3) * 5.0, 0.3, 0.0, 0.0, 0.3, 0.0);
  CHECK(q.sdot == doctest::Approx(5.0 * std::cos(0.3)));
  CHECK(q.ndot == doctest::Approx(5.0 * std::sin(0.3)));
}

TEST_CASE("oval builds closed with the requested length") {
  Track t = make_track(synth_oval(), "oval");
  CHECK(t.closed);
  CHECK(t.length == doctest::Approx(1200.0).epsilon(1e-3));
  CHECK(std::abs(t.heading.back() - t.heading.front()) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-3));
  CHECK(t.warnings.empty());
  CHECK(t.curvature_at(0.0) == doctest::Approx(0.0).epsilon(1e-9));
  double cmax = 0.0;
  for (double c : t.curvature) cmax = std::max(cmax, c);
  CHECK(cmax == doctest::Approx(1.0 / 90.0).epsilon(1e-3));
  // Curvature lookup wraps around for closed tracks.
  CHECK(t.curvature_at(t.length + 350.0) == doctest::Approx(t.curvature_at(350.0)));
}

TEST_CASE("mini circuit and s-curve build") {
  Track m = make_track(synth_mini_circuit(), "mini");
  CHECK(m.closed);
  CHECK(m.length == doctest::Approx(2000.0).epsilon(1e-3));
  CHECK(m.max_offset_ratio() < 0.5);
  Track s = make_track(synth_s_curve(), "s");
  CHECK_FALSE(s.closed);
  CHECK(std::abs(s.heading.back() - s.heading.front()) < 1e-3);
}

TEST_CASE("track validation") {
  CHECK_THROWS_AS(build_track({0.0, 1.0}, {0.0, 0.0}, {}), laptime::InputError);
  CHECK_THROWS_AS(build_track({0.0, NAN, 2.0}, {0.0, 0.0, 1.0}, {}), laptime::InputError);
  Track t = build_track({0.0, 1.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.1, 0.3}, {});
  CHECK(!t.warnings.empty());
  // A tight circle narrower than the half-width is singular.
  RawPoints c = synth_circle(5.0, 2.0);
  for (auto& w : c.w) w = 6.0;
  CHECK_THROWS_AS(make_track(c, "tight"), laptime::InputError);
}

TEST_CASE("self-intersection is reported") {
  // Figure-eight.
  RawPoints p;
  for (int i = 0; i < 720; ++i) {
    double t = 2.0 * std::numbers::pi * i / 720.0;
    p.x.push_back(200.0 * std::sin(t));
    p.y.push_back(100.0 * std::sin(2.0 * t));
    p.w.push_back(2.0);
  }
  Track t = make_track(p, "eight");
  bool found = false;
  for (const auto& w : t.warnings) found |= w.find("self-intersects") != std::string::npos;
  CHECK(found);
}

TEST_CASE("CSV round trip of raw points") {
  auto path = std::filesystem::temp_directory_path() / "laptime_oval_test.csv";
  RawPoints p = synth_oval();
  save_points_csv(p.x, p.y, p.w, path.string());
  Track a = load_track_csv(path.string());
  Track b = make_track(p, "oval");
  CHECK(a.closed);
  CHECK(a.length == doctest::Approx(b.length).epsilon(1e-6));
  std::filesystem::remove(path);
}
