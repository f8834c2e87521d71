#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "laptime/error.hpp"
#include "laptime/nlp/fd_jacobian.hpp"
#include "laptime/transcription/initial_guess.hpp"
#include "laptime/transcription/solution_io.hpp"
#include "lap_fixture.hpp"

using namespace laptime;
using namespace laptime::transcription;
using laptime::vehicle::CaseId;

namespace {

Trajectory random_trajectory(int nodes, int nx, int nu, int np, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Trajectory t;
  t.nodes = nodes;
  t.nx = nx;
  t.nu = nu;
  for (int i = 0; i < nodes * nx; ++i) t.x.push_back(d(rng));
  for (int i = 0; i < nodes * nu; ++i) t.u.push_back(d(rng));
  t.tf = std::abs(d(rng)) + 1.0;
  for (int i = 0; i < np; ++i) t.p.push_back(d(rng));
  return t;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Exponential samples of xdot = x on [0, 1].
double exp_defect(int nodes) {
  Trajectory t;
  t.nodes = nodes;
  t.nx = 1;
  t.nu = 0;
  t.tf = 1.0;
  for (int k = 0; k < nodes; ++k) t.x.push_back(std::exp(t.time(k)));
  return max_abs(trapezoid_defects(t, [](const double* x, const double*, const double*, double* f) { f[0] = x[0]; }));
}

}  // namespace

TEST_CASE("layout dimension") {
  Layout l{2, 1, 1, 1};
  CHECK(l.size() == 6);
  Layout big{200, 31, 5, 14};
  CHECK(big.size() == 200 * 36 + 1 + 14);
}

TEST_CASE("pack and unpack round trip bitwise") {
  const Trajectory a = random_trajectory(7, 31, 5, 3, 11);
  const Layout l = layout_of(a);
  const std::vector<double> y = pack(l, a);
  const Trajectory b = unpack(l, y);
  CHECK(b.x == a.x);
  CHECK(b.u == a.u);
  CHECK(b.tf == a.tf);
  CHECK(b.p == a.p);
  CHECK(pack(l, b) == y);
  // interleaved node layout
  CHECK(y[l.state(1)] == a.state(1)[0]);
  CHECK(y[l.control(1) + 2] == a.control(1)[2]);
}

TEST_CASE("t_f slot is isolated") {
  const Trajectory a = random_trajectory(4, 3, 2, 2, 5);
  const Layout l = layout_of(a);
  std::vector<double> y = pack(l, a);
  y[l.tf()] += 1.5;
  const Trajectory b = unpack(l, y);
  CHECK(b.tf == a.tf + 1.5);
  CHECK(b.x == a.x);
  CHECK(b.u == a.u);
  CHECK(b.p == a.p);
}

TEST_CASE("pack rejects mismatched shapes") {
  Trajectory a = random_trajectory(3, 2, 1, 0, 1);
  Layout l = layout_of(a);
  l.np = 1;
  CHECK_THROWS_AS(pack(l, a), InputError);
  CHECK_THROWS_AS(unpack(layout_of(a), std::vector<double>(4)), InputError);
}

TEST_CASE("trapezoid is exact for constant and linear integrands") {
  Trajectory c;
  c.nodes = 6;
  c.nx = 2;
  c.nu = 0;
  c.tf = 2.5;
  for (int k = 0; k < c.nodes; ++k) {
    c.x.push_back(1.0 + 3.0 * c.time(k));
    c.x.push_back(-2.0 * c.time(k));
  }
  auto zc = trapezoid_defects(c, [](const double*, const double*, const double*, double* f) {
    f[0] = 3.0;
    f[1] = -2.0;
  });
  CHECK(max_abs(zc) < 1e-14);

  // state (t, y) with ydot = t and samples y = t^2 / 2
  Trajectory l;
  l.nodes = 9;
  l.nx = 2;
  l.nu = 0;
  l.tf = 4.0;
  for (int k = 0; k < l.nodes; ++k) {
    const double t = l.time(k);
    l.x.push_back(t);
    l.x.push_back(0.5 * t * t);
  }
  auto zl = trapezoid_defects(l, [](const double* x, const double*, const double*, double* f) {
    f[0] = 1.0;
    f[1] = x[0];
  });
  CHECK(max_abs(zl) < 1e-14);
}

TEST_CASE("trapezoid defects on xdot = x shrink eightfold per halving") {
  const double r1 = exp_defect(11) / exp_defect(21);
  const double r2 = exp_defect(21) / exp_defect(41);
  CHECK(r1 == doctest::Approx(8.0).epsilon(0.05));
  CHECK(r2 == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("stencil matrix form equals the loop form") {
  const Trajectory t = random_trajectory(6, 3, 1, 0, 3);
  auto f = [](const double* x, const double* u, const double*, double* out) {
    out[0] = std::sin(x[1]) + u[0];
    out[1] = x[0] * x[2];
    out[2] = -x[2];
  };
  const auto z = trapezoid_defects(t, f);
  Eigen::MatrixXd X(t.nodes, t.nx), F(t.nodes, t.nx);
  for (int k = 0; k < t.nodes; ++k) {
    double out[3];
    f(t.state(k), t.control(k), nullptr, out);
    for (int i = 0; i < t.nx; ++i) {
      X(k, i) = t.state(k)[i];
      F(k, i) = out[i];
    }
  }
  const Eigen::MatrixXd Z = difference_stencil(t.nodes) * X - 0.5 * t.step() * (pairwise_sum_stencil(t.nodes) * F);
  for (int k = 0; k + 1 < t.nodes; ++k)
    for (int i = 0; i < t.nx; ++i) CHECK(Z(k, i) == doctest::Approx(z[k * t.nx + i]).epsilon(1e-14));
}

TEST_CASE("dynamics failures name the node") {
  Trajectory t = random_trajectory(4, 1, 0, 0, 2);
  t.x[2] = 100.0;
  try {
    trapezoid_defects(t, [](const double* x, const double*, const double*, double* f) {
      if (x[0] > 50.0) throw EvaluationError("blow-up");
      f[0] = 0.0;
    });
    FAIL("expected an error");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("node 2") != std::string::npos);
  }
}

TEST_CASE("motor envelope rows") {
  const auto m = test_support::model();
  const auto& mot = m.design.motors[0];
  vehicle::State x = vehicle::static_state(m);
  vehicle::Control u{};
  // above base speed, torque exactly at the envelope
  const double speed = 1.5 * mot.base_speed;
  const double omega = speed / (mot.gear_ratio * 60.0 / (2.0 * M_PI));
  for (int w = 0; w < 4; ++w) x[vehicle::ix::kSpinRate + w] = omega;
  x[vehicle::ix::kVx] = omega * m.rest.z_u[0];
  const double tmax = 9550.0 * mot.gear_ratio * mot.power_kw / speed;
  for (int w = 0; w < 4; ++w) u[vehicle::iu::kTorque + w] = tmax;
  auto r = envelope_residuals(m, x.data(), u.data());
  CHECK(std::abs(r.torque[0]) < 1e-9);
  vehicle::Evaluation e;
  vehicle::evaluate(m, x.data(), u.data(), &test_support::oval(), e);
  double g[kNg];
  path_rows(m, test_support::oval(), e, x.data(), u.data(), g);
  CHECK(std::abs(g[pg::kPowerTorque]) < 1e-9);
  CHECK(g[pg::kBaseTorque] < 0.0);
}

TEST_CASE("stationary vehicle is strictly inside every envelope") {
  const auto m = test_support::model();
  const vehicle::State x = vehicle::static_state(m);
  const vehicle::Control u{};
  vehicle::Evaluation e;
  vehicle::evaluate(m, x.data(), u.data(), &test_support::oval(), e);
  double g[kNg], lo[kNg], hi[kNg];
  path_rows(m, test_support::oval(), e, x.data(), u.data(), g);
  path_bounds(m, lo, hi);
  for (int j = 0; j < pg::kKappa; ++j) CHECK(g[j] < hi[j]);
  for (int j = pg::kLoad; j < pg::kKappa; ++j) CHECK(g[j] > lo[j]);
  const auto r = envelope_residuals(m, x.data(), u.data());
  for (int w = 0; w < 4; ++w) {
    CHECK(r.speed[w] < 0.0);
    CHECK(r.torque[w] < 0.0);
  }
}

TEST_CASE("track row reaches its bound at the edge") {
  const auto m = test_support::model();
  const auto& t = test_support::oval();
  vehicle::State x = vehicle::static_state(m);
  x[vehicle::ix::kS] = 37.0;
  x[vehicle::ix::kN] = t.width_at(37.0);
  vehicle::Control u{};
  vehicle::Evaluation e;
  vehicle::evaluate(m, x.data(), u.data(), &t, e);
  double g[kNg], lo[kNg], hi[kNg];
  path_rows(m, t, e, x.data(), u.data(), g);
  path_bounds(m, lo, hi);
  CHECK(g[pg::kTrack] == doctest::Approx(hi[pg::kTrack]));
}

TEST_CASE("boundary rows") {
  SUBCASE("flying lap with identical first and last states") {
    LapProblem p(test_support::lap_setup(6, std::nullopt));
    Trajectory t = p.trajectory(std::vector<double>([&] {
      std::vector<double> y(p.num_variables());
      p.initial_point(y.data());
      return y;
    }()).data());
    for (int i = 0; i < vehicle::kNx; ++i) t.state(5)[i] = t.state(0)[i];
    const auto g = p.physical_constraints(t);
    for (int b = 0; b < p.num_boundary(); ++b) {
      const int row = p.num_defects() + p.num_path() + b;
      if (p.describe_row(row).rfind("periodic", 0) == 0) CHECK(g[row] == 0.0);
    }
  }
  SUBCASE("standing start with a moving first node") {
    LapProblem p(test_support::lap_setup(6, std::nullopt, Boundary::StandingStart));
    std::vector<double> y(p.num_variables());
    p.initial_point(y.data());
    Trajectory t = p.trajectory(y.data());
    const auto g = p.physical_constraints(t);
    const int first = p.num_defects() + p.num_path();
    CHECK(p.describe_row(first) == "start vx");
    CHECK(g[first] == doctest::Approx(t.state(0)[0]));
    CHECK(std::abs(g[first]) > 1.0);
  }
  SUBCASE("finish short of the track length") {
    LapProblem p(test_support::lap_setup(6, std::nullopt));
    std::vector<double> y(p.num_variables());
    p.initial_point(y.data());
    Trajectory t = p.trajectory(y.data());
    t.state(5)[vehicle::ix::kS] = test_support::oval().length - 3.25;
    const auto g = p.physical_constraints(t);
    std::vector<double> lo, hi;
    p.physical_constraint_bounds(lo, hi);
    int row = -1;
    for (int r = p.num_defects() + p.num_path(); r < p.num_constraints(); ++r)
      if (p.describe_row(r) == "finish s") row = r;
    REQUIRE(row >= 0);
    CHECK(g[row] - hi[row] == doctest::Approx(-3.25));
  }
}

TEST_CASE("defect and path bounds") {
  LapProblem p(test_support::lap_setup(5, CaseId::OWD));
  std::vector<double> xl(p.num_variables()), xu(p.num_variables()), gl(p.num_constraints()), gu(p.num_constraints());
  p.bounds(xl.data(), xu.data(), gl.data(), gu.data());
  for (int i = 0; i < p.num_defects(); ++i) {
    CHECK(gl[i] == 0.0);
    CHECK(gu[i] == 0.0);
  }
  for (int i = 0; i < p.num_constraints(); ++i) CHECK(gl[i] <= gu[i]);
  CHECK(p.num_variables() == 5 * 36 + 1 + 3);
}

TEST_CASE("scaling maps bounds onto [-1, 1] and back") {
  LapProblem p(test_support::lap_setup(5, CaseId::COG));
  const auto& lo = p.lower();
  const auto& hi = p.upper();
  std::vector<double> mid(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
  for (double v : p.scale(mid)) CHECK(std::abs(v) < 1e-12);
  CHECK(p.scale(lo)[7] == doctest::Approx(-1.0));
  CHECK(p.scale(hi)[7] == doctest::Approx(1.0));

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> y(lo.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = lo[i] + u(rng) * (hi[i] - lo[i]);
  const auto back = p.unscale(p.scale(y).data());
  for (size_t i = 0; i < y.size(); ++i) CHECK(back[i] == doctest::Approx(y[i]).epsilon(1e-14));
}

TEST_CASE("scaled violation times the row weights is the physical violation") {
  LapProblem p(test_support::lap_setup(6, CaseId::OWD));
  std::vector<double> ys(p.num_variables());
  p.initial_point(ys.data());
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (double& v : ys) v += u(rng);
  std::vector<double> gs(p.num_constraints()), w(p.num_constraints());
  std::vector<double> xl(ys.size()), xu(ys.size()), gl(gs.size()), gu(gs.size());
  p.constraints(ys.data(), gs.data());
  p.violation_weights(w.data());
  p.bounds(xl.data(), xu.data(), gl.data(), gu.data());
  const auto g = p.physical_constraints(p.trajectory(ys.data()));
  std::vector<double> lo, hi;
  p.physical_constraint_bounds(lo, hi);
  for (int i = 0; i < p.num_constraints(); ++i) {
    auto viol = [](double v, double a, double b) { return std::max({0.0, a - v, v - b}); };
    const double scaled = viol(gs[i], gl[i], gu[i]) * w[i];
    const double phys = viol(g[i], lo[i], hi[i]);
    CHECK(scaled == doctest::Approx(phys).epsilon(1e-9).scale(1e-12));
  }
}

namespace {

// Dense central differences of the scaled constraints.
void check_jacobian(const LapProblem& p, unsigned seed) {
  const int n = p.num_variables(), m = p.num_constraints();
  std::vector<double> y(n);
  p.initial_point(y.data());
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (double& v : y) v = std::clamp(v + u(rng), -0.99, 0.99);

  const auto pat = p.jacobian_structure();
  std::vector<double> vals(pat.nnz());
  p.jacobian(y.data(), vals.data());
  std::vector<std::vector<double>> sparse(n, std::vector<double>(m, 0.0));
  std::vector<std::set<int>> in_pattern(n);
  for (size_t e = 0; e < pat.nnz(); ++e) {
    CHECK(in_pattern[pat.cols[e]].insert(pat.rows[e]).second);
    sparse[pat.cols[e]][pat.rows[e]] = vals[e];
  }

  std::vector<double> gp(m), gm(m);
  int missing = 0, mismatched = 0;
  for (int j = 0; j < n; ++j) {
    const double h = 1e-6;
    const double keep = y[j];
    y[j] = keep + h;
    p.constraints(y.data(), gp.data());
    y[j] = keep - h;
    p.constraints(y.data(), gm.data());
    y[j] = keep;
    for (int i = 0; i < m; ++i) {
      const double d = (gp[i] - gm[i]) / (2.0 * h);
      if (!in_pattern[j].count(i)) {
        if (std::abs(d) > 1e-7) {
          ++missing;
          if (missing < 5) MESSAGE("missing " << p.describe_row(i) << " / " << p.describe_variable(j) << " = " << d);
        }
      } else if (std::abs(d - sparse[j][i]) > 1e-5 * std::max(1.0, std::abs(d))) {
        ++mismatched;
        if (mismatched < 5)
          MESSAGE("mismatch " << p.describe_row(i) << " / " << p.describe_variable(j) << ": " << sparse[j][i]
                              << " vs " << d);
      }
    }
  }
  CHECK(missing == 0);
  CHECK(mismatched == 0);
}

}  // namespace

TEST_CASE("declared sparsity covers every dependency") {
  SUBCASE("frozen design, flying lap") { check_jacobian(LapProblem(test_support::lap_setup(4, std::nullopt)), 1); }
  SUBCASE("OWD design, standing start") {
    check_jacobian(LapProblem(test_support::lap_setup(4, CaseId::OWD, Boundary::StandingStart)), 2);
  }
  SUBCASE("ALL design, flying lap") { check_jacobian(LapProblem(test_support::lap_setup(4, CaseId::ALL)), 3); }
}

TEST_CASE("defect rows only touch their own two nodes") {
  LapProblem p(test_support::lap_setup(7, CaseId::OWD));
  const auto pat = p.jacobian_structure();
  const Layout& l = p.layout();
  for (size_t e = 0; e < pat.nnz(); ++e) {
    const int r = pat.rows[e], c = pat.cols[e];
    if (r >= p.num_defects() || c >= l.tf()) continue;
    const int k = r / vehicle::kNx;
    const int node = c / l.node_width();
    CHECK((node == k || node == k + 1));
  }
}

TEST_CASE("initial guess") {
  const auto m = test_support::model();
  const auto& t = test_support::oval();
  const Trajectory g = initial_guess(t, m, 40, 20.0);
  CHECK(g.tf == doctest::Approx(t.length / 20.0));
  for (int k = 0; k < g.nodes; ++k) {
    CHECK(g.state(k)[vehicle::ix::kN] == 0.0);
    CHECK(g.state(k)[vehicle::ix::kChi] == 0.0);
  }
  CHECK_THROWS_AS(initial_guess(t, m, 40, 150.0), InputError);
}

TEST_CASE("initial-guess defects stay bounded on the shipped tracks") {
  for (const char* name : {"oval.csv", "mini_circuit.csv", "s_curve.csv"}) {
    CAPTURE(std::string(name));
    auto setup = test_support::lap_setup(200, std::nullopt);
    setup.track = track::load_track_csv(test_support::data(std::string("tracks/") + name));
    LapProblem p(setup);
    const Trajectory g = initial_guess(setup.track, p.model_of({}), setup.nodes, setup.v0);
    const auto c = p.physical_constraints(g);
    double worst = 0.0;
    int at = 0;
    for (int i = 0; i < p.num_defects(); ++i) {
      REQUIRE(std::isfinite(c[i]));
      if (std::abs(c[i]) > worst) worst = std::abs(c[i]), at = i;
    }
    CAPTURE(p.describe_row(at));
    CHECK(worst < 10.0);
  }
}

TEST_CASE("trajectory JSON round trip") {
  const Trajectory a = random_trajectory(5, 31, 5, 3, 8);
  const auto path = std::filesystem::temp_directory_path() / "laptime_traj_roundtrip.json";
  save_trajectory(a, path.string(), {"N_b", "beta", "i_g"});
  const Trajectory b = load_trajectory(path.string());
  CHECK(b.x == a.x);
  CHECK(b.u == a.u);
  CHECK(b.tf == a.tf);
  CHECK(b.p == a.p);
  std::filesystem::remove(path);
  nlohmann::json bad = to_json(a);
  bad["x"].erase(0);
  CHECK_THROWS_AS(trajectory_from_json(bad), InputError);
}
