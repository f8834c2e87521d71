#include <doctest.h>

#include <cmath>
#include <random>

#include "laptime/tire/magic_formula.hpp"

using namespace laptime::tire;

namespace {

const MagicFormula& shipped() {
  static const MagicFormula mf(TirFile::load(std::string(LAPTIME_DATA_DIR) + "/tires/f3_synthetic.tir"));
  return mf;
}

}  // namespace

TEST_CASE("mf: pure slip matches an independent implementation") {
  const auto& mf = shipped();
  // Reference values from a separate scalar implementation of the pure-slip curves.
  struct Case {
    double fz, slip, expected;
  };
  for (Case c : {Case{1500, 0.05, 1668.2197018523523}, Case{3000, -0.12, -4643.351738965551},
                 Case{2000, 0.3, 2982.3587215250977}}) {
    TireForces f = mf.evaluate({c.fz, c.slip, 0.0, 0.0, 20.0});
    CHECK(f.fx == doctest::Approx(c.expected).epsilon(1e-12));
    CHECK(f.fy == 0.0);
  }
  for (Case c : {Case{1500, 0.03, 1384.9565708770263}, Case{3000, -0.1, -4370.6880358488825},
                 Case{2000, 0.2, 3143.746710504775}}) {
    TireForces f = mf.evaluate({c.fz, 0.0, c.slip, 0.0, 20.0});
    CHECK(f.fy == doctest::Approx(c.expected).epsilon(1e-12));
    CHECK(f.fx == 0.0);
  }
}

TEST_CASE("mf: zero load gives zero output") {
  TireForces f = shipped().evaluate({0.0, 0.1, 0.05, 0.01, 20.0});
  CHECK(f.fx == 0.0);
  CHECK(f.fy == 0.0);
  CHECK(f.mx == 0.0);
  CHECK(f.my == 0.0);
  CHECK(f.mz == 0.0);
}

TEST_CASE("mf: outputs vanish continuously as the load goes to zero") {
  const auto& mf = shipped();
  double prev = 1e300;
  for (double fz : {100.0, 10.0, 1.0, 1e-3, 1e-6}) {
    TireForces f = mf.evaluate({fz, 0.1, 0.05, 0.0, 20.0});
    double mag = std::abs(f.fx) + std::abs(f.fy) + std::abs(f.mz) + std::abs(f.my);
    CHECK(mag < prev);
    prev = mag;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("mf: odd symmetry with zero shifts") {
  const auto& mf = shipped();
  for (double fz : {800.0, 2000.0, 4000.0}) {
    for (double k : {0.01, 0.07, 0.2, 0.6}) {
      CHECK(mf.evaluate({fz, -k, 0.0, 0.0, 20.0}).fx == doctest::Approx(-mf.evaluate({fz, k, 0.0, 0.0, 20.0}).fx));
    }
    for (double a : {0.01, 0.08, 0.2, 0.5}) {
      CHECK(mf.evaluate({fz, 0.0, -a, 0.0, 20.0}).fy == doctest::Approx(-mf.evaluate({fz, 0.0, a, 0.0, 20.0}).fy));
    }
  }
}

TEST_CASE("mf: combined force never exceeds the larger peak by more than 5%") {
  const auto& mf = shipped();
  for (double fz : {500.0, 1500.0, 3000.0, 6000.0}) {
    double dmax = std::max(mf.peak_fx(fz), mf.peak_fy(fz));
    for (int i = 0; i <= 40; ++i) {
      double k = -0.5 + i * 0.025;
      for (int j = 0; j <= 40; ++j) {
        double a = -0.4 + j * 0.02;
        TireForces f = mf.evaluate({fz, k, a, 0.0, 20.0});
        CHECK(std::hypot(f.fx, f.fy) <= 1.05 * dmax);
      }
    }
  }
}

TEST_CASE("mf: batch equals scalar exactly") {
  const auto& mf = shipped();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TireBatch b;
  b.resize(400);
  for (size_t i = 0; i < b.size(); ++i) {
    b.fz[i] = 5000.0 * u(rng);
    b.kappa[i] = u(rng) - 0.5;
    b.alpha[i] = 0.6 * (u(rng) - 0.5);
    b.gamma[i] = 0.05 * (u(rng) - 0.5);
    b.vx[i] = 60.0 * u(rng);
  }
  mf.evaluate(b);
  for (size_t i = 0; i < b.size(); ++i) {
    TireForces f = mf.evaluate({b.fz[i], b.kappa[i], b.alpha[i], b.gamma[i], b.vx[i]});
    CHECK(f.fx == b.fx[i]);
    CHECK(f.fy == b.fy[i]);
    CHECK(f.mx == b.mx[i]);
    CHECK(f.my == b.my[i]);
    CHECK(f.mz == b.mz[i]);
  }
}

TEST_CASE("mf: peak of the kappa sweep equals the peak factor") {
  const auto& mf = shipped();
  for (double fz : {1000.0, 2000.0, 4000.0}) {
    double peak = 0.0;
    for (int i = 0; i < 10000; ++i) {
      double k = -1.0 + 2.0 * i / 9999.0;
      peak = std::max(peak, std::abs(mf.evaluate({fz, k, 0.0, 0.0, 20.0}).fx));
    }
    CHECK(std::abs(peak - mf.peak_fx(fz)) <= 0.005 * mf.peak_fx(fz));
  }
}

TEST_CASE("mf: rolling resistance opposes forward rolling and fades at rest") {
  const auto& mf = shipped();
  CHECK(mf.evaluate({2000.0, 0.0, 0.0, 0.0, 20.0}).my < 0.0);
  CHECK(mf.evaluate({2000.0, 0.0, 0.0, 0.0, 0.0}).my == 0.0);
}

TEST_CASE("tire vertical force") {
  CHECK(tire_vertical_force(0.01, 0.0, 2e5, 0.0) == doctest::Approx(2000.0));
  CHECK(tire_vertical_force(-0.01, 0.0, 2e5, 500.0) == 0.0);
  CHECK(tire_vertical_force(0.001, -10.0, 2e5, 500.0) == 0.0);
  CHECK(tire_vertical_force(0.01, 1.0, 2e5, 500.0) == doctest::Approx(2500.0));
}
