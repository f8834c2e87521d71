#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "laptime/error.hpp"
#include "laptime/tire/magic_formula.hpp"
#include "laptime/tire/tir_file.hpp"

using laptime::ParseError;
using laptime::tire::MagicFormula;
using laptime::tire::TirFile;

namespace {

const char* kMinimal = R"([DIMENSION]
UNLOADED_RADIUS = 0.3
[VERTICAL]
FNOMIN = 4000
VERTICAL_STIFFNESS = 2e5
)";

}  // namespace

TEST_CASE("tir: scalar key is read") {
  TirFile f = TirFile::parse(kMinimal);
  CHECK(f.number("FNOMIN").value() == 4000.0);
  CHECK(f.number("UNLOADED_RADIUS").value() == 0.3);
}

TEST_CASE("tir: comments, quoted strings and tables") {
  TirFile f = TirFile::parse(R"($ header comment
[MDI_HEADER]
FILE_TYPE = 'tir'   $ trailing comment
! bang comment
[DIMENSION]
UNLOADED_RADIUS = 0.3 ! trailing bang
[VERTICAL]
FNOMIN = 3000
[SHAPE]
{radial width}
1.0 0.0
1.0 0.4
)");
  CHECK(f.text("FILE_TYPE").value() == "tir");
  CHECK(f.number("FNOMIN").value() == 3000.0);
  REQUIRE(f.sections().back().table_rows.size() == 2);
  CHECK(f.sections().back().table_rows[1][1] == 0.4);
}

TEST_CASE("tir: duplicate key keeps the last value and warns") {
  TirFile f = TirFile::parse(R"([DIMENSION]
UNLOADED_RADIUS = 0.3
[VERTICAL]
FNOMIN = 3000
FNOMIN = 3500
)");
  CHECK(f.number("FNOMIN").value() == 3500.0);
  REQUIRE(f.warnings().size() == 1);
  CHECK(f.warnings()[0].find("FNOMIN") != std::string::npos);
}

TEST_CASE("tir: rejection paths") {
  SUBCASE("missing FNOMIN") {
    CHECK_THROWS_AS(TirFile::parse("[DIMENSION]\nUNLOADED_RADIUS = 0.3\n"), ParseError);
  }
  SUBCASE("missing UNLOADED_RADIUS") {
    CHECK_THROWS_AS(TirFile::parse("[VERTICAL]\nFNOMIN = 3000\n"), ParseError);
  }
  SUBCASE("non-numeric value") {
    CHECK_THROWS_AS(TirFile::parse("[DIMENSION]\nUNLOADED_RADIUS = 0.3\n[VERTICAL]\nFNOMIN = abc\n"), ParseError);
  }
  SUBCASE("malformed line") {
    try {
      TirFile::parse("[DIMENSION]\nUNLOADED_RADIUS = 0.3\nFNOMIN 3000\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("key outside a section") {
    CHECK_THROWS_AS(TirFile::parse("FNOMIN = 3000\n"), ParseError);
  }
  SUBCASE("non-positive radius") {
    CHECK_THROWS_AS(TirFile::parse("[DIMENSION]\nUNLOADED_RADIUS = 0\n[VERTICAL]\nFNOMIN = 3000\n"), ParseError);
  }
}

TEST_CASE("tir: missing coefficients fall back and are reported") {
  MagicFormula mf(TirFile::parse(kMinimal));
  const auto& d = mf.defaulted_keys();
  auto has = [&](const std::string& k) { return std::find(d.begin(), d.end(), k) != d.end(); };
  CHECK(has("PCX1"));
  CHECK(has("LMUX"));
  CHECK(mf.coefficients().pcx1 == 0.0);
  CHECK(mf.coefficients().lmux == 1.0);
  CHECK_FALSE(has("FNOMIN"));
}

TEST_CASE("tir: serialize then parse reproduces every value") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    TirFile f = TirFile::parse(kMinimal);
    for (int k = 0; k < 40; ++k) f.set("LATERAL_COEFFICIENTS", "K" + std::to_string(k), u(rng) * std::pow(10.0, k % 7 - 3));
    TirFile g = TirFile::parse(f.serialize());
    for (int k = 0; k < 40; ++k) {
      std::string key = "K" + std::to_string(k);
      CHECK(g.number(key).value() == f.number(key).value());
    }
  }
}

TEST_CASE("tir: shipped synthetic file loads") {
  TirFile f = TirFile::load(std::string(LAPTIME_DATA_DIR) + "/tires/f3_synthetic.tir");
  MagicFormula mf(f);
  CHECK(mf.unloaded_radius() == 0.30);
  CHECK(mf.vertical_stiffness() == 200000.0);
  CHECK(f.warnings().empty());
}
