#pragma once

#include <string>
#include <vector>

#include "laptime/tire/tir_file.hpp"

namespace laptime::tire {

// Steady-state Magic Formula (PAC2002 / MF 5.2 family) with combined slip.
// Inputs use SI units and radians. Sign convention: Fx has the sign of
// kappa and Fy the sign of alpha for a file with positive PDX1/PDY1/PKX1/PKY1.
struct TireInput {
  double fz = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double vx = 0.0;
};

struct TireForces {
  double fx = 0.0;
  double fy = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double mz = 0.0;
};

// Struct-of-arrays batch, one entry per wheel per node.
struct TireBatch {
  std::vector<double> fz, kappa, alpha, gamma, vx;
  std::vector<double> fx, fy, mx, my, mz;
  void resize(size_t n);
  size_t size() const { return fz.size(); }
};

struct MfCoefficients {
  // [DIMENSION] / [VERTICAL] / [OPERATING_CONDITIONS]
  double fnomin = 0, r0 = 0, kz = 0, cz = 0, longvl = 16.7;
  // [SCALING_COEFFICIENTS]
  double lfzo = 1, lcx = 1, lmux = 1, lex = 1, lkx = 1, lhx = 1, lvx = 1, lgax = 1;
  double lcy = 1, lmuy = 1, ley = 1, lky = 1, lhy = 1, lvy = 1, lgay = 1;
  double ltr = 1, lres = 1, lgaz = 1, lxal = 1, lyka = 1, lvyka = 1, ls = 1;
  double lmx = 1, lvmx = 1, lmy = 1;
  // [LONGITUDINAL_COEFFICIENTS]
  double pcx1 = 0, pdx1 = 0, pdx2 = 0, pdx3 = 0, pex1 = 0, pex2 = 0, pex3 = 0, pex4 = 0;
  double pkx1 = 0, pkx2 = 0, pkx3 = 0, phx1 = 0, phx2 = 0, pvx1 = 0, pvx2 = 0;
  double rbx1 = 0, rbx2 = 0, rcx1 = 0, rex1 = 0, rex2 = 0, rhx1 = 0;
  // [OVERTURNING_COEFFICIENTS]
  double qsx1 = 0, qsx2 = 0, qsx3 = 0;
  // [LATERAL_COEFFICIENTS]
  double pcy1 = 0, pdy1 = 0, pdy2 = 0, pdy3 = 0, pey1 = 0, pey2 = 0, pey3 = 0, pey4 = 0;
  double pky1 = 0, pky2 = 0, pky3 = 0, phy1 = 0, phy2 = 0, phy3 = 0;
  double pvy1 = 0, pvy2 = 0, pvy3 = 0, pvy4 = 0;
  double rby1 = 0, rby2 = 0, rby3 = 0, rcy1 = 0, rey1 = 0, rey2 = 0, rhy1 = 0, rhy2 = 0;
  double rvy1 = 0, rvy2 = 0, rvy3 = 0, rvy4 = 0, rvy5 = 0, rvy6 = 0;
  // [ROLLING_COEFFICIENTS]
  double qsy1 = 0, qsy2 = 0, qsy3 = 0, qsy4 = 0;
  // [ALIGNING_COEFFICIENTS]
  double qbz1 = 0, qbz2 = 0, qbz3 = 0, qbz4 = 0, qbz5 = 0, qbz9 = 0, qbz10 = 0;
  double qcz1 = 0, qdz1 = 0, qdz2 = 0, qdz3 = 0, qdz4 = 0, qdz6 = 0, qdz7 = 0, qdz8 = 0, qdz9 = 0;
  double qez1 = 0, qez2 = 0, qez3 = 0, qez4 = 0, qez5 = 0;
  double qhz1 = 0, qhz2 = 0, qhz3 = 0, qhz4 = 0;
  double ssz1 = 0, ssz2 = 0, ssz3 = 0, ssz4 = 0;
};

class MagicFormula {
 public:
  MagicFormula() = default;
  // Keys absent from the file fall back to 0 (shape/shift terms) or 1
  // (L* scalings); every fallback is listed in defaulted_keys().
  explicit MagicFormula(const TirFile& file);
  explicit MagicFormula(const MfCoefficients& c) : c_(c) {}

  TireForces evaluate(const TireInput& in) const;
  void evaluate(TireBatch& batch) const;

  // Peak factors D_x = mu_x Fz and D_y = mu_y Fz at the given load and camber.
  double peak_fx(double fz, double gamma = 0.0) const;
  double peak_fy(double fz, double gamma = 0.0) const;
  // Cornering and slip stiffness at zero slip.
  double cornering_stiffness(double fz, double gamma = 0.0) const;
  double slip_stiffness(double fz) const;

  double unloaded_radius() const { return c_.r0; }
  double vertical_stiffness() const { return c_.kz; }
  double vertical_damping() const { return c_.cz; }

  const MfCoefficients& coefficients() const { return c_; }
  MfCoefficients& coefficients() { return c_; }
  const std::vector<std::string>& defaulted_keys() const { return defaulted_; }

 private:
  MfCoefficients c_;
  std::vector<std::string> defaulted_;
};

// Penetration-based normal load: k max(0, delta) + c ddelta, floored at 0
// and exactly 0 once contact is lost.
double tire_vertical_force(double deflection, double deflection_rate, double stiffness, double damping);

}  // namespace laptime::tire
