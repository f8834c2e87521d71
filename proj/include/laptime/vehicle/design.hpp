#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "laptime/vehicle/params.hpp"

namespace laptime::vehicle {

enum class CaseId { OWD, COG, DMT, ATR, ALL };

std::string to_string(CaseId id);
CaseId case_from_string(const std::string& s);

struct MotorDesign {
  double base_speed = 0.0;  // N_b [rpm]
  double beta = 0.0;        // N_max / N_b
  double gear_ratio = 0.0;  // i_g
  double power_kw = 0.0;
};

// Fully resolved design, one motor per wheel (fr, fl, rr, rl).
struct Design {
  std::array<MotorDesign, 4> motors;
  double l_f = 0.0;
  double k_bs_f = 0.0, k_bs_r = 0.0;
  double c_f = 1.0, c_r = 1.0;
  double k_atr_f = 1.0, k_atr_r = 1.0;
};

// Ordered design variables of one case:
//   OWD [N_b, beta, i_g]
//   COG [N_b, beta, i_g, l_f]
//   DMT [beta_f, N_bf, i_gf, beta_r, N_br, i_gr, P_r, l_f]
//   ATR DMT + [k_f_atr, k_r_atr]
//   ALL DMT + [k_bs_f, k_bs_r, c_f, c_r, k_f_atr, k_r_atr]
struct DesignVector {
  CaseId id = CaseId::OWD;
  std::vector<double> values;
};

struct DesignSpace {
  CaseId id = CaseId::OWD;
  std::vector<std::string> names;
  std::vector<double> lower, upper;
};

const std::vector<std::string>& design_names(CaseId id);
DesignSpace default_design_space(CaseId id, const VehicleParams& p);
DesignVector baseline_design(CaseId id, const VehicleParams& p);
// Design vector of `id` that reproduces `d`, when the case can express it.
DesignVector project_design(CaseId id, const Design& d);

Design decode(const DesignVector& v, const VehicleParams& p);
Design baseline(const VehicleParams& p);
void validate(const DesignVector& v, const DesignSpace& space);

}  // namespace laptime::vehicle
