#include "laptime/vehicle/design.hpp"

#include <cmath>

#include "laptime/error.hpp"

namespace laptime::vehicle {

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::OWD: return "OWD";
    case CaseId::COG: return "COG";
    case CaseId::DMT: return "DMT";
    case CaseId::ATR: return "ATR";
    case CaseId::ALL: return "ALL";
  }
  return "?";
}

CaseId case_from_string(const std::string& s) {
  if (s == "OWD") return CaseId::OWD;
  if (s == "COG") return CaseId::COG;
  if (s == "DMT") return CaseId::DMT;
  if (s == "ATR") return CaseId::ATR;
  if (s == "ALL") return CaseId::ALL;
  throw InputError("unknown case id " + s);
}

const std::vector<std::string>& design_names(CaseId id) {
  static const std::vector<std::string> owd{"N_b", "beta", "i_g"};
  static const std::vector<std::string> cog{"N_b", "beta", "i_g", "l_f"};
  static const std::vector<std::string> dmt{"beta_f", "N_bf", "i_gf", "beta_r", "N_br", "i_gr", "P_r", "l_f"};
  static const std::vector<std::string> atr{"beta_f", "N_bf", "i_gf", "beta_r", "N_br",
                                            "i_gr",   "P_r",  "l_f",  "k_f_atr", "k_r_atr"};
  static const std::vector<std::string> all{"beta_f", "N_bf", "i_gf",   "beta_r", "N_br", "i_gr",    "P_r",
                                            "l_f",    "k_bs_f", "k_bs_r", "c_f",  "c_r",  "k_f_atr", "k_r_atr"};
  switch (id) {
    case CaseId::OWD: return owd;
    case CaseId::COG: return cog;
    case CaseId::DMT: return dmt;
    case CaseId::ATR: return atr;
    case CaseId::ALL: return all;
  }
  return owd;
}

DesignSpace default_design_space(CaseId id, const VehicleParams& p) {
  const double wheelbase = p.l_f + p.l_r;
  auto range = [&](const std::string& n) -> std::pair<double, double> {
    if (n == "N_b" || n == "N_bf" || n == "N_br") return {3000.0, 12000.0};
    if (n == "beta" || n == "beta_f" || n == "beta_r") return {1.5, 6.0};
    if (n == "i_g" || n == "i_gf" || n == "i_gr") return {4.0, 12.0};
    if (n == "l_f") return {0.45 * wheelbase, 0.70 * wheelbase};
    if (n == "P_r") return {0.2 * p.powertrain.p_max_kw, 0.8 * p.powertrain.p_max_kw};
    if (n == "k_bs_f" || n == "k_bs_r") return {5e4, 1e6};
    if (n == "c_f" || n == "c_r") return {0.05, 10.0};
    if (n == "k_f_atr" || n == "k_r_atr") return {0.0, 10.0};
    throw InputError("no default range for design variable " + n);
  };
  DesignSpace s;
  s.id = id;
  s.names = design_names(id);
  for (const auto& n : s.names) {
    auto [lo, hi] = range(n);
    s.lower.push_back(lo);
    s.upper.push_back(hi);
  }
  return s;
}

Design baseline(const VehicleParams& p) {
  Design d;
  for (auto& m : d.motors) {
    m.base_speed = p.powertrain.base_speed;
    m.beta = p.powertrain.beta;
    m.gear_ratio = p.powertrain.gear_ratio;
    m.power_kw = p.powertrain.p_max_kw / 4.0;
  }
  d.l_f = p.l_f;
  d.k_bs_f = p.front.spring_stiffness;
  d.k_bs_r = p.rear.spring_stiffness;
  d.c_f = p.front.damping_scale;
  d.c_r = p.rear.damping_scale;
  d.k_atr_f = p.front.arb_scale;
  d.k_atr_r = p.rear.arb_scale;
  return d;
}

DesignVector project_design(CaseId id, const Design& d) {
  DesignVector v;
  v.id = id;
  const auto& f = d.motors[0];
  const auto& r = d.motors[2];
  switch (id) {
    case CaseId::OWD:
      v.values = {f.base_speed, f.beta, f.gear_ratio};
      break;
    case CaseId::COG:
      v.values = {f.base_speed, f.beta, f.gear_ratio, d.l_f};
      break;
    case CaseId::DMT:
    case CaseId::ATR:
    case CaseId::ALL:
      v.values = {f.beta, f.base_speed, f.gear_ratio, r.beta, r.base_speed, r.gear_ratio, 2.0 * r.power_kw, d.l_f};
      if (id == CaseId::ATR) {
        v.values.insert(v.values.end(), {d.k_atr_f, d.k_atr_r});
      } else if (id == CaseId::ALL) {
        v.values.insert(v.values.end(), {d.k_bs_f, d.k_bs_r, d.c_f, d.c_r, d.k_atr_f, d.k_atr_r});
      }
      break;
  }
  return v;
}

DesignVector baseline_design(CaseId id, const VehicleParams& p) { return project_design(id, baseline(p)); }

Design decode(const DesignVector& v, const VehicleParams& p) {
  const auto& names = design_names(v.id);
  if (v.values.size() != names.size()) {
    throw InputError("design vector for " + to_string(v.id) + " needs " + std::to_string(names.size()) +
                     " entries, got " + std::to_string(v.values.size()));
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) throw InputError("design vector has a non-finite entry");
  }
  Design d = baseline(p);
  const auto& x = v.values;
  const double p_total = p.powertrain.p_max_kw;
  switch (v.id) {
    case CaseId::OWD:
    case CaseId::COG:
      for (auto& m : d.motors) {
        m.base_speed = x[0];
        m.beta = x[1];
        m.gear_ratio = x[2];
        m.power_kw = p_total / 4.0;
      }
      if (v.id == CaseId::COG) d.l_f = x[3];
      break;
    case CaseId::DMT:
    case CaseId::ATR:
    case CaseId::ALL:
      for (int w = 0; w < 2; ++w) {
        d.motors[w] = MotorDesign{x[1], x[0], x[2], 0.5 * (p_total - x[6])};
        d.motors[w + 2] = MotorDesign{x[4], x[3], x[5], 0.5 * x[6]};
      }
      d.l_f = x[7];
      if (v.id == CaseId::ATR) {
        d.k_atr_f = x[8];
        d.k_atr_r = x[9];
      } else if (v.id == CaseId::ALL) {
        d.k_bs_f = x[8];
        d.k_bs_r = x[9];
        d.c_f = x[10];
        d.c_r = x[11];
        d.k_atr_f = x[12];
        d.k_atr_r = x[13];
      }
      break;
  }
  return d;
}

void validate(const DesignVector& v, const DesignSpace& space) {
  if (v.values.empty()) throw InputError("empty design vector");
  if (v.id != space.id || v.values.size() != space.names.size()) {
    throw InputError("design vector does not match the design space of " + to_string(space.id));
  }
  for (size_t i = 0; i < v.values.size(); ++i) {
    if (!(space.lower[i] <= space.upper[i])) throw InputError("design bound for " + space.names[i] + " is inverted");
    if (v.values[i] < space.lower[i] || v.values[i] > space.upper[i]) {
      throw InputError("design variable " + space.names[i] + " = " + std::to_string(v.values[i]) +
                       " outside its bounds");
    }
  }
}

}  // namespace laptime::vehicle
