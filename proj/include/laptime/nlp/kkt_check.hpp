#pragma once

#include <vector>

#include "laptime/nlp/problem.hpp"

namespace laptime::nlp {

struct KktResiduals {
  double stationarity = 0.0;         // |grad f + J'lambda - z_l + z_u|_inf
  double stationarity_scaled = 0.0;  // divided by the multiplier-size factor
  double complementarity = 0.0;      // max |multiplier * distance to its bound|
  double complementarity_scaled = 0.0;
  double primal = 0.0;               // max violation of g and x bounds
  double dual_sign = 0.0;            // largest multiplier of the wrong sign
};

// Recomputes first-order residuals from the problem's evaluators.
KktResiduals check_kkt(const Problem& p, const std::vector<double>& x, const std::vector<double>& lambda,
                       const std::vector<double>& z_lower, const std::vector<double>& z_upper);
KktResiduals check_kkt(const Problem& p, const Solution& s);

}  // namespace laptime::nlp
