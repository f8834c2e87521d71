#include "laptime/nlp/kkt_check.hpp"

#include <algorithm>
#include <cmath>

namespace laptime::nlp {

KktResiduals check_kkt(const Problem& p, const std::vector<double>& x, const std::vector<double>& lambda,
                       const std::vector<double>& z_lower, const std::vector<double>& z_upper) {
  const int n = p.num_variables();
  const int m = p.num_constraints();
  std::vector<double> xl(n), xu(n), gl(m), gu(m), grad(n), g(m);
  p.bounds(xl.data(), xu.data(), gl.data(), gu.data());
  p.gradient(x.data(), grad.data());
  if (m > 0) p.constraints(x.data(), g.data());
  const Sparsity sp = p.jacobian_structure();
  std::vector<double> jv(sp.nnz());
  if (sp.nnz() > 0) p.jacobian(x.data(), jv.data());

  std::vector<double> r(grad);
  for (size_t k = 0; k < sp.nnz(); ++k) r[sp.cols[k]] += jv[k] * lambda[sp.rows[k]];
  KktResiduals out;
  double msum = 0.0;
  for (int i = 0; i < n; ++i) {
    r[i] += -z_lower[i] + z_upper[i];
    out.stationarity = std::max(out.stationarity, std::abs(r[i]));
    msum += std::abs(z_lower[i]) + std::abs(z_upper[i]);
    if (std::isfinite(xl[i])) out.complementarity = std::max(out.complementarity, std::abs(z_lower[i] * (x[i] - xl[i])));
    if (std::isfinite(xu[i])) out.complementarity = std::max(out.complementarity, std::abs(z_upper[i] * (xu[i] - x[i])));
    out.dual_sign = std::max({out.dual_sign, -z_lower[i], -z_upper[i]});
    if (!std::isfinite(xl[i]) && z_lower[i] != 0.0) out.dual_sign = std::max(out.dual_sign, std::abs(z_lower[i]));
    if (!std::isfinite(xu[i]) && z_upper[i] != 0.0) out.dual_sign = std::max(out.dual_sign, std::abs(z_upper[i]));
    out.primal = std::max({out.primal, xl[i] - x[i], x[i] - xu[i]});
  }
  for (int i = 0; i < m; ++i) {
    const double l = lambda[i];
    msum += std::abs(l);
    out.primal = std::max({out.primal, gl[i] - g[i], g[i] - gu[i]});
    if (gl[i] == gu[i]) continue;
    if (l > 0.0) {
      if (std::isfinite(gu[i])) {
        out.complementarity = std::max(out.complementarity, std::abs(l * (gu[i] - g[i])));
      } else {
        out.dual_sign = std::max(out.dual_sign, l);
      }
    } else if (l < 0.0) {
      if (std::isfinite(gl[i])) {
        out.complementarity = std::max(out.complementarity, std::abs(l * (g[i] - gl[i])));
      } else {
        out.dual_sign = std::max(out.dual_sign, -l);
      }
    }
  }
  const double sd = std::max(100.0, msum / std::max(1, n + m)) / 100.0;
  out.stationarity_scaled = out.stationarity / sd;
  out.complementarity_scaled = out.complementarity / sd;
  return out;
}

KktResiduals check_kkt(const Problem& p, const Solution& s) {
  return check_kkt(p, s.x, s.lambda, s.z_lower, s.z_upper);
}

}  // namespace laptime::nlp
