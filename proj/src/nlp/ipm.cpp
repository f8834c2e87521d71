#include "laptime/nlp/ipm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

#include "laptime/nlp/kkt_system.hpp"
#include "laptime/nlp/lbfgs.hpp"

namespace laptime::nlp {
namespace {

using Eigen::VectorXd;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Filter line search constants.
constexpr double kGammaTheta = 1e-5;
constexpr double kGammaPhi = 1e-5;
constexpr double kDelta = 1.0;
constexpr double kSTheta = 1.1;
constexpr double kSPhi = 2.3;
constexpr double kEta = 1e-4;
constexpr double kGammaAlpha = 0.05;
constexpr double kKappaSoc = 0.99;
constexpr int kMaxSoc = 4;
constexpr double kKappaEps = 10.0;
constexpr double kKappaSigma = 1e10;
constexpr double kSMax = 100.0;

struct Iterate {
  VectorXd x, s, lam, zl, zu, vl, vu;
};

struct Point {
  double f = 0.0;
  VectorXd g;
  bool ok = false;
};

enum class RestoResult { Success, Infeasible, Failed, Limit };

class Solver {
 public:
  Solver(const Problem& p, const Options& o)
      : P_(p),
        o_(o),
        n_(p.num_variables()),
        m_(p.num_constraints()),
        jac_(p.jacobian_structure()),
        kkt_(n_, m_, jac_),
        lbfgs_(n_, o.lbfgs_memory) {}

  Solution run();

 private:
  // ---- setup ----
  bool setup_bounds(std::string& msg);
  void push_inside(VectorXd& v, const VectorXd& lo, const VectorXd& hi, const std::vector<char>& hl,
                   const std::vector<char>& hu) const;

  // ---- evaluation ----
  Point eval_point(const VectorXd& x) const;
  bool eval_derivatives(const VectorXd& x);
  VectorXd residual(const VectorXd& g, const VectorXd& s) const;
  double theta(const VectorXd& c) const { return c.lpNorm<1>(); }
  double barrier(double f, const VectorXd& x, const VectorXd& s, double mu) const;
  void barrier_gradient(const VectorXd& x, const VectorXd& s, double mu, VectorXd& gx, VectorXd& gs) const;
  VectorXd jt_times(const VectorXd& lam) const;

  // ---- errors ----
  struct Errors {
    double dual = 0.0, primal = 0.0, compl_ = 0.0, scaled = 0.0, viol = 0.0;
  };
  Errors errors(double mu) const;

  // ---- linear algebra ----
  bool factor(const VectorXd& hx, const VectorXd& hs, double delta_c, bool low_rank);
  bool solve_direction(const VectorXd& hs, const VectorXd& rx, const VectorXd& rs, const VectorXd& rc,
                       VectorXd& dx, VectorXd& ds, VectorXd& dlam);
  void least_squares_multipliers();

  double fraction_to_boundary(const VectorXd& v, const VectorXd& dv, const VectorXd& lo, const VectorXd& hi,
                              const std::vector<char>& hl, const std::vector<char>& hu, double tau) const;
  double fraction_to_boundary_dual(const VectorXd& z, const VectorXd& dz, const std::vector<char>& has,
                                   double tau) const;
  void safeguard_duals();

  // ---- filter ----
  bool filter_acceptable(double th, double ph) const;
  void filter_add(double th, double ph);

  RestoResult restoration();
  void record(char kind, double step, double a_du, double a_pr, int trials);
  bool out_of_time() const;

  const Problem& P_;
  Options o_;
  int n_, m_, mI_ = 0;
  Sparsity jac_;
  KktSystem kkt_;
  LbfgsMatrix lbfgs_;

  std::vector<int> slack_of_row_, row_of_slack_;
  VectorXd xl_, xu_, sl_, su_;      // relaxed bounds used by the barrier
  VectorXd xl0_, xu0_, gl0_, gu0_;  // original bounds
  std::vector<char> hxl_, hxu_, hsl_, hsu_;
  VectorXd weights_;

  Iterate it_;
  double mu_ = 0.1;
  double f_ = 0.0;
  VectorXd g_, grad_, jval_;
  double theta_max_ = 0.0, theta_min_ = 0.0;
  std::vector<std::pair<double, double>> filter_;

  Solution sol_;
  int iter_ = 0;
  std::chrono::steady_clock::time_point t0_;
  std::string eval_error_;
};

// -------------------------------------------------------------------------

bool Solver::setup_bounds(std::string& msg) {
  xl0_.resize(n_);
  xu0_.resize(n_);
  gl0_.resize(m_);
  gu0_.resize(m_);
  P_.bounds(xl0_.data(), xu0_.data(), gl0_.data(), gu0_.data());
  weights_ = VectorXd::Ones(m_);
  P_.violation_weights(weights_.data());
  for (int i = 0; i < n_; ++i) {
    if (xl0_[i] > xu0_[i]) {
      msg = "variable " + std::to_string(i) + " has empty bounds";
      return false;
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (gl0_[i] > gu0_[i]) {
      msg = "constraint " + std::to_string(i) + " has empty bounds";
      return false;
    }
  }
  auto relax = [&](double b, double sign) { return b + sign * o_.bound_relax * std::max(1.0, std::abs(b)); };
  xl_.resize(n_);
  xu_.resize(n_);
  hxl_.assign(n_, 0);
  hxu_.assign(n_, 0);
  for (int i = 0; i < n_; ++i) {
    hxl_[i] = std::isfinite(xl0_[i]);
    hxu_[i] = std::isfinite(xu0_[i]);
    xl_[i] = hxl_[i] ? relax(xl0_[i], -1.0) : -kInf;
    xu_[i] = hxu_[i] ? relax(xu0_[i], 1.0) : kInf;
  }
  slack_of_row_.assign(m_, -1);
  row_of_slack_.clear();
  for (int i = 0; i < m_; ++i) {
    const bool eq = gl0_[i] == gu0_[i] && std::isfinite(gl0_[i]);
    if (!eq) {
      slack_of_row_[i] = static_cast<int>(row_of_slack_.size());
      row_of_slack_.push_back(i);
    }
  }
  mI_ = static_cast<int>(row_of_slack_.size());
  sl_.resize(mI_);
  su_.resize(mI_);
  hsl_.assign(mI_, 0);
  hsu_.assign(mI_, 0);
  for (int k = 0; k < mI_; ++k) {
    const int r = row_of_slack_[k];
    hsl_[k] = std::isfinite(gl0_[r]);
    hsu_[k] = std::isfinite(gu0_[r]);
    sl_[k] = hsl_[k] ? relax(gl0_[r], -1.0) : -kInf;
    su_[k] = hsu_[k] ? relax(gu0_[r], 1.0) : kInf;
  }
  return true;
}

void Solver::push_inside(VectorXd& v, const VectorXd& lo, const VectorXd& hi, const std::vector<char>& hl,
                         const std::vector<char>& hu) const {
  for (int i = 0; i < v.size(); ++i) {
    if (hl[i] && hu[i]) {
      const double w = hi[i] - lo[i];
      const double pl = std::min(o_.bound_push * std::max(1.0, std::abs(lo[i])), o_.bound_frac * w);
      const double pu = std::min(o_.bound_push * std::max(1.0, std::abs(hi[i])), o_.bound_frac * w);
      v[i] = std::clamp(v[i], lo[i] + pl, hi[i] - pu);
    } else if (hl[i]) {
      v[i] = std::max(v[i], lo[i] + o_.bound_push * std::max(1.0, std::abs(lo[i])));
    } else if (hu[i]) {
      v[i] = std::min(v[i], hi[i] - o_.bound_push * std::max(1.0, std::abs(hi[i])));
    }
  }
}

Point Solver::eval_point(const VectorXd& x) const {
  Point p;
  p.g.resize(m_);
  try {
    p.f = P_.objective(x.data());
    if (m_ > 0) P_.constraints(x.data(), p.g.data());
    p.ok = std::isfinite(p.f) && p.g.allFinite();
  } catch (const std::exception&) {
    p.ok = false;
  }
  return p;
}

bool Solver::eval_derivatives(const VectorXd& x) {
  grad_.resize(n_);
  jval_.resize(static_cast<int>(jac_.nnz()));
  try {
    P_.gradient(x.data(), grad_.data());
    if (jac_.nnz() > 0) P_.jacobian(x.data(), jval_.data());
  } catch (const std::exception& e) {
    eval_error_ = e.what();
    return false;
  }
  return grad_.allFinite() && jval_.allFinite();
}

VectorXd Solver::residual(const VectorXd& g, const VectorXd& s) const {
  VectorXd c(m_);
  for (int i = 0; i < m_; ++i) {
    const int k = slack_of_row_[i];
    c[i] = k < 0 ? g[i] - gl0_[i] : g[i] - s[k];
  }
  return c;
}

double Solver::barrier(double f, const VectorXd& x, const VectorXd& s, double mu) const {
  double b = 0.0;
  for (int i = 0; i < n_; ++i) {
    if (hxl_[i]) b -= std::log(x[i] - xl_[i]);
    if (hxu_[i]) b -= std::log(xu_[i] - x[i]);
  }
  for (int k = 0; k < mI_; ++k) {
    if (hsl_[k]) b -= std::log(s[k] - sl_[k]);
    if (hsu_[k]) b -= std::log(su_[k] - s[k]);
  }
  return f + mu * b;
}

void Solver::barrier_gradient(const VectorXd& x, const VectorXd& s, double mu, VectorXd& gx, VectorXd& gs) const {
  gx = VectorXd::Zero(n_);
  gs = VectorXd::Zero(mI_);
  for (int i = 0; i < n_; ++i) {
    if (hxl_[i]) gx[i] -= mu / (x[i] - xl_[i]);
    if (hxu_[i]) gx[i] += mu / (xu_[i] - x[i]);
  }
  for (int k = 0; k < mI_; ++k) {
    if (hsl_[k]) gs[k] -= mu / (s[k] - sl_[k]);
    if (hsu_[k]) gs[k] += mu / (su_[k] - s[k]);
  }
}

VectorXd Solver::jt_times(const VectorXd& lam) const {
  VectorXd r = VectorXd::Zero(n_);
  for (size_t k = 0; k < jac_.nnz(); ++k) r[jac_.cols[k]] += jval_[k] * lam[jac_.rows[k]];
  return r;
}


Solver::Errors Solver::errors(double mu) const {
  const auto& w = it_;
  Errors e;
  VectorXd rx = grad_ + jt_times(w.lam) - w.zl + w.zu;
  double dual = rx.lpNorm<Eigen::Infinity>();
  for (int k = 0; k < mI_; ++k) {
    dual = std::max(dual, std::abs(-w.lam[row_of_slack_[k]] - w.vl[k] + w.vu[k]));
  }
  double compl_ = 0.0;
  double zsum = 0.0;
  int nz = 0;
  for (int i = 0; i < n_; ++i) {
    if (hxl_[i]) compl_ = std::max(compl_, std::abs((w.x[i] - xl_[i]) * w.zl[i] - mu)), zsum += w.zl[i], ++nz;
    if (hxu_[i]) compl_ = std::max(compl_, std::abs((xu_[i] - w.x[i]) * w.zu[i] - mu)), zsum += w.zu[i], ++nz;
  }
  for (int k = 0; k < mI_; ++k) {
    if (hsl_[k]) compl_ = std::max(compl_, std::abs((w.s[k] - sl_[k]) * w.vl[k] - mu)), zsum += w.vl[k], ++nz;
    if (hsu_[k]) compl_ = std::max(compl_, std::abs((su_[k] - w.s[k]) * w.vu[k] - mu)), zsum += w.vu[k], ++nz;
  }
  const VectorXd c = residual(g_, w.s);
  e.dual = dual;
  e.compl_ = compl_;
  e.primal = m_ > 0 ? c.lpNorm<Eigen::Infinity>() : 0.0;
  const double lsum = w.lam.lpNorm<1>();
  const double sd = std::max(kSMax, (lsum + zsum) / std::max(1, m_ + nz)) / kSMax;
  const double sc = std::max(kSMax, zsum / std::max(1, nz)) / kSMax;
  e.scaled = std::max({dual / sd, e.primal, compl_ / sc});
  double viol = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double gi = g_[i];
    double r = 0.0;
    if (gi < gl0_[i]) r = gl0_[i] - gi;
    if (gi > gu0_[i]) r = gi - gu0_[i];
    viol = std::max(viol, r * weights_[i]);
  }
  for (int i = 0; i < n_; ++i) {
    if (w.x[i] < xl0_[i]) viol = std::max(viol, xl0_[i] - w.x[i]);
    if (w.x[i] > xu0_[i]) viol = std::max(viol, w.x[i] - xu0_[i]);
  }
  e.viol = viol;
  return e;
}

bool Solver::factor(const VectorXd& hx, const VectorXd& hs, double delta_c, bool low_rank) {
  std::vector<double> h(n_), d(m_);
  for (int i = 0; i < n_; ++i) h[i] = hx[i];
  for (int i = 0; i < m_; ++i) {
    const int k = slack_of_row_[i];
    d[i] = delta_c + (k < 0 ? 0.0 : 1.0 / hs[k]);
  }
  std::vector<double> jv(jval_.data(), jval_.data() + jval_.size());
  if (low_rank && lbfgs_.pairs() > 0) {
    kkt_.set_low_rank(lbfgs_.V(), lbfgs_.C());
  } else {
    kkt_.clear_low_rank();
  }
  return kkt_.factorize(h, jv, d);
}

bool Solver::solve_direction(const VectorXd& hs, const VectorXd& rx, const VectorXd& rs, const VectorXd& rc,
                             VectorXd& dx, VectorXd& ds, VectorXd& dlam) {
  VectorXd rhs(n_ + m_), sol;
  rhs.head(n_) = rx;
  for (int i = 0; i < m_; ++i) {
    const int k = slack_of_row_[i];
    rhs[n_ + i] = rc[i] + (k < 0 ? 0.0 : rs[k] / hs[k]);
  }
  if (!kkt_.solve(rhs, sol)) return false;
  dx = sol.head(n_);
  dlam = sol.tail(m_);
  ds.resize(mI_);
  for (int k = 0; k < mI_; ++k) ds[k] = (rs[k] + dlam[row_of_slack_[k]]) / hs[k];
  return true;
}

void Solver::least_squares_multipliers() {
  auto& w = it_;
  if (m_ == 0) return;
  VectorXd hx = VectorXd::Ones(n_), hs = VectorXd::Ones(mI_);
  VectorXd rx = -(grad_ - w.zl + w.zu);
  VectorXd rs(mI_);
  for (int k = 0; k < mI_; ++k) rs[k] = -(-w.vl[k] + w.vu[k]);
  VectorXd rc = VectorXd::Zero(m_);
  VectorXd dx, ds, lam;
  bool ok = factor(hx, hs, 0.0, false) && solve_direction(hs, rx, rs, rc, dx, ds, lam);
  if (!ok) ok = factor(hx, hs, 1e-8, false) && solve_direction(hs, rx, rs, rc, dx, ds, lam);
  if (ok && lam.lpNorm<Eigen::Infinity>() <= 1e3) {
    w.lam = lam;
  } else {
    w.lam.setZero();
  }
}

double Solver::fraction_to_boundary(const VectorXd& v, const VectorXd& dv, const VectorXd& lo, const VectorXd& hi,
                                    const std::vector<char>& hl, const std::vector<char>& hu, double tau) const {
  double a = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    if (hl[i] && dv[i] < 0.0) a = std::min(a, -tau * (v[i] - lo[i]) / dv[i]);
    if (hu[i] && dv[i] > 0.0) a = std::min(a, tau * (hi[i] - v[i]) / dv[i]);
  }
  return a;
}

double Solver::fraction_to_boundary_dual(const VectorXd& z, const VectorXd& dz, const std::vector<char>& has,
                                         double tau) const {
  double a = 1.0;
  for (int i = 0; i < z.size(); ++i) {
    if (has[i] && dz[i] < 0.0) a = std::min(a, -tau * z[i] / dz[i]);
  }
  return a;
}

void Solver::safeguard_duals() {
  auto& w = it_;
  auto clip = [&](double& z, double slack) {
    const double c = mu_ / slack;
    z = std::max(std::min(z, kKappaSigma * c), c / kKappaSigma);
  };
  for (int i = 0; i < n_; ++i) {
    if (hxl_[i]) clip(w.zl[i], w.x[i] - xl_[i]);
    if (hxu_[i]) clip(w.zu[i], xu_[i] - w.x[i]);
  }
  for (int k = 0; k < mI_; ++k) {
    if (hsl_[k]) clip(w.vl[k], w.s[k] - sl_[k]);
    if (hsu_[k]) clip(w.vu[k], su_[k] - w.s[k]);
  }
}

bool Solver::filter_acceptable(double th, double ph) const {
  for (const auto& [ft, fp] : filter_) {
    if (th >= ft && ph >= fp) return false;
  }
  return true;
}

void Solver::filter_add(double th, double ph) {
  const double ft = (1.0 - kGammaTheta) * th;
  const double fp = ph - kGammaPhi * th;
  std::erase_if(filter_, [&](const auto& e) { return e.first >= ft && e.second >= fp; });
  filter_.emplace_back(ft, fp);
}

void Solver::record(char kind, double step, double a_du, double a_pr, int trials) {
  const Errors e = errors(mu_);
  IterationRecord r;
  r.iter = iter_;
  r.objective = f_;
  r.inf_pr = e.primal;
  r.inf_du = e.dual;
  r.mu = mu_;
  r.step_norm = step;
  r.alpha_du = a_du;
  r.alpha_pr = a_pr;
  r.ls_trials = trials;
  r.kind = kind;
  sol_.log.push_back(r);
  if (o_.print) {
    std::printf("%5d%c %+.8e %.2e %.2e %5.1f %.2e %.2e %.2e %d\n", r.iter, kind, r.objective, r.inf_pr, r.inf_du,
                std::log10(mu_), step, a_du, a_pr, trials);
    std::fflush(stdout);
  }
}

bool Solver::out_of_time() const {
  if (o_.max_seconds <= 0.0) return false;
  const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  return el > o_.max_seconds;
}

// Feasibility restoration: Gauss-Newton with Levenberg-Marquardt damping on
// 1/2 |c|^2 plus a proximity term and a barrier on the bounds.
RestoResult Solver::restoration() {
  auto& w = it_;
  VectorXd c = residual(g_, w.s);
  const double theta_r = theta(c);
  const VectorXd xr = w.x, sr = w.s;
  VectorXd dxr(n_), dsr(mI_);
  for (int i = 0; i < n_; ++i) dxr[i] = std::min(1.0, 1.0 / std::max(kEps, std::abs(xr[i])));
  for (int k = 0; k < mI_; ++k) dsr[k] = std::min(1.0, 1.0 / std::max(kEps, std::abs(sr[k])));
  const double mu_r0 = 1e-3 * std::max(mu_, c.lpNorm<Eigen::Infinity>());
  double mu_r = mu_r0;
  // Proximity weight shrinks with the restoration barrier.
  double rho = 1e-3 * std::sqrt(mu_);
  double nu = 1e-8;

  auto merit = [&](const VectorXd& cc, const VectorXd& x, const VectorXd& s) {
    double v = 0.5 * cc.squaredNorm();
    v += 0.5 * rho * (dxr.cwiseProduct(x - xr).squaredNorm() + dsr.cwiseProduct(s - sr).squaredNorm());
    return barrier(v, x, s, mu_r);
  };

  for (int k = 0; k < 500; ++k) {
    if (iter_ >= o_.max_iter || out_of_time()) return RestoResult::Limit;
    // gradients
    VectorXd jtc = jt_times(c);
    VectorXd cs(mI_);
    for (int q = 0; q < mI_; ++q) cs[q] = -c[row_of_slack_[q]];
    VectorXd bx, bs;
    barrier_gradient(w.x, w.s, mu_r, bx, bs);
    VectorXd px = rho * dxr.cwiseProduct(dxr).cwiseProduct(w.x - xr);
    VectorXd ps = rho * dsr.cwiseProduct(dsr).cwiseProduct(w.s - sr);
    VectorXd gx = jtc + px + bx;
    VectorXd gs = cs + ps + bs;

    // Stationary point of the infeasibility measure with c != 0.
    double pg = 0.0;
    for (int i = 0; i < n_; ++i) pg = std::max(pg, std::abs(w.x[i] - std::clamp(w.x[i] - jtc[i], xl_[i], xu_[i])));
    for (int q = 0; q < mI_; ++q) pg = std::max(pg, std::abs(w.s[q] - std::clamp(w.s[q] - cs[q], sl_[q], su_[q])));
    const double cinf = c.lpNorm<Eigen::Infinity>();
    if (cinf > 1e2 * o_.constr_viol_tol && pg <= 1e-8 * std::max(1.0, cinf) && mu_r <= 1e-9) {
      return RestoResult::Infeasible;
    }
    const double gnorm = std::max(gx.lpNorm<Eigen::Infinity>(), gs.size() ? gs.lpNorm<Eigen::Infinity>() : 0.0);
    if (gnorm <= 10.0 * mu_r && mu_r > 1e-12) {
      mu_r = std::max(1e-12, 0.2 * mu_r);
      rho = 1e-3 * std::sqrt(mu_) * mu_r / mu_r0;
    }

    VectorXd hx(n_), hs(mI_);
    for (int i = 0; i < n_; ++i) {
      double h = rho * dxr[i] * dxr[i] + nu;
      if (hxl_[i]) h += mu_r / ((w.x[i] - xl_[i]) * (w.x[i] - xl_[i]));
      if (hxu_[i]) h += mu_r / ((xu_[i] - w.x[i]) * (xu_[i] - w.x[i]));
      hx[i] = h;
    }
    for (int q = 0; q < mI_; ++q) {
      double h = rho * dsr[q] * dsr[q] + nu;
      if (hsl_[q]) h += mu_r / ((w.s[q] - sl_[q]) * (w.s[q] - sl_[q]));
      if (hsu_[q]) h += mu_r / ((su_[q] - w.s[q]) * (su_[q] - w.s[q]));
      hs[q] = h;
    }
    VectorXd rx = -(px + bx), rs = -(ps + bs), rc = -c;
    VectorXd dx, ds, dl;
    if (!factor(hx, hs, 1.0, false) || !solve_direction(hs, rx, rs, rc, dx, ds, dl)) {
      nu = std::max(1e-4, 100.0 * nu);
      if (nu > 1e10) return RestoResult::Failed;
      continue;
    }
    const double amax = std::min(fraction_to_boundary(w.x, dx, xl_, xu_, hxl_, hxu_, 0.99),
                                 fraction_to_boundary(w.s, ds, sl_, su_, hsl_, hsu_, 0.99));
    const double psi0 = merit(c, w.x, w.s);
    const double slope = gx.dot(dx) + gs.dot(ds);
    double a = amax;
    bool accepted = false;
    Point trial;
    VectorXd xt, st, ct;
    int trials = 0;
    for (; trials < 30; ++trials, a *= 0.5) {
      xt = w.x + a * dx;
      st = w.s + a * ds;
      trial = eval_point(xt);
      if (!trial.ok) continue;
      ct = residual(trial.g, st);
      const double psi = merit(ct, xt, st);
      if (std::isfinite(psi) && psi <= psi0 + kEta * a * std::min(slope, 0.0)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      nu = std::max(1e-4, 100.0 * nu);
      if (nu > 1e10) return RestoResult::Failed;
      continue;
    }
    nu = std::max(1e-12, 0.1 * nu);
    w.x = xt;
    w.s = st;
    f_ = trial.f;
    g_ = trial.g;
    c = ct;
    ++iter_;
    if (!eval_derivatives(w.x)) return RestoResult::Failed;
    record('r', std::max(dx.lpNorm<Eigen::Infinity>(), ds.size() ? ds.lpNorm<Eigen::Infinity>() : 0.0), 0.0, a,
           trials + 1);
    const double th = theta(c);
    if (th <= 0.9 * theta_r || th <= 1e-2 * o_.constr_viol_tol) {
      const double ph = barrier(f_, w.x, w.s, mu_);
      if (std::isfinite(ph) && filter_acceptable(th, ph)) return RestoResult::Success;
    }
  }
  return RestoResult::Failed;
}

Solution Solver::run() {
  t0_ = std::chrono::steady_clock::now();
  auto finish = [&](Status st, const std::string& msg) {
    sol_.status = st;
    sol_.message = msg;
    sol_.x.assign(it_.x.data(), it_.x.data() + it_.x.size());
    sol_.g.assign(g_.data(), g_.data() + g_.size());
    sol_.objective = f_;
    sol_.lambda.assign(it_.lam.data(), it_.lam.data() + it_.lam.size());
    sol_.z_lower.assign(it_.zl.data(), it_.zl.data() + it_.zl.size());
    sol_.z_upper.assign(it_.zu.data(), it_.zu.data() + it_.zu.size());
    if (g_.size() == m_ && grad_.size() == n_) {
      const Errors e = errors(0.0);
      sol_.constraint_violation = e.viol;
      sol_.dual_infeasibility = e.dual;
      sol_.complementarity = e.compl_;
    }
    sol_.iterations = iter_;
    sol_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    return sol_;
  };

  std::string msg;
  it_.x = VectorXd::Zero(n_);
  if (!setup_bounds(msg)) {
    g_.resize(0);
    return finish(Status::Infeasible, msg);
  }
  P_.initial_point(it_.x.data());
  push_inside(it_.x, xl_, xu_, hxl_, hxu_);
  Point p0 = eval_point(it_.x);
  if (!p0.ok) return finish(Status::Error, "evaluation failed at the initial point");
  f_ = p0.f;
  g_ = p0.g;
  if (!eval_derivatives(it_.x)) return finish(Status::Error, "derivative evaluation failed: " + eval_error_);

  auto& w = it_;
  w.s.resize(mI_);
  for (int k = 0; k < mI_; ++k) w.s[k] = g_[row_of_slack_[k]];
  push_inside(w.s, sl_, su_, hsl_, hsu_);
  w.zl = VectorXd::Zero(n_);
  w.zu = VectorXd::Zero(n_);
  w.vl = VectorXd::Zero(mI_);
  w.vu = VectorXd::Zero(mI_);
  for (int i = 0; i < n_; ++i) {
    if (hxl_[i]) w.zl[i] = 1.0;
    if (hxu_[i]) w.zu[i] = 1.0;
  }
  for (int k = 0; k < mI_; ++k) {
    if (hsl_[k]) w.vl[k] = 1.0;
    if (hsu_[k]) w.vu[k] = 1.0;
  }
  w.lam = VectorXd::Zero(m_);
  least_squares_multipliers();
  mu_ = o_.mu_init;

  const double th0 = theta(residual(g_, w.s));
  theta_max_ = 1e4 * std::max(1.0, th0);
  theta_min_ = 1e-4 * std::max(1.0, th0);

  int acceptable_count = 0;
  bool force_mu_update = false;
  double delta_c_last = 0.0;

  while (true) {
    Errors e0 = errors(0.0);
    if (iter_ == 0 && sol_.log.empty()) record(' ', 0.0, 0.0, 0.0, 0);
    if (e0.scaled <= o_.tol && e0.dual <= o_.dual_inf_tol && e0.viol <= o_.constr_viol_tol &&
        e0.compl_ <= o_.compl_inf_tol) {
      return finish(Status::Optimal, "converged");
    }
    if (o_.acceptable_iter > 0 && e0.scaled <= o_.acceptable_tol && e0.viol <= o_.acceptable_constr_viol_tol) {
      if (++acceptable_count >= o_.acceptable_iter) return finish(Status::Acceptable, "acceptable level reached");
    } else {
      acceptable_count = 0;
    }
    if (iter_ >= o_.max_iter) return finish(Status::MaxIterations, "iteration limit");
    if (out_of_time()) return finish(Status::MaxIterations, "time limit");

    // Barrier parameter update.
    const double mu_floor = std::min(o_.mu_min, 0.1 * o_.tol);
    while (mu_ > mu_floor && (force_mu_update || errors(mu_).scaled <= kKappaEps * mu_)) {
      const double next = std::max(mu_floor, std::min(o_.mu_linear_decrease * mu_,
                                                      std::pow(mu_, o_.mu_superlinear_power)));
      force_mu_update = false;
      if (next >= mu_) break;
      mu_ = next;
      filter_.clear();
    }

    // Newton system.
    VectorXd sx = VectorXd::Zero(n_), ss = VectorXd::Zero(mI_);
    for (int i = 0; i < n_; ++i) {
      if (hxl_[i]) sx[i] += w.zl[i] / (w.x[i] - xl_[i]);
      if (hxu_[i]) sx[i] += w.zu[i] / (xu_[i] - w.x[i]);
    }
    for (int k = 0; k < mI_; ++k) {
      if (hsl_[k]) ss[k] += w.vl[k] / (w.s[k] - sl_[k]);
      if (hsu_[k]) ss[k] += w.vu[k] / (su_[k] - w.s[k]);
    }
    VectorXd hx = sx.array() + lbfgs_.sigma();
    VectorXd hs = ss;
    for (int k = 0; k < mI_; ++k) hs[k] = std::max(hs[k], 1e-20);
    VectorXd bgx, bgs;
    barrier_gradient(w.x, w.s, mu_, bgx, bgs);
    VectorXd gphi_x = grad_ + bgx;
    VectorXd gphi_s = bgs;
    VectorXd rx = -(gphi_x + jt_times(w.lam));
    VectorXd rs(mI_);
    for (int k = 0; k < mI_; ++k) rs[k] = -(gphi_s[k] - w.lam[row_of_slack_[k]]);
    const VectorXd c = residual(g_, w.s);
    VectorXd rc = -c;

    VectorXd dx, ds, dlam;
    bool ok = false;
    double delta_c = 0.0;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      if (attempt == 1) delta_c = delta_c_last > 0.0 ? delta_c_last : 1e-8 * std::pow(mu_, 0.25);
      if (attempt > 1) delta_c *= 100.0;
      ok = factor(hx, hs, delta_c, true) && solve_direction(hs, rx, rs, rc, dx, ds, dlam);
    }
    delta_c_last = delta_c > 0.0 ? delta_c : 0.0;
    if (!ok) return finish(Status::Error, "linear system breakdown");

    // Bound multiplier steps.
    auto dual_steps = [&](const VectorXd& ddx, const VectorXd& dds, VectorXd& dzl, VectorXd& dzu, VectorXd& dvl,
                          VectorXd& dvu) {
      dzl = VectorXd::Zero(n_);
      dzu = VectorXd::Zero(n_);
      dvl = VectorXd::Zero(mI_);
      dvu = VectorXd::Zero(mI_);
      for (int i = 0; i < n_; ++i) {
        if (hxl_[i]) {
          const double sl = w.x[i] - xl_[i];
          dzl[i] = mu_ / sl - w.zl[i] - w.zl[i] / sl * ddx[i];
        }
        if (hxu_[i]) {
          const double su = xu_[i] - w.x[i];
          dzu[i] = mu_ / su - w.zu[i] + w.zu[i] / su * ddx[i];
        }
      }
      for (int k = 0; k < mI_; ++k) {
        if (hsl_[k]) {
          const double sl = w.s[k] - sl_[k];
          dvl[k] = mu_ / sl - w.vl[k] - w.vl[k] / sl * dds[k];
        }
        if (hsu_[k]) {
          const double su = su_[k] - w.s[k];
          dvu[k] = mu_ / su - w.vu[k] + w.vu[k] / su * dds[k];
        }
      }
    };
    VectorXd dzl, dzu, dvl, dvu;
    dual_steps(dx, ds, dzl, dzu, dvl, dvu);

    const double tau = std::max(0.99, 1.0 - mu_);
    const double amax = std::min(fraction_to_boundary(w.x, dx, xl_, xu_, hxl_, hxu_, tau),
                                 fraction_to_boundary(w.s, ds, sl_, su_, hsl_, hsu_, tau));
    const double az = std::min({fraction_to_boundary_dual(w.zl, dzl, hxl_, tau),
                                fraction_to_boundary_dual(w.zu, dzu, hxu_, tau),
                                fraction_to_boundary_dual(w.vl, dvl, hsl_, tau),
                                fraction_to_boundary_dual(w.vu, dvu, hsu_, tau)});

    const double th = theta(c);
    const double ph = barrier(f_, w.x, w.s, mu_);
    const double slope = gphi_x.dot(dx) + gphi_s.dot(ds);
    const double step_norm = std::max(dx.lpNorm<Eigen::Infinity>(), ds.size() ? ds.lpNorm<Eigen::Infinity>() : 0.0);

    // Tiny step: accept without a line search.
    double rel = 0.0;
    for (int i = 0; i < n_; ++i) rel = std::max(rel, std::abs(dx[i]) / (1.0 + std::abs(w.x[i])));
    for (int k = 0; k < mI_; ++k) rel = std::max(rel, std::abs(ds[k]) / (1.0 + std::abs(w.s[k])));
    const bool tiny = rel < 10.0 * kEps && th <= 1e-2 * o_.constr_viol_tol;

    double alpha = amax;
    bool accepted = false;
    bool armijo_step = false;
    char kind = tiny ? 't' : ' ';
    int trials = 0;
    VectorXd xt, st, dlam_used = dlam;
    Point trial;

    if (tiny) {
      xt = w.x + amax * dx;
      st = w.s + amax * ds;
      trial = eval_point(xt);
      accepted = trial.ok;
      force_mu_update = true;
    } else {
      double alpha_min;
      if (slope < 0.0) {
        alpha_min = kGammaTheta;
        alpha_min = std::min(alpha_min, kGammaPhi * th / -slope);
        if (th <= theta_min_) alpha_min = std::min(alpha_min, kDelta * std::pow(th, kSTheta) / std::pow(-slope, kSPhi));
        alpha_min *= kGammaAlpha;
      } else {
        alpha_min = kGammaAlpha * kGammaTheta;
      }
      auto test = [&](double a, const Point& pt, const VectorXd& xx, const VectorXd& sx_, bool& armijo) {
        armijo = false;
        if (!pt.ok) return false;
        const double th_t = theta(residual(pt.g, sx_));
        const double ph_t = barrier(pt.f, xx, sx_, mu_);
        if (!std::isfinite(ph_t) || th_t > theta_max_) return false;
        if (!filter_acceptable(th_t, ph_t)) return false;
        const bool switching = slope < 0.0 && a * std::pow(-slope, kSPhi) > kDelta * std::pow(th, kSTheta);
        if (th <= theta_min_ && switching) {
          armijo = ph_t <= ph + kEta * a * slope;
          return armijo;
        }
        return th_t <= (1.0 - kGammaTheta) * th || ph_t <= ph - kGammaPhi * th;
      };

      while (alpha >= alpha_min) {
        xt = w.x + alpha * dx;
        st = w.s + alpha * ds;
        trial = eval_point(xt);
        ++trials;
        if (test(alpha, trial, xt, st, armijo_step)) {
          accepted = true;
          break;
        }
        // Second-order correction on the first trial.
        if (trials == 1 && trial.ok && theta(residual(trial.g, st)) >= th && m_ > 0) {
          VectorXd csoc = alpha * c + residual(trial.g, st);
          double th_old = th;
          double a_soc = alpha;
          for (int p = 0; p < kMaxSoc; ++p) {
            VectorXd dxs, dss, dls;
            if (!solve_direction(hs, rx, rs, -csoc, dxs, dss, dls)) break;
            a_soc = std::min(fraction_to_boundary(w.x, dxs, xl_, xu_, hxl_, hxu_, tau),
                             fraction_to_boundary(w.s, dss, sl_, su_, hsl_, hsu_, tau));
            VectorXd xs = w.x + a_soc * dxs, ss2 = w.s + a_soc * dss;
            Point ps = eval_point(xs);
            if (!ps.ok) break;
            const double th_soc = theta(residual(ps.g, ss2));
            bool arm = false;
            if (test(a_soc, ps, xs, ss2, arm)) {
              // keep the switching decision tied to the original direction
              accepted = true;
              armijo_step = arm;
              xt = xs;
              st = ss2;
              trial = ps;
              dx = dxs;
              ds = dss;
              dlam_used = dls;
              alpha = a_soc;
              kind = 'h';
              dual_steps(dx, ds, dzl, dzu, dvl, dvu);
              break;
            }
            if (th_soc > kKappaSoc * th_old) break;
            th_old = th_soc;
            csoc = a_soc * csoc + residual(ps.g, ss2);
          }
          if (accepted) break;
        }
        alpha *= 0.5;
      }
    }

    if (!accepted) {
      if (lbfgs_.pairs() > 0) {
        // Curvature model failed; retry with a fresh one.
        lbfgs_.reset();
        continue;
      }
      filter_add(th, ph);
      const RestoResult rr = restoration();
      if (rr == RestoResult::Infeasible) return finish(Status::Infeasible, "converged to a point of local infeasibility");
      if (rr == RestoResult::Limit) return finish(Status::MaxIterations, "limit reached in restoration");
      if (rr == RestoResult::Failed) return finish(Status::Error, "restoration failed");
      least_squares_multipliers();
      for (int i = 0; i < n_; ++i) {
        if (hxl_[i]) w.zl[i] = std::min(w.zl[i], 1e3 * mu_ / (w.x[i] - xl_[i]));
        if (hxu_[i]) w.zu[i] = std::min(w.zu[i], 1e3 * mu_ / (xu_[i] - w.x[i]));
      }
      for (int k = 0; k < mI_; ++k) {
        if (hsl_[k]) w.vl[k] = std::min(w.vl[k], 1e3 * mu_ / (w.s[k] - sl_[k]));
        if (hsu_[k]) w.vu[k] = std::min(w.vu[k], 1e3 * mu_ / (su_[k] - w.s[k]));
      }
      safeguard_duals();
      lbfgs_.reset();
      continue;
    }

    {
      const bool switching = slope < 0.0 && alpha * std::pow(-slope, kSPhi) > kDelta * std::pow(th, kSTheta);
      if (!(switching && armijo_step)) filter_add(th, ph);
    }

    // Accept.
    const VectorXd x_old = w.x;
    const VectorXd grad_old = grad_;
    VectorXd jval_old = jval_;
    w.x = xt;
    w.s = st;
    w.lam += alpha * dlam_used;
    w.zl += az * dzl;
    w.zu += az * dzu;
    w.vl += az * dvl;
    w.vu += az * dvu;
    f_ = trial.f;
    g_ = trial.g;
    if (!eval_derivatives(w.x)) return finish(Status::Error, "derivative evaluation failed: " + eval_error_);
    safeguard_duals();
    ++iter_;

    // Quasi-Newton pair on the Lagrangian gradient with the new multipliers.
    {
      VectorXd sk = w.x - x_old;
      VectorXd jt_new = jt_times(w.lam);
      jval_.swap(jval_old);
      VectorXd jt_old = jt_times(w.lam);
      jval_.swap(jval_old);
      VectorXd yk = (grad_ - grad_old) + (jt_new - jt_old);
      lbfgs_.update(sk, yk);
    }
    record(kind, step_norm * alpha, az, alpha, trials);
  }
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  Solver s(problem, options);
  return s.run();
}

}  // namespace laptime::nlp
