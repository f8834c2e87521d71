#include "laptime/nlp/kkt_system.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace laptime::nlp {

using SpMat = Eigen::SparseMatrix<double>;

struct KktSystem::Impl {
  SpMat K;   // true values, both triangles
  SpMat Kf;  // factorized copy with floored diagonal pivots
  std::vector<int> h_pos, d_pos, j_pos, jt_pos;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  bool analyzed = false;
  bool factored = false;
  Eigen::MatrixXd V, C;      // low-rank term on the x block
  Eigen::MatrixXd W;         // K0^{-1} [V; 0]
  Eigen::PartialPivLU<Eigen::MatrixXd> small;
};

namespace {

// Smallest pivot magnitude used in the factor. The system is solved against
// the unmodified matrix by iterative refinement.
constexpr double kMinPivot = 1e-10;
constexpr int kRefineSteps = 10;

int position(const SpMat& K, int r, int c) {
  const int* inner = K.innerIndexPtr();
  const int b = K.outerIndexPtr()[c];
  const int e = K.outerIndexPtr()[c + 1];
  const int* it = std::lower_bound(inner + b, inner + e, r);
  if (it == inner + e || *it != r) throw std::logic_error("kkt: entry missing from pattern");
  return static_cast<int>(it - inner);
}

}  // namespace

KktSystem::KktSystem(int n, int m, const Sparsity& jac) : impl_(std::make_unique<Impl>()), n_(n), m_(m) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(n + m + 2 * jac.nnz());
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
  for (int i = 0; i < m; ++i) t.emplace_back(n + i, n + i, 1.0);
  for (size_t k = 0; k < jac.nnz(); ++k) {
    const int r = jac.rows[k];
    const int c = jac.cols[k];
    if (r < 0 || r >= m || c < 0 || c >= n) throw std::invalid_argument("kkt: Jacobian entry out of range");
    t.emplace_back(n + r, c, 1.0);
    t.emplace_back(c, n + r, 1.0);
  }
  SpMat& K = impl_->K;
  K.resize(n + m, n + m);
  K.setFromTriplets(t.begin(), t.end());
  K.makeCompressed();
  if (static_cast<size_t>(K.nonZeros()) != t.size()) throw std::invalid_argument("kkt: duplicate Jacobian entries");
  impl_->h_pos.resize(n);
  impl_->d_pos.resize(m);
  impl_->j_pos.resize(jac.nnz());
  impl_->jt_pos.resize(jac.nnz());
  for (int i = 0; i < n; ++i) impl_->h_pos[i] = position(K, i, i);
  for (int i = 0; i < m; ++i) impl_->d_pos[i] = position(K, n + i, n + i);
  for (size_t k = 0; k < jac.nnz(); ++k) {
    impl_->j_pos[k] = position(K, n + jac.rows[k], jac.cols[k]);
    impl_->jt_pos[k] = position(K, jac.cols[k], n + jac.rows[k]);
  }
  impl_->Kf = K;
}

KktSystem::~KktSystem() = default;

bool KktSystem::factorize(const std::vector<double>& h, const std::vector<double>& jac_values,
                          const std::vector<double>& d) {
  auto& I = *impl_;
  double* val = I.K.valuePtr();
  for (int i = 0; i < n_; ++i) val[I.h_pos[i]] = h[i];
  for (int i = 0; i < m_; ++i) val[I.d_pos[i]] = -d[i];
  for (size_t k = 0; k < jac_values.size(); ++k) {
    val[I.j_pos[k]] = jac_values[k];
    val[I.jt_pos[k]] = jac_values[k];
  }
  std::copy_n(val, I.K.nonZeros(), I.Kf.valuePtr());
  double* fv = I.Kf.valuePtr();
  for (int i = 0; i < n_; ++i) fv[I.h_pos[i]] = std::max(h[i], kMinPivot);
  for (int i = 0; i < m_; ++i) fv[I.d_pos[i]] = -std::max(d[i], kMinPivot);
  if (!I.analyzed) {
    I.ldlt.analyzePattern(I.Kf);
    I.analyzed = true;
  }
  I.ldlt.factorize(I.Kf);
  ++factorizations_;
  I.factored = I.ldlt.info() == Eigen::Success && I.ldlt.vectorD().allFinite();
  if (I.factored && I.V.cols() > 0) set_low_rank(I.V, I.C);
  return I.factored;
}

void KktSystem::solve_sparse(const Eigen::VectorXd& rhs, Eigen::VectorXd& sol) const { sol = impl_->ldlt.solve(rhs); }

void KktSystem::set_low_rank(const Eigen::MatrixXd& V, const Eigen::MatrixXd& C) {
  auto& I = *impl_;
  I.V = V;
  I.C = C;
  const int p = static_cast<int>(V.cols());
  if (p == 0 || !I.factored) return;
  I.W.resize(n_ + m_, p);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_ + m_), w;
  for (int j = 0; j < p; ++j) {
    e.head(n_) = V.col(j);
    solve_sparse(e, w);
    I.W.col(j) = w;
  }
  // G = C^{-1} + U' K0^{-1} U
  Eigen::MatrixXd G = C.fullPivLu().inverse() + V.transpose() * I.W.topRows(n_);
  I.small.compute(G);
}

void KktSystem::clear_low_rank() {
  impl_->V.resize(n_, 0);
  impl_->C.resize(0, 0);
  impl_->W.resize(0, 0);
}

void KktSystem::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const auto& I = *impl_;
  y = I.K * x;
  if (I.V.cols() > 0) y.head(n_) += I.V * (I.C * (I.V.transpose() * x.head(n_)));
}

bool KktSystem::solve(const Eigen::VectorXd& rhs, Eigen::VectorXd& sol) const {
  const auto& I = *impl_;
  if (!I.factored) return false;
  auto once = [&](const Eigen::VectorXd& r, Eigen::VectorXd& x) {
    solve_sparse(r, x);
    if (I.V.cols() > 0) {
      Eigen::VectorXd t = I.V.transpose() * x.head(n_);
      x -= I.W * I.small.solve(t);
    }
  };
  once(rhs, sol);
  Eigen::VectorXd res, corr;
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  double err = 0.0;
  for (int it = 0; it < kRefineSteps; ++it) {
    apply(sol, res);
    res = rhs - res;
    err = res.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(err)) return false;
    if (err <= 1e-12 * scale) break;
    once(res, corr);
    sol += corr;
  }
  if (!sol.allFinite()) return false;
  return err <= 1e-6 * scale;
}

}  // namespace laptime::nlp
