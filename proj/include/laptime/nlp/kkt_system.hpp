#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "laptime/nlp/problem.hpp"

namespace laptime::nlp {

// Augmented system
//   [ diag(h) + V C V'   J' ] [dx]   [r_x]
//   [ J             -diag(d)] [dy] = [r_y]
// The sparse part is factorized by LDL' with the diagonal floored so the
// factor exists without pivoting; iterative refinement recovers the solution
// of the unmodified system. The low-rank term is applied through the
// Sherman-Morrison-Woodbury identity.
class KktSystem {
 public:
  KktSystem(int n, int m, const Sparsity& jac);
  ~KktSystem();

  // False if the factorization is numerically singular.
  bool factorize(const std::vector<double>& h, const std::vector<double>& jac_values, const std::vector<double>& d);
  void set_low_rank(const Eigen::MatrixXd& V, const Eigen::MatrixXd& C);
  void clear_low_rank();

  // False if the solve produced non-finite values or a large residual.
  bool solve(const Eigen::VectorXd& rhs, Eigen::VectorXd& sol) const;

  int size() const { return n_ + m_; }
  int factorizations() const { return factorizations_; }

 private:
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void solve_sparse(const Eigen::VectorXd& rhs, Eigen::VectorXd& sol) const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_, m_;
  int factorizations_ = 0;
};

}  // namespace laptime::nlp
