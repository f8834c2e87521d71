#pragma once

#include <deque>

#include <Eigen/Dense>

namespace laptime::nlp {

// Compact limited-memory BFGS approximation B = sigma*I + V*C*V'.
class LbfgsMatrix {
 public:
  LbfgsMatrix(int n, int memory);

  void reset();
  // Returns false when the pair fails the curvature test and is skipped.
  bool update(const Eigen::VectorXd& s, const Eigen::VectorXd& y);

  int pairs() const { return static_cast<int>(s_.size()); }
  double sigma() const { return sigma_; }
  const Eigen::MatrixXd& V() const { return v_; }
  const Eigen::MatrixXd& C() const { return c_; }
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

 private:
  void rebuild();

  int n_;
  int memory_;
  double sigma_ = 1.0;
  std::deque<Eigen::VectorXd> s_, y_;
  Eigen::MatrixXd v_, c_;
};

}  // namespace laptime::nlp
