#include "laptime/nlp/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace laptime::nlp {

LbfgsMatrix::LbfgsMatrix(int n, int memory) : n_(n), memory_(memory) { reset(); }

void LbfgsMatrix::reset() {
  s_.clear();
  y_.clear();
  sigma_ = 1.0;
  v_.resize(n_, 0);
  c_.resize(0, 0);
}

bool LbfgsMatrix::update(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
  const double sy = s.dot(y);
  const double ss = s.squaredNorm();
  if (!(sy > std::sqrt(std::numeric_limits<double>::epsilon()) * std::sqrt(ss) * y.norm()) || ss == 0.0) {
    return false;
  }
  if (memory_ <= 0) return false;
  if (static_cast<int>(s_.size()) == memory_) {
    s_.pop_front();
    y_.pop_front();
  }
  s_.push_back(s);
  y_.push_back(y);
  sigma_ = std::clamp(sy / ss, 1e-8, 1e8);
  rebuild();
  return true;
}

void LbfgsMatrix::rebuild() {
  const int k = pairs();
  Eigen::MatrixXd S(n_, k), Y(n_, k);
  for (int i = 0; i < k; ++i) {
    S.col(i) = s_[i];
    Y.col(i) = y_[i];
  }
  const Eigen::MatrixXd SY = S.transpose() * Y;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  M.topLeftCorner(k, k) = sigma_ * S.transpose() * S;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      M(i, k + j) = SY(i, j);
      M(k + j, i) = SY(i, j);
    }
    M(k + i, k + i) = -SY(i, i);
  }
  v_.resize(n_, 2 * k);
  v_.leftCols(k) = sigma_ * S;
  v_.rightCols(k) = Y;
  c_ = -M.fullPivLu().inverse();
}

Eigen::VectorXd LbfgsMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r = sigma_ * x;
  if (pairs() > 0) r += v_ * (c_ * (v_.transpose() * x));
  return r;
}

}  // namespace laptime::nlp
