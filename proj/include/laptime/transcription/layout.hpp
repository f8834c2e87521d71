#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

namespace laptime::transcription {

// Decision vector [x_1, u_1, ..., x_N, u_N, t_f, p].
struct Layout {
  int nodes = 0;
  int nx = 0;
  int nu = 0;
  int np = 0;

  int node_width() const { return nx + nu; }
  int size() const { return nodes * node_width() + 1 + np; }
  int state(int k) const { return k * node_width(); }
  int control(int k) const { return k * node_width() + nx; }
  int tf() const { return nodes * node_width(); }
  int param(int i) const { return tf() + 1 + i; }
};

// Node-major states and controls.
struct Trajectory {
  int nodes = 0, nx = 0, nu = 0;
  std::vector<double> x;  // nodes * nx
  std::vector<double> u;  // nodes * nu
  double tf = 0.0;
  std::vector<double> p;

  double* state(int k) { return x.data() + static_cast<size_t>(k) * nx; }
  const double* state(int k) const { return x.data() + static_cast<size_t>(k) * nx; }
  double* control(int k) { return u.data() + static_cast<size_t>(k) * nu; }
  const double* control(int k) const { return u.data() + static_cast<size_t>(k) * nu; }
  double step() const { return tf / (nodes - 1); }
  double time(int k) const { return step() * k; }
};

Layout layout_of(const Trajectory& t);
std::vector<double> pack(const Layout& l, const Trajectory& t);
Trajectory unpack(const Layout& l, const std::vector<double>& y);

using NodeDynamics = std::function<void(const double* x, const double* u, const double* p, double* xdot)>;

// zeta_k = x_{k+1} - x_k - h/2 (f_k + f_{k+1}), (nodes - 1) * nx entries,
// interval-major. Evaluation errors are rethrown naming the node.
std::vector<double> trapezoid_defects(const Trajectory& t, const NodeDynamics& f);

// (N-1) x N stencils: difference rows [-1, 1] and pairwise sums [1, 1].
Eigen::SparseMatrix<double> difference_stencil(int nodes);
Eigen::SparseMatrix<double> pairwise_sum_stencil(int nodes);

}  // namespace laptime::transcription
