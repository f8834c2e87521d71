#include "laptime/transcription/layout.hpp"

#include <string>

#include "laptime/error.hpp"

namespace laptime::transcription {

Layout layout_of(const Trajectory& t) { return {t.nodes, t.nx, t.nu, static_cast<int>(t.p.size())}; }

std::vector<double> pack(const Layout& l, const Trajectory& t) {
  if (t.nodes != l.nodes || t.nx != l.nx || t.nu != l.nu || static_cast<int>(t.p.size()) != l.np ||
      t.x.size() != static_cast<size_t>(l.nodes) * l.nx || t.u.size() != static_cast<size_t>(l.nodes) * l.nu)
    throw InputError("pack: trajectory shape does not match the layout");
  std::vector<double> y(l.size());
  for (int k = 0; k < l.nodes; ++k) {
    for (int i = 0; i < l.nx; ++i) y[l.state(k) + i] = t.state(k)[i];
    for (int i = 0; i < l.nu; ++i) y[l.control(k) + i] = t.control(k)[i];
  }
  y[l.tf()] = t.tf;
  for (int i = 0; i < l.np; ++i) y[l.param(i)] = t.p[i];
  return y;
}

Trajectory unpack(const Layout& l, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != l.size())
    throw InputError("unpack: vector has " + std::to_string(y.size()) + " entries, layout needs " +
                     std::to_string(l.size()));
  Trajectory t;
  t.nodes = l.nodes;
  t.nx = l.nx;
  t.nu = l.nu;
  t.x.resize(static_cast<size_t>(l.nodes) * l.nx);
  t.u.resize(static_cast<size_t>(l.nodes) * l.nu);
  for (int k = 0; k < l.nodes; ++k) {
    for (int i = 0; i < l.nx; ++i) t.state(k)[i] = y[l.state(k) + i];
    for (int i = 0; i < l.nu; ++i) t.control(k)[i] = y[l.control(k) + i];
  }
  t.tf = y[l.tf()];
  t.p.assign(y.begin() + l.param(0), y.end());
  return t;
}

std::vector<double> trapezoid_defects(const Trajectory& t, const NodeDynamics& f) {
  if (t.nodes < 2) throw InputError("defects need at least two nodes");
  if (!(t.tf > 0.0)) throw InputError("defects need t_f > 0");
  std::vector<double> fk(static_cast<size_t>(t.nodes) * t.nx);
  for (int k = 0; k < t.nodes; ++k) {
    try {
      f(t.state(k), t.control(k), t.p.data(), fk.data() + static_cast<size_t>(k) * t.nx);
    } catch (const EvaluationError& e) {
      throw EvaluationError("node " + std::to_string(k) + ": " + e.what());
    }
  }
  const double h = t.step();
  std::vector<double> z(static_cast<size_t>(t.nodes - 1) * t.nx);
  for (int k = 0; k + 1 < t.nodes; ++k)
    for (int i = 0; i < t.nx; ++i) {
      const size_t a = static_cast<size_t>(k) * t.nx + i, b = a + t.nx;
      z[a] = t.x[b] - t.x[a] - 0.5 * h * (fk[a] + fk[b]);
    }
  return z;
}

namespace {

Eigen::SparseMatrix<double> two_band(int nodes, double left, double right) {
  Eigen::SparseMatrix<double> s(nodes - 1, nodes);
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k + 1 < nodes; ++k) {
    trip.emplace_back(k, k, left);
    trip.emplace_back(k, k + 1, right);
  }
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

}  // namespace

Eigen::SparseMatrix<double> difference_stencil(int nodes) { return two_band(nodes, -1.0, 1.0); }
Eigen::SparseMatrix<double> pairwise_sum_stencil(int nodes) { return two_band(nodes, 1.0, 1.0); }

}  // namespace laptime::transcription
