#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laptime/nlp/problem.hpp"

namespace test_problems {

using laptime::nlp::kInf;
using laptime::nlp::Sparsity;

// Dense problem from lambdas; Jacobian pattern is full.
struct Dense : laptime::nlp::Problem {
  int n = 0, m = 0;
  std::vector<double> xl, xu, gl, gu, x0;
  std::function<double(const double*)> f;
  std::function<void(const double*, double*)> df;
  std::function<void(const double*, double*)> g;
  std::function<void(const double*, double*)> dg;  // row-major m x n

  int num_variables() const override { return n; }
  int num_constraints() const override { return m; }
  void bounds(double* a, double* b, double* c, double* d) const override {
    for (int i = 0; i < n; ++i) a[i] = xl[i], b[i] = xu[i];
    for (int i = 0; i < m; ++i) c[i] = gl[i], d[i] = gu[i];
  }
  void initial_point(double* x) const override {
    for (int i = 0; i < n; ++i) x[i] = x0[i];
  }
  double objective(const double* x) const override { return f(x); }
  void gradient(const double* x, double* out) const override { df(x, out); }
  void constraints(const double* x, double* out) const override {
    if (m) g(x, out);
  }
  Sparsity jacobian_structure() const override {
    Sparsity s;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) s.rows.push_back(i), s.cols.push_back(j);
    return s;
  }
  void jacobian(const double* x, double* v) const override {
    if (m) dg(x, v);
  }
};

struct Qp {
  Dense problem;
  std::vector<double> x_opt;
  double f_opt = 0.0;
};

inline Dense quadratic(std::vector<std::vector<double>> G, std::vector<double> c, std::vector<std::vector<double>> A) {
  Dense p;
  p.n = static_cast<int>(c.size());
  p.m = static_cast<int>(A.size());
  const int n = p.n, m = p.m;
  p.f = [=](const double* x) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      v += c[i] * x[i];
      for (int j = 0; j < n; ++j) v += 0.5 * x[i] * G[i][j] * x[j];
    }
    return v;
  };
  p.df = [=](const double* x, double* out) {
    for (int i = 0; i < n; ++i) {
      out[i] = c[i];
      for (int j = 0; j < n; ++j) out[i] += G[i][j] * x[j];
    }
  };
  p.g = [=](const double* x, double* out) {
    for (int i = 0; i < m; ++i) {
      out[i] = 0.0;
      for (int j = 0; j < n; ++j) out[i] += A[i][j] * x[j];
    }
  };
  p.dg = [=](const double*, double* v) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) v[i * n + j] = A[i][j];
  };
  p.x0.assign(n, 0.0);
  return p;
}

inline std::vector<Qp> qp_battery(const std::string& path) {
  std::ifstream in(path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<Qp> out;
  for (const auto& q : j["instances"]) {
    Qp r;
    r.problem = quadratic(q["G"].get<std::vector<std::vector<double>>>(), q["c"].get<std::vector<double>>(),
                          q["A"].get<std::vector<std::vector<double>>>());
    r.problem.xl = q["x_lower"].get<std::vector<double>>();
    r.problem.xu = q["x_upper"].get<std::vector<double>>();
    r.problem.gl = q["lower"].get<std::vector<double>>();
    for (const auto& u : q["upper"]) r.problem.gu.push_back(u.is_null() ? kInf : u.get<double>());
    r.x_opt = q["x_opt"].get<std::vector<double>>();
    r.f_opt = q["f_opt"].get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

inline Dense rosenbrock() {
  Dense p;
  p.n = 2;
  p.xl = {-2.0, -2.0};
  p.xu = {2.0, 2.0};
  p.x0 = {-1.2, 1.0};
  p.f = [](const double* x) { return (1 - x[0]) * (1 - x[0]) + 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]); };
  p.df = [](const double* x, double* g) {
    g[0] = -2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] * x[0]);
    g[1] = 200 * (x[1] - x[0] * x[0]);
  };
  return p;
}

}  // namespace test_problems
