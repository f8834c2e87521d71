#pragma once

#include <limits>
#include <string>
#include <vector>

namespace laptime::nlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Coordinate list of structurally nonzero Jacobian entries.
struct Sparsity {
  std::vector<int> rows;
  std::vector<int> cols;
  size_t nnz() const { return rows.size(); }
};

// min f(x)  s.t.  g_l <= g(x) <= g_u,  x_l <= x <= x_u.
// Rows with g_l == g_u are equalities. Infinite bounds are allowed.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int num_variables() const = 0;
  virtual int num_constraints() const = 0;
  virtual void bounds(double* x_l, double* x_u, double* g_l, double* g_u) const = 0;
  virtual void initial_point(double* x) const = 0;

  virtual double objective(const double* x) const = 0;
  virtual void gradient(const double* x, double* grad) const = 0;
  virtual void constraints(const double* x, double* g) const = 0;
  virtual Sparsity jacobian_structure() const = 0;
  // Values in the order of jacobian_structure().
  virtual void jacobian(const double* x, double* values) const = 0;

  // Per-row factors turning a residual of g into the units in which the
  // constraint tolerance is judged. Default: 1.
  virtual void violation_weights(double* w) const;
};

enum class Status { Optimal, Acceptable, MaxIterations, Infeasible, Error };
std::string to_string(Status s);

struct Options {
  double tol = 1e-3;
  double constr_viol_tol = 1e-7;
  double dual_inf_tol = 1.0;
  double compl_inf_tol = 1e-4;
  double acceptable_tol = 1e-2;
  double acceptable_constr_viol_tol = 1e-4;
  int acceptable_iter = 15;  // 0 disables the acceptable exit
  int max_iter = 3000;
  double max_seconds = 0.0;  // 0: no limit
  double mu_init = 0.1;
  double mu_min = 1e-11;
  double mu_linear_decrease = 0.2;
  double mu_superlinear_power = 1.5;
  double bound_push = 1e-2;
  double bound_frac = 1e-2;
  double bound_relax = 1e-8;
  int lbfgs_memory = 6;
  bool print = false;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double inf_pr = 0.0;
  double inf_du = 0.0;
  double mu = 0.0;
  double step_norm = 0.0;
  double alpha_du = 0.0;
  double alpha_pr = 0.0;
  int ls_trials = 0;
  char kind = ' ';  // 'r' restoration, 'h' second-order correction, 't' tiny step
};

struct Solution {
  Status status = Status::Error;
  std::vector<double> x;
  std::vector<double> g;
  double objective = 0.0;
  double constraint_violation = 0.0;  // weighted inf-norm, bounds on g included
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  // Lagrangian L = f + lambda'g - z_l'(x - x_l) + z_u'(x - x_u).
  std::vector<double> lambda;
  std::vector<double> z_lower;
  std::vector<double> z_upper;
  int iterations = 0;
  double seconds = 0.0;
  std::string message;
  std::vector<IterationRecord> log;
};

// Iteration log as CSV (one header line, one row per iteration).
void write_log_csv(const std::vector<IterationRecord>& log, const std::string& path);

}  // namespace laptime::nlp
