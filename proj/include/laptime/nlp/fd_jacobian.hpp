#pragma once

#include <functional>
#include <vector>

#include "laptime/nlp/problem.hpp"

namespace laptime::nlp {

using VectorFunction = std::function<void(const double* x, double* out)>;

// Column groups with disjoint row sets, so one perturbation per group
// recovers every column in it.
struct ColumnColoring {
  int num_colors = 0;
  std::vector<int> color;                 // per column
  std::vector<std::vector<int>> columns;  // per color
};

ColumnColoring color_columns(int n, int m, const Sparsity& pattern);

// Central-difference step for a variable value.
inline double fd_step(double x) { return std::max(1e-6, 1e-6 * (x < 0.0 ? -x : x)); }

// Central differences, values in the order of `pattern`. Throws
// EvaluationError naming the perturbed column if the function fails.
void fd_jacobian(const VectorFunction& f, int n, int m, const Sparsity& pattern, const ColumnColoring& coloring,
                 const double* x, double* values);

}  // namespace laptime::nlp
