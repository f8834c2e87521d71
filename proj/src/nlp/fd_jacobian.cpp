#include "laptime/nlp/fd_jacobian.hpp"

#include <algorithm>
#include <exception>

#include "laptime/error.hpp"

namespace laptime::nlp {

ColumnColoring color_columns(int n, int m, const Sparsity& pattern) {
  std::vector<std::vector<int>> rows_of(n), cols_of(m);
  for (size_t k = 0; k < pattern.nnz(); ++k) {
    rows_of[pattern.cols[k]].push_back(pattern.rows[k]);
    cols_of[pattern.rows[k]].push_back(pattern.cols[k]);
  }
  ColumnColoring c;
  c.color.assign(n, -1);
  std::vector<int> mark;
  for (int j = 0; j < n; ++j) {
    // Colors used by columns sharing a row with j.
    for (int r : rows_of[j]) {
      for (int o : cols_of[r]) {
        if (c.color[o] >= 0) {
          if (static_cast<int>(mark.size()) <= c.color[o]) mark.resize(c.color[o] + 1, -1);
          mark[c.color[o]] = j;
        }
      }
    }
    int col = 0;
    while (col < static_cast<int>(mark.size()) && mark[col] == j) ++col;
    c.color[j] = col;
    c.num_colors = std::max(c.num_colors, col + 1);
  }
  c.columns.assign(c.num_colors, {});
  for (int j = 0; j < n; ++j) c.columns[c.color[j]].push_back(j);
  return c;
}

void fd_jacobian(const VectorFunction& f, int n, int m, const Sparsity& pattern, const ColumnColoring& coloring,
                 const double* x, double* values) {
  std::vector<double> xp(x, x + n), fp(m), fm(m);
  // Entries of each column, grouped by column.
  std::vector<std::vector<int>> entries(n);
  for (size_t k = 0; k < pattern.nnz(); ++k) entries[pattern.cols[k]].push_back(static_cast<int>(k));
  for (const auto& group : coloring.columns) {
    auto eval = [&](double sign, std::vector<double>& out) {
      for (int j : group) xp[j] = x[j] + sign * fd_step(x[j]);
      try {
        f(xp.data(), out.data());
      } catch (const std::exception& e) {
        throw EvaluationError("finite differences: evaluation failed perturbing column " +
                              std::to_string(group.front()) + ": " + e.what());
      }
    };
    eval(1.0, fp);
    eval(-1.0, fm);
    for (int j : group) {
      xp[j] = x[j];
      const double h = fd_step(x[j]);
      const double span = (x[j] + h) - (x[j] - h);
      for (int k : entries[j]) values[k] = (fp[pattern.rows[k]] - fm[pattern.rows[k]]) / span;
    }
  }
}

}  // namespace laptime::nlp
