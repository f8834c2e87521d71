#pragma once

#include "laptime/nlp/problem.hpp"

namespace laptime::nlp {

// Primal-dual interior point with a filter line search and a limited-memory
// BFGS Hessian of the Lagrangian. Inequality rows get slack variables; bounds
// on variables and slacks are handled by a logarithmic barrier.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace laptime::nlp
