#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "laptime/nlp/problem.hpp"

namespace laptime::nlp {

void Problem::violation_weights(double* w) const {
  for (int i = 0; i < num_constraints(); ++i) w[i] = 1.0;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Acceptable: return "acceptable";
    case Status::MaxIterations: return "max-iterations";
    case Status::Infeasible: return "infeasible";
    case Status::Error: return "error";
  }
  return "error";
}

void write_log_csv(const std::vector<IterationRecord>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iter,objective,inf_pr,inf_du,mu,step_norm,alpha_du,alpha_pr,ls_trials,kind\n";
  char buf[256];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,%d,%c\n", r.iter, r.objective, r.inf_pr,
                  r.inf_du, r.mu, r.step_norm, r.alpha_du, r.alpha_pr, r.ls_trials, r.kind == ' ' ? '-' : r.kind);
    out << buf;
  }
}

}  // namespace laptime::nlp
