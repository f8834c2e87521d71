#include "laptime/cases/runner.hpp"

#include <algorithm>
#include <cmath>

#include "laptime/error.hpp"
#include "laptime/nlp/ipm.hpp"
#include "laptime/transcription/lap_problem.hpp"

namespace laptime::cases {

using namespace vehicle;
using transcription::LapProblem;
using transcription::LapSetup;

GripMetrics grip_metrics(const std::vector<std::array<double, 4>>& fx, const std::vector<std::array<double, 4>>& fy) {
  GripMetrics g;
  if (fx.size() != fy.size()) throw InputError("grip metrics: force histories differ in length");
  if (fx.empty()) return g;
  for (size_t k = 0; k < fx.size(); ++k) {
    double sq = 0.0;
    for (int w = 0; w < 4; ++w) {
      const double f2 = fx[k][w] * fx[k][w] + fy[k][w] * fy[k][w];
      g.per_tire[w] += std::sqrt(f2);
      sq += f2;
    }
    g.total += std::sqrt(sq / 4.0);
  }
  const double n = static_cast<double>(fx.size());
  for (double& v : g.per_tire) v /= n;
  g.total /= n;
  return g;
}

bool DesignEntry::at_bound(double rel) const {
  const double span = std::max(upper - lower, 1e-12);
  return value - lower <= rel * span || upper - value <= rel * span;
}

std::string design_unit(const std::string& name) {
  if (name.rfind("N_b", 0) == 0) return "rpm";
  if (name == "l_f") return "m";
  if (name == "P_r") return "kW";
  if (name.rfind("k_bs", 0) == 0) return "N/m";
  return "-";
}

Inputs load_inputs(const CaseConfig& c) {
  Inputs in;
  in.params = load_vehicle(resolve_path(c, c.vehicle_path));
  if (!c.tire_path.empty()) in.params.tire_path = resolve_path(c, c.tire_path);
  in.tire = load_tire_for(in.params);
  if (!c.track_path.empty()) {
    track::BuildOptions bo;
    bo.spacing = c.track_spacing;
    in.track = track::load_track_csv(resolve_path(c, c.track_path), bo);
  }
  return in;
}

void redistribute_mass(VehicleParams& p, double per_corner) {
  p.m_b -= 4.0 * per_corner;
  for (double& m : p.m_u) m += per_corner;
  if (!(p.m_b > 0.0)) throw InputError("mass redistribution leaves no sprung mass");
  for (double m : p.m_u) {
    if (!(m > 0.0)) throw InputError("mass redistribution leaves a corner without unsprung mass");
  }
}

Design sweep_design(const CaseConfig& c, const VehicleParams& p) {
  if (!c.design_initial) return baseline(p);
  return decode(DesignVector{c.sweep.design, *c.design_initial}, p);
}

namespace {

DesignSpace space_of(const CaseConfig& c, CaseId id, const VehicleParams& p) {
  DesignSpace s = default_design_space(id, p);
  if (c.design_lower) s.lower = *c.design_lower;
  if (c.design_upper) s.upper = *c.design_upper;
  return s;
}

DesignVector start_point(const CaseConfig& c, const DesignSpace& s, const VehicleParams& p) {
  DesignVector v = c.design_initial ? DesignVector{s.id, *c.design_initial} : baseline_design(s.id, p);
  for (size_t i = 0; i < v.values.size(); ++i) v.values[i] = std::clamp(v.values[i], s.lower[i], s.upper[i]);
  return v;
}

double physical_violation(const LapProblem& P, const transcription::Trajectory& t) {
  const std::vector<double> g = P.physical_constraints(t);
  std::vector<double> lo, hi;
  P.physical_constraint_bounds(lo, hi);
  double v = 0.0;
  for (size_t i = 0; i < g.size(); ++i) v = std::max({v, lo[i] - g[i], g[i] - hi[i]});
  const std::vector<double> y = transcription::pack(P.layout(), t);
  for (size_t i = 0; i < y.size(); ++i) v = std::max({v, P.lower()[i] - y[i], y[i] - P.upper()[i]});
  return v;
}

}  // namespace

CaseReport run_case(const CaseConfig& c, const RunOptions& opt) {
  Inputs loaded;
  if (!opt.inputs) {
    validate(c);
    loaded = load_inputs(c);
  }
  const Inputs& in = opt.inputs ? *opt.inputs : loaded;

  LapSetup s;
  s.params = in.params;
  if (opt.modify) opt.modify(s.params);
  validate(s.params);
  s.tire = in.tire;
  s.track = in.track;
  s.nodes = c.nodes;
  s.boundary = c.boundary;
  s.v0 = c.v0;

  CaseReport r;
  r.label = to_string(c.kind);
  if (opt.frozen_design || !is_design_case(c.kind)) {
    s.fixed_design = opt.frozen_design ? *opt.frozen_design : baseline(s.params);
  } else {
    s.space = space_of(c, design_case(c.kind), s.params);
    s.initial_design = start_point(c, *s.space, s.params);
  }

  LapProblem P(s, opt.warm_start);
  const nlp::Solution sol = nlp::solve(P, c.solver);

  r.status = sol.status;
  r.message = sol.message;
  r.iterations = sol.iterations;
  r.seconds = sol.seconds;
  r.log = sol.log;
  r.track_length = s.track.length;
  r.trajectory = P.trajectory(sol.x.data());
  const auto& t = r.trajectory;
  r.tf = t.tf;
  r.kkt = nlp::check_kkt(P, sol);
  r.constraint_violation = physical_violation(P, t);

  const Design d = P.design_of(t.p);
  if (s.space) {
    for (size_t i = 0; i < s.space->names.size(); ++i) {
      const auto& n = s.space->names[i];
      r.design.push_back({n, design_unit(n), t.p[i], s.space->lower[i], s.space->upper[i]});
    }
  }

  const VehicleModel m = P.model_of(t.p);
  r.total_mass = m.total_mass();
  for (int w = 0; w < 4; ++w) {
    const auto& mot = d.motors[w];
    r.powertrain[w] = powertrain_mass(mot.power_kw, mot.base_speed, mot.gear_ratio, s.params.powertrain);
  }
  r.fx.resize(t.nodes);
  r.fy.resize(t.nodes);
  for (int k = 0; k < t.nodes; ++k) {
    Evaluation e;
    try {
      evaluate(m, t.state(k), t.control(k), &s.track, e);
    } catch (const EvaluationError&) {
      continue;
    }
    for (int w = 0; w < 4; ++w) {
      r.fx[k][w] = e.wheel[w].force.fx;
      r.fy[k][w] = e.wheel[w].force.fy;
    }
    const auto env = transcription::envelope_residuals(m, t.state(k), t.control(k));
    for (int w = 0; w < 4; ++w) r.envelope_violation = std::max(r.envelope_violation, env.torque[w]);
  }
  r.grip = grip_metrics(r.fx, r.fy);
  return r;
}

std::vector<CaseReport> run_sweep(const CaseConfig& c) {
  if (c.kind != CaseKind::SweepMass && c.kind != CaseKind::SweepInertia) {
    throw InputError(to_string(c.kind) + " is not a sweep");
  }
  validate(c);
  const Inputs in = load_inputs(c);
  const Design frozen = sweep_design(c, in.params);

  std::vector<CaseReport> out;
  std::optional<transcription::Trajectory> warm;
  for (double v : c.sweep.values) {
    RunOptions opt;
    opt.inputs = &in;
    opt.frozen_design = frozen;
    opt.warm_start = warm;
    if (c.kind == CaseKind::SweepInertia) {
      opt.modify = [v](VehicleParams& p) { p.j_u.fill(v); };
    } else {
      opt.modify = [v](VehicleParams& p) { redistribute_mass(p, v); };
    }
    CaseReport r;
    try {
      r = run_case(c, opt);
    } catch (const std::exception& e) {
      r.status = nlp::Status::Error;
      r.message = e.what();
    }
    r.label = to_string(c.kind) + " " + std::to_string(v);
    r.sweep_value = v;
    if (r.converged()) warm = r.trajectory;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace laptime::cases
