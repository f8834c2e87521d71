#include "laptime/transcription/lap_problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "laptime/error.hpp"
#include "laptime/nlp/fd_jacobian.hpp"
#include "laptime/transcription/initial_guess.hpp"
#include "laptime/vehicle/powertrain.hpp"

namespace laptime::transcription {

using namespace vehicle;

namespace {

constexpr int kNo = kNx + kNg;  // outputs per node
constexpr int kW = kNx + kNu;   // local columns per node
constexpr double kRpm = 60.0 / (2.0 * std::numbers::pi);
constexpr double kTorqueConst = 9550.0;

const char* kPathKinds[] = {"motor_speed", "base_torque", "power_torque", "load", "kappa", "alpha", "jounce"};
const char* kWheelNames[] = {"fr", "fl", "rr", "rl"};

}  // namespace

std::string to_string(Boundary b) { return b == Boundary::FlyingLap ? "flying" : "standing"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "flying") return Boundary::FlyingLap;
  if (s == "standing") return Boundary::StandingStart;
  throw InputError("unknown boundary mode '" + s + "' (flying|standing)");
}

void path_rows(const VehicleModel& m, const track::Track& t, const Evaluation& e, const double* x, const double* u,
               double* g) {
  for (int w = 0; w < 4; ++w) {
    const auto& o = e.wheel[w];
    const auto& mot = m.design.motors[w];
    const double torque = u[iu::kTorque + w];
    const double rated = kTorqueConst * mot.gear_ratio * mot.power_kw;
    g[pg::kMotorSpeed + w] = o.motor_speed - mot.base_speed * mot.beta;
    g[pg::kBaseTorque + w] = torque - rated / mot.base_speed;
    g[pg::kPowerTorque + w] = (torque * o.motor_speed - rated) / mot.base_speed;
    g[pg::kLoad + w] = o.fz;
    g[pg::kKappa + w] = o.slip.kappa;
    g[pg::kAlpha + w] = o.slip.alpha;
    g[pg::kJounce + w] = o.jounce;
  }
  g[pg::kTrack] = x[ix::kN] / t.width_at(x[ix::kS]);
}

void path_bounds(const VehicleModel& m, double* lo, double* hi) {
  const auto& l = m.params.limits;
  for (int w = 0; w < 4; ++w) {
    for (int base : {pg::kMotorSpeed, pg::kBaseTorque, pg::kPowerTorque}) {
      lo[base + w] = -nlp::kInf;
      hi[base + w] = 0.0;
    }
    lo[pg::kLoad + w] = l.fz_min;
    hi[pg::kLoad + w] = l.fz_max;
    lo[pg::kKappa + w] = -l.kappa_max;
    hi[pg::kKappa + w] = l.kappa_max;
    lo[pg::kAlpha + w] = -l.alpha_max;
    hi[pg::kAlpha + w] = l.alpha_max;
    const double travel = m.axle_of(w).travel_limit;
    lo[pg::kJounce + w] = -travel;
    hi[pg::kJounce + w] = travel;
  }
  lo[pg::kTrack] = -1.0;
  hi[pg::kTrack] = 1.0;
}

EnvelopeResiduals envelope_residuals(const VehicleModel& m, const double* x, const double* u) {
  EnvelopeResiduals r;
  for (int w = 0; w < 4; ++w) {
    const auto& mot = m.design.motors[w];
    const double speed = x[ix::kSpinRate + w] * mot.gear_ratio * kRpm;
    r.speed[w] = speed - mot.base_speed * mot.beta;
    r.torque[w] = u[iu::kTorque + w] - motor_torque_limit(speed, mot.gear_ratio, mot.power_kw, mot.base_speed);
  }
  return r;
}

LapProblem::LapProblem(LapSetup setup, const std::optional<Trajectory>& guess) : setup_(std::move(setup)) {
  auto& s = setup_;
  if (s.nodes < 3) throw InputError("the lap problem needs at least 3 nodes");
  if (s.track.length <= 0.0) throw InputError("track has no length");
  if (s.space) {
    validate(s.initial_design, *s.space);
    if (s.initial_design.id != s.space->id) throw InputError("initial design does not match the design space");
  }
  layout_ = {s.nodes, kNx, kNu, s.space ? static_cast<int>(s.space->names.size()) : 0};
  n_def_ = (s.nodes - 1) * kNx;
  n_path_ = s.nodes * kNg;

  const std::vector<double> p0 = s.space ? s.initial_design.values : std::vector<double>{};
  fixed_model_ = make_model(s.params, s.tire, s.space ? decode(s.initial_design, s.params) : s.fixed_design,
                            s.model_options);
  Trajectory init = guess ? *guess : initial_guess(s.track, fixed_model_, s.nodes, s.v0, p0);
  if (init.nodes != s.nodes || init.nx != kNx || init.nu != kNu) throw InputError("warm start has the wrong shape");
  init.p = p0;
  t_ref_ = s.track.length / s.v0;

  set_bounds();
  setup_rows();

  // Start inside the bounds.
  std::vector<double> y = pack(layout_, init);
  for (size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], lo_[i], hi_[i]);
  y0_ = scale(y);

  row_scale_.assign(m_, 1.0);
  pattern_ = {};
  walk(&pattern_, nullptr, nullptr, nullptr, nullptr);
  std::vector<double> vals(pattern_.nnz());
  raw_jacobian(y0_.data(), vals.data());
  std::vector<double> norm(m_, 0.0);
  for (size_t e = 0; e < vals.size(); ++e) norm[pattern_.rows[e]] = std::max(norm[pattern_.rows[e]], std::abs(vals[e]));
  for (int i = 0; i < m_; ++i) row_scale_[i] = 1.0 / std::max(1.0, norm[i]);
}

void LapProblem::set_bounds() {
  const auto& s = setup_;
  const auto& t = s.track;
  const int n = layout_.size();
  lo_.assign(n, 0.0);
  hi_.assign(n, 0.0);

  const double r0 = s.tire.unloaded_radius();
  double wmax = 0.0;
  for (double w : t.width) wmax = std::max(wmax, w);
  const auto [xmin, xmax] = std::minmax_element(t.x.begin(), t.x.end());
  const auto [ymin, ymax] = std::minmax_element(t.y.begin(), t.y.end());
  const auto [hmin, hmax] = std::minmax_element(t.heading.begin(), t.heading.end());
  const double margin = wmax + 10.0;

  std::array<double, kNx> xl{}, xu{};
  auto set = [&](int i, double a, double b) {
    xl[i] = a;
    xu[i] = b;
  };
  set(ix::kVx, -s.v_max, s.v_max);
  set(ix::kVy, -s.v_max, s.v_max);
  set(ix::kVz, -2.0, 2.0);
  for (int i : {ix::kRollRate, ix::kPitchRate, ix::kYawRate}) set(i, -3.0, 3.0);
  for (int w = 0; w < 4; ++w) {
    set(ix::kWheelVz + w, -3.0, 3.0);
    set(ix::kSpinRate + w, -5.0, s.v_max / (0.8 * r0));
    set(ix::kWheelZ + w, r0 - 0.06, r0 + 0.02);
    set(ix::kSpin + w, -10.0, 1.5 * t.length / (0.8 * r0));
  }
  set(ix::kX, *xmin - margin, *xmax + margin);
  set(ix::kY, *ymin - margin, *ymax + margin);
  set(ix::kZ, fixed_model_.rest.z_body - 0.1, fixed_model_.rest.z_body + 0.1);
  set(ix::kRoll, -0.2, 0.2);
  set(ix::kPitch, -0.2, 0.2);
  set(ix::kYaw, *hmin - std::numbers::pi, *hmax + std::numbers::pi);
  set(ix::kS, -0.02 * t.length, 1.02 * t.length);
  set(ix::kN, -wmax, wmax);
  set(ix::kChi, -1.0, 1.0);

  // Torque cap: the largest base-speed torque any admissible design allows.
  std::array<double, 4> cap{};
  auto take = [&](const Design& d) {
    for (int w = 0; w < 4; ++w) {
      const auto& m = d.motors[w];
      cap[w] = std::max(cap[w], kTorqueConst * m.gear_ratio * m.power_kw / m.base_speed);
    }
  };
  if (s.space) {
    const auto& sp = *s.space;
    for (int corner = 0; corner < 2; ++corner) {
      DesignVector v{sp.id, sp.upper};
      for (size_t i = 0; i < sp.names.size(); ++i) {
        if (sp.names[i].rfind("N_b", 0) == 0) v.values[i] = sp.lower[i];
        if (sp.names[i] == "P_r" && corner == 1) v.values[i] = sp.lower[i];
      }
      take(decode(v, s.params));
    }
  } else {
    take(s.fixed_design);
  }

  for (int k = 0; k < layout_.nodes; ++k) {
    for (int i = 0; i < kNx; ++i) {
      lo_[layout_.state(k) + i] = xl[i];
      hi_[layout_.state(k) + i] = xu[i];
    }
    lo_[layout_.control(k) + iu::kSteer] = -0.5;
    hi_[layout_.control(k) + iu::kSteer] = 0.5;
    for (int w = 0; w < 4; ++w) {
      lo_[layout_.control(k) + iu::kTorque + w] = -s.params.powertrain.brake_torque;
      hi_[layout_.control(k) + iu::kTorque + w] = cap[w];
    }
  }
  lo_[layout_.tf()] = 0.3 * s.track.length / s.v0;
  hi_[layout_.tf()] = 3.0 * s.track.length / s.v0;
  for (int i = 0; i < layout_.np; ++i) {
    lo_[layout_.param(i)] = s.space->lower[i];
    hi_[layout_.param(i)] = s.space->upper[i];
  }

  mid_.resize(n);
  half_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]) || !(hi_[i] > lo_[i]))
      throw InputError("decision variable " + describe_variable(i) + " needs finite bounds with lower < upper");
    mid_[i] = 0.5 * (lo_[i] + hi_[i]);
    half_[i] = 0.5 * (hi_[i] - lo_[i]);
  }
}

void LapProblem::setup_rows() {
  const auto& s = setup_;
  const int last = layout_.nodes - 1;

  // Node-local dependencies of each output on the 36 local columns.
  deps_.assign(kNo, {});
  p_dep_.assign(kNo, false);
  std::vector<int> accel;
  for (int c = 0; c < 14; ++c) accel.push_back(c);
  for (int c : {ix::kZ, ix::kRoll, ix::kPitch, ix::kYaw}) accel.push_back(c);
  for (int w = 0; w < 4; ++w) accel.push_back(ix::kWheelZ + w);
  for (int c = 0; c < kNu; ++c) accel.push_back(kNx + c);
  auto dep = [&](int o, std::initializer_list<int> cols) {
    for (int c : cols) deps_[o][c] = true;
  };
  for (int o = 0; o < 14; ++o) {
    for (int c : accel) deps_[o][c] = true;
    p_dep_[o] = true;
  }
  for (int o = ix::kX; o < ix::kS; ++o) deps_[o][o - ix::kX] = true;
  dep(ix::kS, {ix::kVx, ix::kVy, ix::kYaw, ix::kS, ix::kN, ix::kChi});
  dep(ix::kN, {ix::kVx, ix::kVy, ix::kYaw, ix::kChi});
  dep(ix::kChi, {ix::kVx, ix::kVy, ix::kYawRate, ix::kYaw, ix::kS, ix::kN, ix::kChi});
  for (int w = 0; w < 4; ++w) {
    const int g = kNx;
    dep(g + pg::kMotorSpeed + w, {ix::kSpinRate + w});
    dep(g + pg::kBaseTorque + w, {kNx + iu::kTorque + w});
    dep(g + pg::kPowerTorque + w, {ix::kSpinRate + w, kNx + iu::kTorque + w});
    dep(g + pg::kLoad + w, {ix::kWheelVz + w, ix::kWheelZ + w});
    for (int c : accel) {
      deps_[g + pg::kKappa + w][c] = true;
      deps_[g + pg::kAlpha + w][c] = true;
    }
    dep(g + pg::kJounce + w, {ix::kZ, ix::kRoll, ix::kPitch, ix::kWheelZ + w});
    for (int base : {pg::kMotorSpeed, pg::kBaseTorque, pg::kPowerTorque, pg::kKappa, pg::kAlpha, pg::kJounce})
      p_dep_[g + base + w] = true;
  }
  dep(kNx + pg::kTrack, {ix::kS, ix::kN});

  brows_.clear();
  auto add = [&](std::string name, std::vector<std::pair<int, double>> terms, double value) {
    BoundaryRow r;
    r.name = std::move(name);
    r.terms = std::move(terms);
    std::sort(r.terms.begin(), r.terms.end());
    r.lo = r.hi = value;
    brows_.push_back(std::move(r));
  };
  const int x1 = layout_.state(0);
  const int xn = layout_.state(last);
  if (s.boundary == Boundary::FlyingLap) {
    std::vector<int> periodic;
    for (int i = 0; i < 14; ++i) periodic.push_back(i);
    for (int i : {ix::kZ, ix::kRoll, ix::kPitch}) periodic.push_back(i);
    for (int w = 0; w < 4; ++w) periodic.push_back(ix::kWheelZ + w);
    periodic.push_back(ix::kN);
    periodic.push_back(ix::kChi);
    for (int i : periodic) add(std::string("periodic ") + kStateNames[i], {{x1 + i, -1.0}, {xn + i, 1.0}}, 0.0);
  } else {
    for (int i = 0; i < 14; ++i) add(std::string("start ") + kStateNames[i], {{x1 + i, 1.0}}, 0.0);
    std::vector<int> rest{ix::kZ, ix::kRoll, ix::kPitch};
    for (int w = 0; w < 4; ++w) rest.push_back(ix::kWheelZ + w);
    for (int i : rest) {
      add(std::string("static ") + kStateNames[i], {{x1 + i, 1.0}}, 0.0);
      brows_.back().static_state = i;
    }
  }
  add("start s", {{x1 + ix::kS, 1.0}}, 0.0);
  add("finish s", {{xn + ix::kS, 1.0}}, s.track.length);
  const double h0 = s.track.heading_at(0.0);
  add("start heading", {{x1 + ix::kYaw, 1.0}, {x1 + ix::kChi, -1.0}}, h0);
  add("start X", {{x1 + ix::kX, 1.0}, {x1 + ix::kN, std::sin(h0)}}, s.track.x_at(0.0));
  add("start Y", {{x1 + ix::kY, 1.0}, {x1 + ix::kN, -std::cos(h0)}}, s.track.y_at(0.0));
  for (int w = 0; w < 4; ++w) add(std::string("start spin_") + kWheelNames[w], {{x1 + ix::kSpin + w, 1.0}}, 0.0);
  if (s.space) {
    const bool split = s.space->id != CaseId::OWD && s.space->id != CaseId::COG;
    for (int w : split ? std::vector<int>{0, 2} : std::vector<int>{0}) {
      add(std::string("max motor speed ") + kWheelNames[w], {}, 0.0);
      brows_.back().motor = w;
      brows_.back().hi = s.params.powertrain.max_motor_speed;
    }
  }

  m_ = n_def_ + n_path_ + static_cast<int>(brows_.size());
  glo_.assign(m_, 0.0);
  ghi_.assign(m_, 0.0);
  for (int k = 0; k < layout_.nodes; ++k) path_bounds(fixed_model_, &glo_[path_row(k, 0)], &ghi_[path_row(k, 0)]);
  for (size_t b = 0; b < brows_.size(); ++b) {
    glo_[n_def_ + n_path_ + b] = brows_[b].lo;
    ghi_[n_def_ + n_path_ + b] = brows_[b].hi;
  }
}

std::string LapProblem::describe_variable(int col) const {
  if (col == layout_.tf()) return "t_f";
  if (col > layout_.tf()) {
    const int i = col - layout_.tf() - 1;
    return "p[" + (setup_.space ? setup_.space->names[i] : std::to_string(i)) + "]";
  }
  const int k = col / kW, c = col % kW;
  return std::string(c < kNx ? kStateNames[c] : kControlNames[c - kNx]) + " @ node " + std::to_string(k);
}

std::string LapProblem::describe_row(int row) const {
  if (row < n_def_) return std::string("defect ") + kStateNames[row % kNx] + " @ interval " + std::to_string(row / kNx);
  if (row < n_def_ + n_path_) {
    const int k = (row - n_def_) / kNg, j = (row - n_def_) % kNg;
    const std::string what = j == pg::kTrack ? "track" : std::string(kPathKinds[j / 4]) + "_" + kWheelNames[j % 4];
    return what + " @ node " + std::to_string(k);
  }
  return brows_[row - n_def_ - n_path_].name;
}

std::vector<double> LapProblem::scale(const std::vector<double>& y) const {
  std::vector<double> ys(y.size());
  for (size_t i = 0; i < y.size(); ++i) ys[i] = (y[i] - mid_[i]) / half_[i];
  return ys;
}

std::vector<double> LapProblem::unscale(const double* ys) const {
  std::vector<double> y(layout_.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = mid_[i] + half_[i] * ys[i];
  return y;
}

Design LapProblem::design_of(const std::vector<double>& p) const {
  if (!setup_.space) return setup_.fixed_design;
  return decode(DesignVector{setup_.space->id, p}, setup_.params);
}

VehicleModel LapProblem::model_of(const std::vector<double>& p) const {
  if (!setup_.space) return fixed_model_;
  return make_model(setup_.params, setup_.tire, design_of(p), setup_.model_options);
}

void LapProblem::bounds(double* x_l, double* x_u, double* g_l, double* g_u) const {
  std::fill(x_l, x_l + layout_.size(), -1.0);
  std::fill(x_u, x_u + layout_.size(), 1.0);
  for (int i = 0; i < m_; ++i) {
    g_l[i] = glo_[i] * row_scale_[i];
    g_u[i] = ghi_[i] * row_scale_[i];
  }
}

void LapProblem::initial_point(double* x) const { std::copy(y0_.begin(), y0_.end(), x); }

double LapProblem::objective(const double* y) const {
  const int i = layout_.tf();
  return (mid_[i] + half_[i] * y[i]) / t_ref_;
}

void LapProblem::gradient(const double*, double* grad) const {
  std::fill(grad, grad + layout_.size(), 0.0);
  grad[layout_.tf()] = half_[layout_.tf()] / t_ref_;
}

void LapProblem::violation_weights(double* w) const {
  for (int i = 0; i < m_; ++i) w[i] = 1.0 / row_scale_[i];
}

void LapProblem::physical_constraint_bounds(std::vector<double>& lo, std::vector<double>& hi) const {
  lo = glo_;
  hi = ghi_;
}

void LapProblem::node_outputs(const VehicleModel& m, const double* x, const double* u, double* out) const {
  Evaluation e;
  evaluate(m, x, u, &setup_.track, e);
  std::copy(e.xdot.begin(), e.xdot.end(), out);
  path_rows(m, setup_.track, e, x, u, out + kNx);
}

void LapProblem::eval_rows(const Trajectory& t, const VehicleModel& m, double* g) const {
  const int n = t.nodes;
  std::vector<double> out(static_cast<size_t>(n) * kNo);
  for (int k = 0; k < n; ++k) {
    try {
      node_outputs(m, t.state(k), t.control(k), &out[static_cast<size_t>(k) * kNo]);
    } catch (const EvaluationError& e) {
      throw EvaluationError("node " + std::to_string(k) + ": " + e.what());
    }
  }
  const double h = t.step();
  for (int k = 0; k + 1 < n; ++k) {
    const double* fa = &out[static_cast<size_t>(k) * kNo];
    const double* fb = fa + kNo;
    const double* xa = t.state(k);
    const double* xb = t.state(k + 1);
    for (int i = 0; i < kNx; ++i) g[k * kNx + i] = xb[i] - xa[i] - 0.5 * h * (fa[i] + fb[i]);
  }
  for (int k = 0; k < n; ++k)
    std::copy_n(&out[static_cast<size_t>(k) * kNo + kNx], kNg, g + path_row(k, 0));

  std::vector<double> y = pack(layout_, t);
  const State rest = static_state(m);
  for (size_t b = 0; b < brows_.size(); ++b) {
    const auto& r = brows_[b];
    double v = 0.0;
    for (const auto& [col, coef] : r.terms) v += coef * y[col];
    if (r.static_state >= 0) v -= rest[r.static_state];
    if (r.motor >= 0) v += m.design.motors[r.motor].base_speed * m.design.motors[r.motor].beta;
    g[n_def_ + n_path_ + b] = v;
  }
}

std::vector<double> LapProblem::physical_constraints(const Trajectory& t) const {
  std::vector<double> g(m_);
  eval_rows(t, model_of(t.p), g.data());
  return g;
}

void LapProblem::constraints(const double* y, double* g) const {
  const Trajectory t = trajectory(y);
  eval_rows(t, model_of(t.p), g);
  for (int i = 0; i < m_; ++i) g[i] *= row_scale_[i];
}

void LapProblem::node_block(const VehicleModel& m, const Trajectory& t, int k, NodeBlock& b) const {
  std::array<double, kW> z{};
  std::copy_n(t.state(k), kNx, z.begin());
  std::copy_n(t.control(k), kNu, z.begin() + kNx);
  b.d.assign(static_cast<size_t>(kNo) * kW, 0.0);
  node_outputs(m, z.data(), z.data() + kNx, b.out.data());

  std::array<double, kNo> fp{}, fm{};
  for (int c = 0; c < kW; ++c) {
    bool used = false;
    for (int o = 0; o < kNo && !used; ++o) used = deps_[o][c];
    if (!used) continue;
    const int col = k * kW + c;
    const double ys = (z[c] - mid_[col]) / half_[col];
    const double step = nlp::fd_step(ys);
    const double zc = z[c];
    const double up = mid_[col] + half_[col] * (ys + step);
    const double dn = mid_[col] + half_[col] * (ys - step);
    try {
      z[c] = up;
      node_outputs(m, z.data(), z.data() + kNx, fp.data());
      z[c] = dn;
      node_outputs(m, z.data(), z.data() + kNx, fm.data());
    } catch (const EvaluationError& e) {
      throw EvaluationError("Jacobian column " + describe_variable(col) + ": " + e.what());
    }
    z[c] = zc;
    const double span = (up - dn) / half_[col];
    for (int o = 0; o < kNo; ++o)
      if (deps_[o][c]) b.d[static_cast<size_t>(o) * kW + c] = (fp[o] - fm[o]) / span;
  }
}

void LapProblem::raw_jacobian(const double* ys, double* values) const {
  const Trajectory t = trajectory(ys);
  const VehicleModel m = model_of(t.p);
  std::vector<NodeBlock> blocks(t.nodes);
  for (int k = 0; k < t.nodes; ++k) {
    try {
      node_block(m, t, k, blocks[k]);
    } catch (const EvaluationError& e) {
      throw EvaluationError("node " + std::to_string(k) + ": " + e.what());
    }
  }
  std::vector<std::vector<double>> dp(layout_.np);
  if (layout_.np > 0) {
    std::vector<double> y(ys, ys + layout_.size());
    std::vector<double> gp(m_), gm(m_);
    for (int j = 0; j < layout_.np; ++j) {
      const int col = layout_.param(j);
      const double step = nlp::fd_step(y[col]);
      const double yc = y[col];
      try {
        y[col] = yc + step;
        const Trajectory tp = trajectory(y.data());
        eval_rows(tp, model_of(tp.p), gp.data());
        y[col] = yc - step;
        const Trajectory tm = trajectory(y.data());
        eval_rows(tm, model_of(tm.p), gm.data());
      } catch (const EvaluationError& e) {
        throw EvaluationError("Jacobian column " + describe_variable(col) + ": " + e.what());
      }
      y[col] = yc;
      dp[j].resize(m_);
      for (int i = 0; i < m_; ++i) dp[j][i] = (gp[i] - gm[i]) / (2.0 * step);
    }
  }
  walk(nullptr, values, &blocks, &dp, &t);
}

void LapProblem::jacobian(const double* y, double* values) const { raw_jacobian(y, values); }

void LapProblem::walk(nlp::Sparsity* pat, double* values, const std::vector<NodeBlock>* blocks,
                      const std::vector<std::vector<double>>* dp, const Trajectory* t) const {
  const int n = layout_.nodes;
  const int np = layout_.np;
  size_t idx = 0;
  auto put = [&](int row, int col, double v) {
    if (pat) {
      pat->rows.push_back(row);
      pat->cols.push_back(col);
    } else {
      values[idx] = row_scale_[row] * v;
    }
    ++idx;
  };
  auto p_cols = [&](int row) {
    for (int j = 0; j < np; ++j) put(row, layout_.param(j), pat ? 0.0 : (*dp)[j][row]);
  };
  const double h = t ? t->step() : 0.0;
  const int tf = layout_.tf();
  const double dh = half_[tf] / (n - 1);

  for (int k = 0; k + 1 < n; ++k) {
    for (int i = 0; i < kNx; ++i) {
      const int row = k * kNx + i;
      for (int side = 0; side < 2; ++side) {
        const int node = k + side;
        for (int c = 0; c < kW; ++c) {
          if (!deps_[i][c] && c != i) continue;
          double v = 0.0;
          if (!pat) {
            v = -0.5 * h * (*blocks)[node].d[static_cast<size_t>(i) * kW + c];
            if (c == i) v += (side ? 1.0 : -1.0) * half_[node * kW + c];
          }
          put(row, node * kW + c, v);
        }
      }
      put(row, tf, pat ? 0.0 : -0.5 * dh * ((*blocks)[k].out[i] + (*blocks)[k + 1].out[i]));
      if (p_dep_[i]) p_cols(row);
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < kNg; ++j) {
      const int row = path_row(k, j);
      const int o = kNx + j;
      for (int c = 0; c < kW; ++c)
        if (deps_[o][c]) put(row, k * kW + c, pat ? 0.0 : (*blocks)[k].d[static_cast<size_t>(o) * kW + c]);
      if (p_dep_[o]) p_cols(row);
    }
  }
  for (size_t b = 0; b < brows_.size(); ++b) {
    const int row = n_def_ + n_path_ + static_cast<int>(b);
    for (const auto& [col, coef] : brows_[b].terms) put(row, col, coef * half_[col]);
    if (brows_[b].static_state >= 0 || brows_[b].motor >= 0) p_cols(row);
  }
}

}  // namespace laptime::transcription
