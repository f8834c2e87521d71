#include "laptime/cases/case_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "laptime/error.hpp"

namespace laptime::cases {

namespace fs = std::filesystem;

namespace {

struct KindName {
  CaseKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {CaseKind::OWD, "OWD"},           {CaseKind::COG, "COG"},
    {CaseKind::DMT, "DMT"},           {CaseKind::ATR, "ATR"},
    {CaseKind::ALL, "ALL"},           {CaseKind::SimStep, "SIM-STEP"},
    {CaseKind::SimSwept, "SIM-SWEPT"}, {CaseKind::SweepMass, "SWEEP-MASS"},
    {CaseKind::SweepInertia, "SWEEP-INERTIA"},
};

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: bad value for ") + key + ": " + e.what());
  }
}

void read_vector(const nlohmann::json& j, const char* key, std::optional<std::vector<double>>& out) {
  if (!j.contains(key)) return;
  std::vector<double> v;
  read(j, key, v);
  out = std::move(v);
}

}  // namespace

std::string to_string(CaseKind k) {
  for (const auto& e : kKinds) {
    if (e.kind == k) return e.name;
  }
  return "?";
}

CaseKind case_kind_from_string(const std::string& s) {
  std::string up;
  for (char c : s) up += static_cast<char>(c == '_' ? '-' : std::toupper(static_cast<unsigned char>(c)));
  for (const auto& e : kKinds) {
    if (up == e.name) return e.kind;
  }
  throw InputError("unknown case " + s);
}

bool is_design_case(CaseKind k) {
  return k == CaseKind::OWD || k == CaseKind::COG || k == CaseKind::DMT || k == CaseKind::ATR || k == CaseKind::ALL;
}

vehicle::CaseId design_case(CaseKind k) {
  switch (k) {
    case CaseKind::OWD: return vehicle::CaseId::OWD;
    case CaseKind::COG: return vehicle::CaseId::COG;
    case CaseKind::DMT: return vehicle::CaseId::DMT;
    case CaseKind::ATR: return vehicle::CaseId::ATR;
    case CaseKind::ALL: return vehicle::CaseId::ALL;
    default: break;
  }
  throw InputError(to_string(k) + " is not a design case");
}

nlp::Options default_lap_solver_options() {
  nlp::Options o;
  o.mu_init = 0.01;
  o.max_iter = 3000;
  return o;
}

CaseConfig case_config_from_json(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object()) throw InputError("config: top level must be an object");
  CaseConfig c;
  c.base_dir = base_dir;
  c.solver = default_lap_solver_options();

  std::string kind;
  read(j, "case", kind);
  if (kind.empty()) throw InputError("config: missing \"case\"");
  c.kind = case_kind_from_string(kind);
  read(j, "vehicle", c.vehicle_path);
  read(j, "tire", c.tire_path);
  read(j, "track", c.track_path);
  read(j, "track_spacing", c.track_spacing);
  read(j, "nodes", c.nodes);
  std::string boundary = transcription::to_string(c.boundary);
  read(j, "boundary", boundary);
  c.boundary = transcription::boundary_from_string(boundary);
  read(j, "v0", c.v0);
  read(j, "output", c.output_dir);

  if (j.contains("design")) {
    const auto& d = j["design"];
    read_vector(d, "lower", c.design_lower);
    read_vector(d, "upper", c.design_upper);
    read_vector(d, "initial", c.design_initial);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    auto& o = c.solver;
    read(s, "tol", o.tol);
    read(s, "constr_viol_tol", o.constr_viol_tol);
    read(s, "dual_inf_tol", o.dual_inf_tol);
    read(s, "compl_inf_tol", o.compl_inf_tol);
    read(s, "acceptable_tol", o.acceptable_tol);
    read(s, "acceptable_iter", o.acceptable_iter);
    read(s, "max_iter", o.max_iter);
    read(s, "max_seconds", o.max_seconds);
    read(s, "mu_init", o.mu_init);
    read(s, "lbfgs_memory", o.lbfgs_memory);
    read(s, "print", o.print);
  }
  if (j.contains("maneuver")) {
    const auto& m = j["maneuver"];
    auto& o = c.maneuver;
    read(m, "speed", o.speed);
    read(m, "steer", o.steer);
    read(m, "t_start", o.t_start);
    read(m, "duration", o.duration);
    read(m, "step", o.step);
    read(m, "gain", o.gain);
    read(m, "f_start", o.f_start);
    read(m, "f_end", o.f_end);
    read(m, "lock_suspension", o.lock_suspension);
    read(m, "stride", o.stride);
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    std::string design = vehicle::to_string(c.sweep.design);
    read(s, "design", design);
    c.sweep.design = vehicle::case_from_string(design);
    read(s, "values", c.sweep.values);
  }
  return c;
}

CaseConfig load_case_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + path + ": " + e.what());
  }
  return case_config_from_json(j, fs::path(path).parent_path().string());
}

nlohmann::json to_json(const CaseConfig& c) {
  nlohmann::json j;
  j["case"] = to_string(c.kind);
  j["vehicle"] = c.vehicle_path;
  if (!c.tire_path.empty()) j["tire"] = c.tire_path;
  j["track"] = c.track_path;
  j["track_spacing"] = c.track_spacing;
  j["nodes"] = c.nodes;
  j["boundary"] = transcription::to_string(c.boundary);
  j["v0"] = c.v0;
  j["output"] = c.output_dir;
  nlohmann::json d = nlohmann::json::object();
  if (c.design_lower) d["lower"] = *c.design_lower;
  if (c.design_upper) d["upper"] = *c.design_upper;
  if (c.design_initial) d["initial"] = *c.design_initial;
  if (!d.empty()) j["design"] = d;
  const auto& o = c.solver;
  j["solver"] = {{"tol", o.tol},
                 {"constr_viol_tol", o.constr_viol_tol},
                 {"dual_inf_tol", o.dual_inf_tol},
                 {"compl_inf_tol", o.compl_inf_tol},
                 {"acceptable_tol", o.acceptable_tol},
                 {"acceptable_iter", o.acceptable_iter},
                 {"max_iter", o.max_iter},
                 {"max_seconds", o.max_seconds},
                 {"mu_init", o.mu_init},
                 {"lbfgs_memory", o.lbfgs_memory}};
  const auto& m = c.maneuver;
  j["maneuver"] = {{"speed", m.speed},     {"steer", m.steer},   {"t_start", m.t_start},
                   {"duration", m.duration}, {"step", m.step},     {"gain", m.gain},
                   {"f_start", m.f_start},   {"f_end", m.f_end},   {"lock_suspension", m.lock_suspension},
                   {"stride", m.stride}};
  j["sweep"] = {{"design", vehicle::to_string(c.sweep.design)}, {"values", c.sweep.values}};
  return j;
}

std::string resolve_path(const CaseConfig& c, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute() || c.base_dir.empty()) return p.lexically_normal().string();
  return (fs::path(c.base_dir) / p).lexically_normal().string();
}

void validate(const CaseConfig& c) {
  auto need_file = [&](const std::string& what, const std::string& path) {
    if (path.empty()) throw InputError("config: no " + what + " file given");
    const std::string r = resolve_path(c, path);
    if (!fs::exists(r)) throw InputError("config: " + what + " file " + r + " does not exist");
  };
  need_file("vehicle", c.vehicle_path);
  if (!c.tire_path.empty()) need_file("tire", c.tire_path);

  const bool lap = c.kind != CaseKind::SimStep && c.kind != CaseKind::SimSwept;
  if (lap) {
    need_file("track", c.track_path);
    if (c.nodes < 3) throw InputError("config: at least three mesh nodes are needed");
    if (!(c.v0 > 0.0)) throw InputError("config: v0 must be positive");
    if (!(c.track_spacing > 0.0)) throw InputError("config: track spacing must be positive");
  }

  if (is_design_case(c.kind)) {
    const size_t np = vehicle::design_names(design_case(c.kind)).size();
    auto check = [&](const char* what, const std::optional<std::vector<double>>& v) {
      if (!v) return;
      if (v->empty()) throw InputError(std::string("config: design ") + what + " is a zero-length design vector");
      if (v->size() != np) {
        throw InputError(std::string("config: design ") + what + " has " + std::to_string(v->size()) + " entries, " +
                         to_string(c.kind) + " needs " + std::to_string(np));
      }
      for (double x : *v) {
        if (!std::isfinite(x)) throw InputError(std::string("config: design ") + what + " has a non-finite entry");
      }
    };
    check("lower", c.design_lower);
    check("upper", c.design_upper);
    check("initial", c.design_initial);
    if (c.design_lower && c.design_upper) {
      for (size_t i = 0; i < np; ++i) {
        if ((*c.design_lower)[i] > (*c.design_upper)[i]) {
          throw InputError("config: design bound " + std::to_string(i) + " has lower > upper");
        }
      }
    }
  }

  if (c.kind == CaseKind::SweepMass || c.kind == CaseKind::SweepInertia) {
    if (c.sweep.values.empty()) throw InputError("config: sweep needs at least one value");
    for (double v : c.sweep.values) {
      if (!std::isfinite(v)) throw InputError("config: sweep value is not finite");
      if (c.kind == CaseKind::SweepInertia && !(v > 0.0)) throw InputError("config: spin inertia must be positive");
    }
  }

  if (c.kind == CaseKind::SimStep || c.kind == CaseKind::SimSwept) {
    const auto& m = c.maneuver;
    if (!(m.step > 0.0) || !(m.duration > 0.0)) throw InputError("config: maneuver step and duration must be positive");
    if (!(m.speed > 0.0)) throw InputError("config: maneuver speed must be positive");
    if (m.stride < 1) throw InputError("config: maneuver stride must be at least 1");
    if (c.kind == CaseKind::SimSwept && !(m.f_start > 0.0 && m.f_end >= m.f_start)) {
      throw InputError("config: swept sine needs 0 < f_start <= f_end");
    }
  }
}

}  // namespace laptime::cases
