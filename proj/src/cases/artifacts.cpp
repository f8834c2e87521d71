#include "laptime/cases/artifacts.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "laptime/error.hpp"
#include "laptime/transcription/solution_io.hpp"
#include "laptime/vehicle/state.hpp"

namespace laptime::cases {

namespace fs = std::filesystem;

namespace {

const char* kWheels[] = {"fr", "fl", "rr", "rl"};

nlp::Status status_from_string(const std::string& s) {
  for (auto st : {nlp::Status::Optimal, nlp::Status::Acceptable, nlp::Status::MaxIterations, nlp::Status::Infeasible,
                  nlp::Status::Error}) {
    if (nlp::to_string(st) == s) return st;
  }
  throw InputError("unknown solver status " + s);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(10);
  return out;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace

nlohmann::json summary_json(const CaseReport& r) {
  nlohmann::json j;
  j["case"] = r.label;
  j["status"] = nlp::to_string(r.status);
  j["message"] = r.message;
  j["tf"] = r.tf;
  j["track_length"] = r.track_length;
  j["nodes"] = r.trajectory.nodes;
  if (r.sweep_value != 0.0) j["sweep_value"] = r.sweep_value;
  nlohmann::json design = nlohmann::json::array();
  for (const auto& d : r.design) {
    design.push_back({{"name", d.name},
                      {"unit", d.unit},
                      {"value", d.value},
                      {"lower", d.lower},
                      {"upper", d.upper},
                      {"at_bound", d.at_bound()}});
  }
  j["design"] = design;
  j["grip"] = {{"per_tire", r.grip.per_tire}, {"total", r.grip.total}};
  nlohmann::json pt = nlohmann::json::array();
  for (int w = 0; w < 4; ++w) {
    pt.push_back({{"wheel", kWheels[w]}, {"motor", r.powertrain[w].motor}, {"gearbox", r.powertrain[w].gearbox}});
  }
  j["powertrain_mass"] = pt;
  j["total_mass"] = r.total_mass;
  j["solver"] = {{"iterations", r.iterations},
                 {"constraint_violation", r.constraint_violation},
                 {"envelope_violation", r.envelope_violation},
                 {"kkt",
                  {{"stationarity", r.kkt.stationarity},
                   {"stationarity_scaled", r.kkt.stationarity_scaled},
                   {"complementarity", r.kkt.complementarity},
                   {"complementarity_scaled", r.kkt.complementarity_scaled},
                   {"primal", r.kkt.primal},
                   {"dual_sign", r.kkt.dual_sign}}}};
  j["timing"] = {{"seconds", r.seconds}};
  return j;
}

CaseReport summary_from_json(const nlohmann::json& j) {
  CaseReport r;
  try {
    r.label = j.at("case").get<std::string>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.message = j.at("message").get<std::string>();
    r.tf = j.at("tf").get<double>();
    r.track_length = j.at("track_length").get<double>();
    r.trajectory.nodes = j.at("nodes").get<int>();
    r.sweep_value = j.value("sweep_value", 0.0);
    for (const auto& d : j.at("design")) {
      r.design.push_back({d.at("name").get<std::string>(), d.at("unit").get<std::string>(), d.at("value").get<double>(),
                          d.at("lower").get<double>(), d.at("upper").get<double>()});
    }
    r.grip.per_tire = j.at("grip").at("per_tire").get<std::array<double, 4>>();
    r.grip.total = j.at("grip").at("total").get<double>();
    const auto& pt = j.at("powertrain_mass");
    if (pt.size() != 4) throw InputError("summary: powertrain_mass needs four wheels");
    for (int w = 0; w < 4; ++w) {
      r.powertrain[w].motor = pt[w].at("motor").get<double>();
      r.powertrain[w].gearbox = pt[w].at("gearbox").get<double>();
    }
    r.total_mass = j.at("total_mass").get<double>();
    const auto& s = j.at("solver");
    r.iterations = s.at("iterations").get<int>();
    r.constraint_violation = s.at("constraint_violation").get<double>();
    r.envelope_violation = s.at("envelope_violation").get<double>();
    const auto& k = s.at("kkt");
    r.kkt.stationarity = k.at("stationarity").get<double>();
    r.kkt.stationarity_scaled = k.at("stationarity_scaled").get<double>();
    r.kkt.complementarity = k.at("complementarity").get<double>();
    r.kkt.complementarity_scaled = k.at("complementarity_scaled").get<double>();
    r.kkt.primal = k.at("primal").get<double>();
    r.kkt.dual_sign = k.at("dual_sign").get<double>();
    r.seconds = j.at("timing").at("seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("summary: ") + e.what());
  }
  return r;
}

CaseReport load_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return summary_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

double RacingLine::max_gap() const {
  double g = 0.0;
  for (size_t k = 0; k < s.size(); ++k) g = std::max(g, std::hypot(x_sn[k] - x[k], y_sn[k] - y[k]));
  return g;
}

RacingLine racing_line(const CaseReport& r, const track::Track& t) {
  using namespace vehicle;
  RacingLine l;
  const auto& tr = r.trajectory;
  for (int k = 0; k < tr.nodes; ++k) {
    const double* x = tr.state(k);
    const double s = x[ix::kS], n = x[ix::kN];
    const double h = t.heading_at(s);
    l.s.push_back(s);
    l.n.push_back(n);
    l.x_sn.push_back(t.x_at(s) - n * std::sin(h));
    l.y_sn.push_back(t.y_at(s) + n * std::cos(h));
    l.x.push_back(x[ix::kX]);
    l.y.push_back(x[ix::kY]);
  }
  return l;
}

void write_trajectory_csv(const CaseReport& r, const std::string& path) {
  using namespace vehicle;
  const auto& tr = r.trajectory;
  auto out = open_out(path);
  out << "node,t";
  for (const char* n : kStateNames) out << ',' << n;
  for (const char* n : kControlNames) out << ',' << n;
  for (const char* w : kWheels) out << ",fx_" << w;
  for (const char* w : kWheels) out << ",fy_" << w;
  out << '\n';
  for (int k = 0; k < tr.nodes; ++k) {
    out << k << ',' << tr.time(k);
    for (int i = 0; i < tr.nx; ++i) out << ',' << tr.state(k)[i];
    for (int i = 0; i < tr.nu; ++i) out << ',' << tr.control(k)[i];
    for (int w = 0; w < 4; ++w) out << ',' << (k < static_cast<int>(r.fx.size()) ? r.fx[k][w] : 0.0);
    for (int w = 0; w < 4; ++w) out << ',' << (k < static_cast<int>(r.fy.size()) ? r.fy[k][w] : 0.0);
    out << '\n';
  }
}

std::vector<std::string> emit_artifacts(const CaseReport& r, const track::Track& t, const std::string& dir) {
  using namespace vehicle;
  fs::create_directories(dir);
  std::vector<std::string> files;
  auto path = [&](const char* name) {
    files.push_back((fs::path(dir) / name).string());
    return files.back();
  };

  write_trajectory_csv(r, path("trajectory.csv"));
  write_json(summary_json(r), path("summary.json"));
  std::vector<std::string> names;
  for (const auto& d : r.design) names.push_back(d.name);
  transcription::save_trajectory(r.trajectory, path("solution.json"), names);
  nlp::write_log_csv(r.log, path("solver_log.csv"));

  const auto& tr = r.trajectory;
  const RacingLine l = racing_line(r, t);
  {
    auto out = open_out(path("racing_line.csv"));
    out << "node,s,n,x_from_sn,y_from_sn,x,y\n";
    for (int k = 0; k < tr.nodes; ++k) {
      out << k << ',' << l.s[k] << ',' << l.n[k] << ',' << l.x_sn[k] << ',' << l.y_sn[k] << ',' << l.x[k] << ','
          << l.y[k] << '\n';
    }
  }
  {
    auto out = open_out(path("speed.csv"));
    out << "node,t,s,speed\n";
    for (int k = 0; k < tr.nodes; ++k) {
      const double* x = tr.state(k);
      out << k << ',' << tr.time(k) << ',' << x[ix::kS] << ',' << std::hypot(x[ix::kVx], x[ix::kVy]) << '\n';
    }
  }
  {
    auto out = open_out(path("steering.csv"));
    out << "node,t,s,steer\n";
    for (int k = 0; k < tr.nodes; ++k) {
      out << k << ',' << tr.time(k) << ',' << tr.state(k)[ix::kS] << ',' << tr.control(k)[iu::kSteer] << '\n';
    }
  }
  return files;
}

std::vector<std::string> emit_sweep(const std::vector<CaseReport>& reports, const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  const std::string csv = (fs::path(dir) / "sweep.csv").string();
  {
    auto out = open_out(csv);
    out << "value,tf,status,iterations,constraint_violation\n";
    for (const auto& r : reports) {
      out << r.sweep_value << ',' << r.tf << ',' << nlp::to_string(r.status) << ',' << r.iterations << ','
          << r.constraint_violation << '\n';
    }
  }
  files.push_back(csv);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(summary_json(r));
  const std::string js = (fs::path(dir) / "sweep.json").string();
  write_json(j, js);
  files.push_back(js);
  return files;
}

std::vector<std::string> emit_maneuver(const ManeuverResult& m, const std::string& dir) {
  fs::create_directories(dir);
  const std::string path = (fs::path(dir) / "maneuver.csv").string();
  auto out = open_out(path);
  out << "t,steer,speed,yaw_rate,ay,roll\n";
  for (size_t k = 0; k < m.t.size(); ++k) {
    out << m.t[k] << ',' << m.steer[k] << ',' << m.speed[k] << ',' << m.yaw_rate[k] << ',' << m.ay[k] << ','
        << m.roll[k] << '\n';
  }
  return {path};
}

}  // namespace laptime::cases
