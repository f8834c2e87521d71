// laptime: minimum-lap-time design cases, sweeps, maneuvers and track tools.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "laptime/cases/artifacts.hpp"
#include "laptime/cases/maneuver.hpp"
#include "laptime/cases/runner.hpp"
#include "laptime/error.hpp"

using namespace laptime;
using namespace laptime::cases;

namespace {

constexpr int kConverged = 0;
constexpr int kNotConverged = 2;
constexpr int kBadInput = 3;

struct Common {
  std::string config;
  std::string vehicle, tire, track;
  int nodes = 0;
  std::string boundary;
  std::string out;
  double tol = 0.0;
  int max_iter = 0;
  double max_seconds = 0.0;
  bool print = false;
};

void add_common(CLI::App* cmd, Common& c, bool lap) {
  cmd->add_option("--config", c.config, "case config (JSON)");
  cmd->add_option("--vehicle", c.vehicle, "vehicle JSON");
  cmd->add_option("--tire", c.tire, ".tir file overriding the vehicle's");
  cmd->add_option("--out", c.out, "output directory");
  if (!lap) return;
  cmd->add_option("--track", c.track, "track CSV (X,Y[,width])");
  cmd->add_option("--nodes", c.nodes, "mesh nodes")->check(CLI::PositiveNumber);
  cmd->add_option("--boundary", c.boundary, "flying|standing")->check(CLI::IsMember({"flying", "standing"}));
  cmd->add_option("--tol", c.tol, "convergence tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", c.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-seconds", c.max_seconds, "wall-clock cap")->check(CLI::PositiveNumber);
  cmd->add_flag("--print", c.print, "print the iteration log");
}

CaseConfig make_config(CaseKind kind, const Common& o) {
  CaseConfig c;
  if (!o.config.empty()) {
    c = load_case_config(o.config);
  } else {
    c.solver = default_lap_solver_options();
    c.vehicle_path = std::string(LAPTIME_DATA_DIR) + "/vehicles/f3_4iwd.json";
    c.track_path = std::string(LAPTIME_DATA_DIR) + "/tracks/oval.csv";
  }
  c.kind = kind;
  if (!o.vehicle.empty()) c.vehicle_path = std::filesystem::absolute(o.vehicle).string();
  if (!o.tire.empty()) c.tire_path = std::filesystem::absolute(o.tire).string();
  if (!o.track.empty()) c.track_path = std::filesystem::absolute(o.track).string();
  if (o.nodes > 0) c.nodes = o.nodes;
  if (!o.boundary.empty()) c.boundary = transcription::boundary_from_string(o.boundary);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.tol > 0.0) c.solver.tol = o.tol;
  if (o.max_iter > 0) c.solver.max_iter = o.max_iter;
  if (o.max_seconds > 0.0) c.solver.max_seconds = o.max_seconds;
  if (o.print) c.solver.print = true;
  validate(c);
  return c;
}

void print_report(const CaseReport& r) {
  std::printf("%s: %s, t_f = %.4f s, %d iterations, %.1f s\n", r.label.c_str(), nlp::to_string(r.status).c_str(), r.tf,
              r.iterations, r.seconds);
  for (const auto& d : r.design) {
    std::printf("  %-8s = %12.5g %-4s [%g, %g]%s\n", d.name.c_str(), d.value, d.unit.c_str(), d.lower, d.upper,
                d.at_bound() ? " at bound" : "");
  }
  std::printf("  violation %.2e, envelope %.2e, stationarity %.2e (scaled %.2e)\n", r.constraint_violation,
              r.envelope_violation, r.kkt.stationarity, r.kkt.stationarity_scaled);
  std::printf("  grip fr %.1f fl %.1f rr %.1f rl %.1f total %.1f N\n", r.grip.per_tire[0], r.grip.per_tire[1],
              r.grip.per_tire[2], r.grip.per_tire[3], r.grip.total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum lap time design and control"};
  app.require_subcommand(1);

  Common run_opt;
  std::string run_case_name;
  auto* run = app.add_subcommand("run", "solve a design case (OWD, COG, DMT, ATR, ALL)");
  run->add_option("case", run_case_name, "case id")->required();
  add_common(run, run_opt, true);

  Common sweep_opt;
  std::string sweep_kind;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "control-only lap times over unsprung mass or spin inertia");
  sweep->add_option("kind", sweep_kind, "mass|inertia")->required()->check(CLI::IsMember({"mass", "inertia"}));
  sweep->add_option("--values", sweep_values, "sweep points")->delimiter(',');
  add_common(sweep, sweep_opt, true);

  Common sim_opt;
  std::string sim_kind;
  double speed = 0.0, steer = 0.0, duration = 0.0;
  bool locked = false;
  auto* sim = app.add_subcommand("sim", "open-loop steering maneuver");
  sim->add_option("maneuver", sim_kind, "step-steer|swept-sine")->required();
  sim->add_option("--speed", speed, "held speed [m/s]")->check(CLI::PositiveNumber);
  sim->add_option("--steer", steer, "road-wheel steer amplitude [rad]");
  sim->add_option("--duration", duration, "simulated time [s]")->check(CLI::PositiveNumber);
  sim->add_flag("--lock-suspension", locked, "freeze heave, roll, pitch and wheel travel");
  add_common(sim, sim_opt, false);

  auto* track_cmd = app.add_subcommand("track", "track utilities");
  track_cmd->require_subcommand(1);
  std::string build_in, build_out;
  double spacing = 2.0;
  auto* build = track_cmd->add_subcommand("build", "resample X,Y[,width] points onto an arc-length grid");
  build->add_option("points", build_in, "point CSV")->required();
  build->add_option("--spacing", spacing, "grid spacing [m]")->check(CLI::PositiveNumber);
  build->add_option("--out", build_out, "grid CSV to write");
  std::string synth_name, synth_out;
  auto* synth = track_cmd->add_subcommand("synth", "write the points of a bundled synthetic layout");
  synth->add_option("layout", synth_name, "oval|mini|s-curve")->required()->check(
      CLI::IsMember({"oval", "mini", "s-curve"}));
  synth->add_option("--out", synth_out, "point CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*run) {
      const CaseKind kind = case_kind_from_string(run_case_name);
      if (!is_design_case(kind)) throw InputError(run_case_name + " is not a design case");
      const CaseConfig c = make_config(kind, run_opt);
      const Inputs in = load_inputs(c);
      RunOptions ro;
      ro.inputs = &in;
      const CaseReport r = run_case(c, ro);
      emit_artifacts(r, in.track, c.output_dir);
      print_report(r);
      return r.status == nlp::Status::Optimal ? kConverged : kNotConverged;
    }
    if (*sweep) {
      CaseConfig c = make_config(sweep_kind == "mass" ? CaseKind::SweepMass : CaseKind::SweepInertia, sweep_opt);
      if (!sweep_values.empty()) c.sweep.values = sweep_values;
      validate(c);
      const auto reports = run_sweep(c);
      emit_sweep(reports, c.output_dir);
      bool all = true;
      for (const auto& r : reports) {
        std::printf("%-24s %-14s t_f = %.4f s\n", r.label.c_str(), nlp::to_string(r.status).c_str(), r.tf);
        all = all && r.status == nlp::Status::Optimal;
      }
      return all ? kConverged : kNotConverged;
    }
    if (*sim) {
      const Maneuver m = maneuver_from_string(sim_kind);
      CaseConfig c;
      if (!sim_opt.config.empty()) {
        c = load_case_config(sim_opt.config);
      } else {
        c.vehicle_path = std::string(LAPTIME_DATA_DIR) + "/vehicles/f3_4iwd.json";
      }
      c.kind = m == Maneuver::StepSteer ? CaseKind::SimStep : CaseKind::SimSwept;
      if (!sim_opt.vehicle.empty()) c.vehicle_path = std::filesystem::absolute(sim_opt.vehicle).string();
      if (!sim_opt.tire.empty()) c.tire_path = std::filesystem::absolute(sim_opt.tire).string();
      if (!sim_opt.out.empty()) c.output_dir = sim_opt.out;
      if (speed > 0.0) c.maneuver.speed = speed;
      if (sim->count("--steer")) c.maneuver.steer = steer;
      if (duration > 0.0) c.maneuver.duration = duration;
      if (locked) c.maneuver.lock_suspension = true;
      const ManeuverResult r = run_maneuver(c);
      emit_maneuver(r, c.output_dir);
      if (!r.ok) {
        std::fprintf(stderr, "integration failed at t = %.4f s: %s\n", r.failed_at, r.message.c_str());
        return kNotConverged;
      }
      std::printf("%s: %zu samples, final yaw rate %.4f rad/s, lateral acceleration %.3f m/s^2\n",
                  to_string(m).c_str(), r.t.size(), r.yaw_rate.back(), r.ay.back());
      return kConverged;
    }
    if (*build) {
      track::BuildOptions bo;
      bo.spacing = spacing;
      const track::Track t = track::load_track_csv(build_in, bo);
      std::printf("%s: %s, length %.2f m, %zu samples, max |C| w = %.3f\n", t.name.c_str(),
                  t.closed ? "closed" : "open", t.length, t.s.size(), t.max_offset_ratio());
      for (const auto& w : t.warnings) std::printf("warning: %s\n", w.c_str());
      if (!build_out.empty()) track::save_track_csv(t, build_out);
      return kConverged;
    }
    if (*synth) {
      const track::RawPoints p = synth_name == "oval"   ? track::synth_oval()
                                 : synth_name == "mini" ? track::synth_mini_circuit()
                                                        : track::synth_s_curve();
      track::save_points_csv(p.x, p.y, p.w, synth_out);
      return kConverged;
    }
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kConverged;
}
