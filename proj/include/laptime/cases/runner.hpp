#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "laptime/cases/case_config.hpp"
#include "laptime/nlp/kkt_check.hpp"
#include "laptime/track/track.hpp"
#include "laptime/transcription/layout.hpp"
#include "laptime/vehicle/powertrain.hpp"

namespace laptime::cases {

// Average grip: per tire the node mean of sqrt(Fx^2 + Fy^2), and for the car
// the node mean of the quadratic mean over the four tires.
struct GripMetrics {
  std::array<double, 4> per_tire{};
  double total = 0.0;
};
GripMetrics grip_metrics(const std::vector<std::array<double, 4>>& fx, const std::vector<std::array<double, 4>>& fy);

struct DesignEntry {
  std::string name;
  std::string unit;
  double value = 0.0;
  double lower = 0.0, upper = 0.0;
  bool at_bound(double rel = 1e-3) const;
};
std::string design_unit(const std::string& name);

struct CaseReport {
  std::string label;  // case name, or case plus sweep value
  nlp::Status status = nlp::Status::Error;
  std::string message;
  double tf = 0.0;
  std::vector<DesignEntry> design;
  transcription::Trajectory trajectory;
  std::vector<std::array<double, 4>> fx, fy;  // tire forces per node
  GripMetrics grip;
  std::array<vehicle::PowertrainMass, 4> powertrain{};
  double total_mass = 0.0;
  // Solver-side and recomputed measures of the returned point.
  double constraint_violation = 0.0;  // physical units, inf-norm
  double envelope_violation = 0.0;    // max over nodes of T_m - T_max(N_m), 0 if satisfied
  nlp::KktResiduals kkt;
  int iterations = 0;
  double seconds = 0.0;
  std::vector<nlp::IterationRecord> log;
  double sweep_value = 0.0;
  double track_length = 0.0;

  bool converged() const { return status == nlp::Status::Optimal || status == nlp::Status::Acceptable; }
};

struct Inputs {
  vehicle::VehicleParams params;
  tire::MagicFormula tire;
  track::Track track;
};
Inputs load_inputs(const CaseConfig& c);

struct RunOptions {
  std::optional<transcription::Trajectory> warm_start;
  // Applied to the vehicle parameters before the model is built.
  std::function<void(vehicle::VehicleParams&)> modify;
  // Freeze the design instead of optimizing it.
  std::optional<vehicle::Design> frozen_design;
  // Already loaded inputs; skips reading the files again.
  const Inputs* inputs = nullptr;
};

// Solves the case's lap problem. Non-convergence is reported in the status,
// not thrown; input errors throw InputError.
CaseReport run_case(const CaseConfig& c, const RunOptions& opt = {});

// Control-only solves with the design frozen, one per sweep value. Each point
// starts from the previous converged one; a failed point is recorded and the
// sweep moves on.
std::vector<CaseReport> run_sweep(const CaseConfig& c);

// Frozen design of a sweep: the configured start point of sweep.design, or
// the vehicle baseline.
vehicle::Design sweep_design(const CaseConfig& c, const vehicle::VehicleParams& p);

// Mass moved from the sprung body to every corner at constant total.
void redistribute_mass(vehicle::VehicleParams& p, double per_corner);

}  // namespace laptime::cases
