#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "laptime/nlp/problem.hpp"
#include "laptime/track/track.hpp"
#include "laptime/transcription/layout.hpp"
#include "laptime/vehicle/dynamics.hpp"

namespace laptime::transcription {

enum class Boundary { FlyingLap, StandingStart };
std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// Path rows per node, grouped by kind, four wheels each except the track row.
inline constexpr int kNg = 29;
namespace pg {
inline constexpr int kMotorSpeed = 0;   // N_m - N_b beta <= 0 [rpm]
inline constexpr int kBaseTorque = 4;   // T - 9550 i_g P / N_b <= 0 [N m]
inline constexpr int kPowerTorque = 8;  // (T N_m - 9550 i_g P) / N_b <= 0 [N m at N_b]
inline constexpr int kLoad = 12;        // F_z in [fz_min, fz_max]
inline constexpr int kKappa = 16;
inline constexpr int kAlpha = 20;
inline constexpr int kJounce = 24;
inline constexpr int kTrack = 28;  // n / w(s) in [-1, 1]
}  // namespace pg

// Per-node path rows from the model outputs at (x, u).
void path_rows(const vehicle::VehicleModel& m, const track::Track& t, const vehicle::Evaluation& e, const double* x,
               const double* u, double* g);
void path_bounds(const vehicle::VehicleModel& m, double* lo, double* hi);

// Envelope residuals N_cm = N_m - N_max and T_cm = T_m - T_max(N_m) per wheel.
struct EnvelopeResiduals {
  std::array<double, 4> speed{};
  std::array<double, 4> torque{};
};
EnvelopeResiduals envelope_residuals(const vehicle::VehicleModel& m, const double* x, const double* u);

struct LapSetup {
  vehicle::VehicleParams params;
  tire::MagicFormula tire;
  track::Track track;
  vehicle::ModelOptions model_options;
  // Free design variables; absent means the design below is frozen.
  std::optional<vehicle::DesignSpace> space;
  vehicle::DesignVector initial_design;
  vehicle::Design fixed_design;

  int nodes = 200;
  Boundary boundary = Boundary::FlyingLap;
  double v0 = 20.0;      // initial-guess speed [m/s]
  double v_max = 90.0;   // bound on the planar velocity components
};

// Minimum-time lap as an NLP in scaled variables: every decision variable is
// mapped affinely onto [-1, 1] and each row carries a factor fixed from the
// Jacobian at the first initial point.
class LapProblem : public nlp::Problem {
 public:
  explicit LapProblem(LapSetup setup, const std::optional<Trajectory>& guess = std::nullopt);

  int num_variables() const override { return layout_.size(); }
  int num_constraints() const override { return m_; }
  void bounds(double* x_l, double* x_u, double* g_l, double* g_u) const override;
  void initial_point(double* x) const override;
  double objective(const double* y) const override;
  void gradient(const double* y, double* grad) const override;
  void constraints(const double* y, double* g) const override;
  nlp::Sparsity jacobian_structure() const override { return pattern_; }
  void jacobian(const double* y, double* values) const override;
  void violation_weights(double* w) const override;

  const LapSetup& setup() const { return setup_; }
  const Layout& layout() const { return layout_; }
  int num_defects() const { return n_def_; }
  int num_path() const { return n_path_; }
  int num_boundary() const { return m_ - n_def_ - n_path_; }
  int path_row(int node, int j) const { return n_def_ + node * kNg + j; }
  std::string describe_row(int row) const;
  std::string describe_variable(int col) const;

  // Physical <-> scaled decision vectors.
  std::vector<double> scale(const std::vector<double>& y) const;
  std::vector<double> unscale(const double* ys) const;
  Trajectory trajectory(const double* ys) const { return unpack(layout_, unscale(ys)); }
  std::vector<double> encode(const Trajectory& t) const { return scale(pack(layout_, t)); }

  const std::vector<double>& lower() const { return lo_; }
  const std::vector<double>& upper() const { return hi_; }
  const std::vector<double>& row_scale() const { return row_scale_; }
  double time_reference() const { return t_ref_; }

  vehicle::Design design_of(const std::vector<double>& p) const;
  vehicle::VehicleModel model_of(const std::vector<double>& p) const;
  // Unscaled constraint rows, physical units.
  std::vector<double> physical_constraints(const Trajectory& t) const;
  void physical_constraint_bounds(std::vector<double>& lo, std::vector<double>& hi) const;

 private:
  struct NodeBlock {
    std::array<double, vehicle::kNx + kNg> out{};
    // d out / d (scaled local column), row-major (kNx + kNg) x (kNx + kNu)
    std::vector<double> d;
  };

  void set_bounds();
  void setup_rows();
  void eval_rows(const Trajectory& t, const vehicle::VehicleModel& m, double* g) const;
  void node_outputs(const vehicle::VehicleModel& m, const double* x, const double* u, double* out) const;
  void node_block(const vehicle::VehicleModel& m, const Trajectory& t, int k, NodeBlock& b) const;
  // Pattern (values == nullptr) or value fill in one fixed order.
  void walk(nlp::Sparsity* pat, double* values, const std::vector<NodeBlock>* blocks,
            const std::vector<std::vector<double>>* dp, const Trajectory* t) const;
  void raw_jacobian(const double* ys, double* values) const;

  LapSetup setup_;
  Layout layout_;
  int n_def_ = 0, n_path_ = 0, m_ = 0;
  std::vector<double> lo_, hi_, mid_, half_;
  std::vector<double> glo_, ghi_;  // physical row bounds
  std::vector<double> row_scale_;
  std::vector<double> y0_;  // scaled initial point
  double t_ref_ = 1.0;
  vehicle::VehicleModel fixed_model_;
  nlp::Sparsity pattern_;

  // Boundary rows: linear part sum coef * y_phys, plus p-dependent terms.
  struct BoundaryRow {
    std::string name;
    std::vector<std::pair<int, double>> terms;
    double lo = 0.0, hi = 0.0;
    int static_state = -1;  // subtract the static value of this state index
    int motor = -1;         // N_b beta of this wheel's motor
  };
  std::vector<BoundaryRow> brows_;
  std::vector<std::array<bool, vehicle::kNx + vehicle::kNu>> deps_;  // per node output
  std::vector<bool> p_dep_;                                          // per node output
};

}  // namespace laptime::transcription
