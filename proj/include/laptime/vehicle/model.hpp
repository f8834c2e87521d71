#pragma once

#include <array>
#include <vector>

#include "laptime/suspension/suspension.hpp"
#include "laptime/tire/magic_formula.hpp"
#include "laptime/vehicle/design.hpp"
#include "laptime/vehicle/mass_matrix.hpp"
#include "laptime/vehicle/params.hpp"
#include "laptime/vehicle/state.hpp"

namespace laptime::vehicle {

struct ModelOptions {
  // Freeze heave, roll, pitch and wheel travel at the static reference.
  bool lock_suspension = false;
};

// Static reference of a resolved design: jounce zero, preloads and the
// wheel-centre heights at rest.
struct StaticReference {
  std::array<double, 4> preload{};
  std::array<double, 4> z_w0{};
  std::array<double, 4> z_u{};
  double z_body = 0.0;
};

// Everything the equations of motion need for one design.
struct VehicleModel {
  VehicleParams params;
  Design design;
  tire::MagicFormula tire;
  ModelOptions options;

  BodyInertia inertia;
  std::array<suspension::AxleSuspension, 2> axles;  // front, rear
  std::array<double, 4> spin_inertia{};
  std::array<double, 4> powertrain_mass{};
  StaticReference rest;

  const suspension::AxleSuspension& axle_of(int wheel) const { return axles[wheel < 2 ? 0 : 1]; }
  double total_mass() const;
};

VehicleModel make_model(const VehicleParams& p, const tire::MagicFormula& tire, const Design& d,
                        const ModelOptions& opt = {});

// State at rest in static equilibrium; path coordinates are zero.
State static_state(const VehicleModel& m);

}  // namespace laptime::vehicle
