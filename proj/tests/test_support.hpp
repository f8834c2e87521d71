#pragma once

#include <string>

#include "laptime/vehicle/dynamics.hpp"
#include "laptime/vehicle/params.hpp"

namespace test_support {

inline std::string data(const std::string& rel) { return std::string(LAPTIME_DATA_DIR) + "/" + rel; }

inline const laptime::vehicle::VehicleParams& vehicle_params() {
  static const auto p = laptime::vehicle::load_vehicle(data("vehicles/f3_4iwd.json"));
  return p;
}

inline const laptime::tire::MagicFormula& tire() {
  static const auto t = laptime::vehicle::load_tire_for(vehicle_params());
  return t;
}

inline laptime::vehicle::VehicleModel model(const laptime::vehicle::ModelOptions& opt = {}) {
  const auto& p = vehicle_params();
  return laptime::vehicle::make_model(p, tire(), laptime::vehicle::baseline(p), opt);
}

}  // namespace test_support
