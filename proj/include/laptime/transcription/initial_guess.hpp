#pragma once

#include <vector>

#include "laptime/track/track.hpp"
#include "laptime/transcription/layout.hpp"
#include "laptime/vehicle/model.hpp"

namespace laptime::transcription {

// Centreline run at constant speed v0: n = chi = 0, pure rolling, static
// suspension, torques balancing aerodynamic drag, t_f = length / v0.
// Throws InputError when v0 needs more torque than the motors deliver.
Trajectory initial_guess(const track::Track& t, const vehicle::VehicleModel& m, int nodes, double v0,
                         const std::vector<double>& p = {});

}  // namespace laptime::transcription
