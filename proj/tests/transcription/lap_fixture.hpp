#pragma once

#include <optional>

#include "laptime/transcription/lap_problem.hpp"
#include "../test_support.hpp"

namespace test_support {

inline const laptime::track::Track& oval() {
  static const auto t = laptime::track::make_track(laptime::track::synth_oval(), "oval");
  return t;
}

inline laptime::transcription::LapSetup lap_setup(int nodes, std::optional<laptime::vehicle::CaseId> id,
                                                  laptime::transcription::Boundary b =
                                                      laptime::transcription::Boundary::FlyingLap) {
  using namespace laptime;
  transcription::LapSetup s;
  s.params = vehicle_params();
  s.tire = tire();
  s.track = oval();
  s.nodes = nodes;
  s.boundary = b;
  s.fixed_design = vehicle::baseline(s.params);
  if (id) {
    s.space = vehicle::default_design_space(*id, s.params);
    s.initial_design = vehicle::baseline_design(*id, s.params);
  }
  return s;
}

}  // namespace test_support
