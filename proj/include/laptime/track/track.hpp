#pragma once

#include <string>
#include <vector>

namespace laptime::track {

// Centreline sampled on a uniform arc-length grid. For closed tracks the last
// sample repeats the first at s = length. `width` is the half-width available
// to the vehicle centre on either side of the centreline.
struct Track {
  std::string name;
  bool closed = false;
  double length = 0.0;
  std::vector<double> s, curvature, width, x, y, heading;
  std::vector<std::string> warnings;

  double curvature_at(double s) const;
  double width_at(double s) const;
  double heading_at(double s) const;
  double x_at(double s) const;
  double y_at(double s) const;
  // Largest |C| * w along the track; must stay below 1.
  double max_offset_ratio() const;
};

struct BuildOptions {
  double spacing = 2.0;
  double default_width = 6.0;
  // Treat as closed even if the end points do not coincide.
  bool force_closed = false;
  double closure_tolerance = 0.5;
};

struct PathRates {
  double sdot = 0.0;
  double ndot = 0.0;
  double chidot = 0.0;
};

// Curvature from planar points via index-based central differences
// (one-sided at open ends, wrapped for closed loops).
std::vector<double> curvature_from_points(const std::vector<double>& x, const std::vector<double>& y, bool closed);

// Curvilinear rates of (s, n, chi) for global velocity (vx, vy), yaw psi and
// yaw rate psidot. Throws EvaluationError when 1 - n C is not positive.
PathRates path_rates(double vx, double vy, double psi, double psidot, double n, double chi, double curvature);

Track build_track(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& width,
                  const BuildOptions& opt = {});

// CSV with columns X,Y[,width]; a header row is optional.
Track load_track_csv(const std::string& path, const BuildOptions& opt = {});
void save_track_csv(const Track& t, const std::string& path);
// Raw point CSV (X,Y,width) for the synthetic generators.
void save_points_csv(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w,
                     const std::string& path);

// Raw centreline points of the bundled synthetic layouts.
struct RawPoints {
  std::vector<double> x, y, w;
  bool closed = true;
};
RawPoints synth_oval(double length = 1200.0, double radius = 90.0, double transition = 30.0, double width = 6.0);
RawPoints synth_mini_circuit(double length = 2000.0, double width = 6.0);
RawPoints synth_s_curve(double width = 6.0);
RawPoints synth_straight(double length, double width = 6.0);
RawPoints synth_circle(double radius, double step_deg);

Track make_track(const RawPoints& p, const std::string& name, const BuildOptions& opt = {});

}  // namespace laptime::track
