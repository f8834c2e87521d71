#include "laptime/track/track.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "laptime/error.hpp"

namespace laptime::track {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// C1 cubic Hermite on the uniform grid with central-difference slopes. On
// closed tracks samples wrap with `jump` added per lap.
double grid_interp(const Track& t, const std::vector<double>& v, double s, double jump = 0.0) {
  const long m = static_cast<long>(t.s.size()) - 1;
  const double ds = t.length / static_cast<double>(m);
  double laps = 0.0;
  if (t.closed) {
    laps = std::floor(s / t.length);
    s -= laps * t.length;
  } else {
    s = std::clamp(s, 0.0, t.length);
  }
  const double u = s / ds;
  const long i = std::clamp(static_cast<long>(u), 0L, m - 1);
  const double w = u - static_cast<double>(i);
  auto at = [&](long j) {
    if (t.closed) {
      long k = j % m;
      if (k < 0) k += m;
      return v[static_cast<size_t>(k)] + static_cast<double>((j - k) / m) * jump;
    }
    return v[static_cast<size_t>(std::clamp(j, 0L, m))];
  };
  const double p0 = at(i), p1 = at(i + 1);
  auto slope = [&](long j) {
    if (!t.closed && j == 0) return at(1) - at(0);
    if (!t.closed && j == m) return at(m) - at(m - 1);
    return 0.5 * (at(j + 1) - at(j - 1));
  };
  const double m0 = slope(i), m1 = slope(i + 1);
  const double w2 = w * w, w3 = w2 * w;
  const double value = (2 * w3 - 3 * w2 + 1) * p0 + (w3 - 2 * w2 + w) * m0 + (-2 * w3 + 3 * w2) * p1 + (w3 - w2) * m1;
  return value + laps * jump;
}

double lin_interp(const std::vector<double>& xs, const std::vector<double>& v, double q) {
  auto it = std::upper_bound(xs.begin(), xs.end(), q);
  size_t i = it == xs.begin() ? 0 : static_cast<size_t>(it - xs.begin()) - 1;
  i = std::min(i, xs.size() - 2);
  double w = (q - xs[i]) / (xs[i + 1] - xs[i]);
  return v[i] + w * (v[i + 1] - v[i]);
}

bool segments_cross(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
  auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
    return (qx - px) * (ry - py) - (qy - py) * (rx - px);
  };
  double o1 = orient(ax, ay, bx, by, cx, cy);
  double o2 = orient(ax, ay, bx, by, dx, dy);
  double o3 = orient(cx, cy, dx, dy, ax, ay);
  double o4 = orient(cx, cy, dx, dy, bx, by);
  if (o1 == 0.0 && o2 == 0.0) {
    // Collinear: overlap of the projections.
    bool use_x = std::abs(bx - ax) >= std::abs(by - ay);
    double a0 = use_x ? ax : ay, a1 = use_x ? bx : by;
    double c0 = use_x ? cx : cy, c1 = use_x ? dx : dy;
    return std::max(std::min(a0, a1), std::min(c0, c1)) <= std::min(std::max(a0, a1), std::max(c0, c1));
  }
  return o1 * o2 <= 0.0 && o3 * o4 <= 0.0;
}

}  // namespace

double Track::curvature_at(double q) const { return grid_interp(*this, curvature, q); }
double Track::width_at(double q) const { return grid_interp(*this, width, q); }
double Track::x_at(double q) const { return grid_interp(*this, x, q); }
double Track::y_at(double q) const { return grid_interp(*this, y, q); }

double Track::heading_at(double q) const {
  return grid_interp(*this, heading, q, closed ? heading.back() - heading.front() : 0.0);
}

double Track::max_offset_ratio() const {
  double r = 0.0;
  for (size_t i = 0; i < s.size(); ++i) r = std::max(r, std::abs(curvature[i]) * width[i]);
  return r;
}

std::vector<double> curvature_from_points(const std::vector<double>& x, const std::vector<double>& y, bool closed) {
  const size_t n = x.size();
  if (n < 3 || y.size() != n) throw InputError("curvature needs at least 3 points with matching x/y");
  std::vector<double> c(n);
  auto at = [&](const std::vector<double>& v, long i) {
    long m = static_cast<long>(n);
    return v[static_cast<size_t>(((i % m) + m) % m)];
  };
  for (size_t k = 0; k < n; ++k) {
    long i = static_cast<long>(k);
    double dx, dy, ddx, ddy;
    if (closed || (k > 0 && k + 1 < n)) {
      dx = 0.5 * (at(x, i + 1) - at(x, i - 1));
      dy = 0.5 * (at(y, i + 1) - at(y, i - 1));
      ddx = at(x, i + 1) - 2.0 * at(x, i) + at(x, i - 1);
      ddy = at(y, i + 1) - 2.0 * at(y, i) + at(y, i - 1);
    } else if (k == 0) {
      dx = x[1] - x[0];
      dy = y[1] - y[0];
      ddx = x[2] - 2.0 * x[1] + x[0];
      ddy = y[2] - 2.0 * y[1] + y[0];
    } else {
      dx = x[n - 1] - x[n - 2];
      dy = y[n - 1] - y[n - 2];
      ddx = x[n - 1] - 2.0 * x[n - 2] + x[n - 3];
      ddy = y[n - 1] - 2.0 * y[n - 2] + y[n - 3];
    }
    double den = std::pow(dx * dx + dy * dy, 1.5);
    c[k] = (dx * ddy - ddx * dy) / den;
  }
  return c;
}

PathRates path_rates(double vx, double vy, double psi, double psidot, double n, double chi, double curvature) {
  double denom = 1.0 - n * curvature;
  if (!(denom > 1e-6)) {
    throw EvaluationError("curvilinear singularity: 1 - n C = " + std::to_string(denom));
  }
  double th = psi - chi;
  double ct = std::cos(th);
  double st = std::sin(th);
  PathRates r;
  r.sdot = (vx * ct + vy * st) / denom;
  r.ndot = vy * ct - vx * st;
  r.chidot = psidot - curvature * r.sdot;
  return r;
}

Track build_track(const std::vector<double>& xin, const std::vector<double>& yin, const std::vector<double>& win,
                  const BuildOptions& opt) {
  if (xin.size() != yin.size()) throw InputError("track: X and Y column lengths differ");
  if (!win.empty() && win.size() != xin.size()) throw InputError("track: width column length differs from X");
  Track t;

  std::vector<double> x, y, w;
  for (size_t i = 0; i < xin.size(); ++i) {
    double wi = win.empty() ? opt.default_width : win[i];
    if (!std::isfinite(xin[i]) || !std::isfinite(yin[i]) || !std::isfinite(wi)) {
      throw InputError("track: non-finite value at point " + std::to_string(i));
    }
    if (!(wi > 0.0)) throw InputError("track: width must be positive at point " + std::to_string(i));
    if (!x.empty() && std::hypot(xin[i] - x.back(), yin[i] - y.back()) < 1e-9) {
      t.warnings.push_back("dropped duplicate point " + std::to_string(i));
      continue;
    }
    x.push_back(xin[i]);
    y.push_back(yin[i]);
    w.push_back(wi);
  }
  if (x.size() >= 2 && std::hypot(x.back() - x.front(), y.back() - y.front()) < 1e-9) {
    x.pop_back();
    y.pop_back();
    w.pop_back();
    t.closed = true;
  }
  if (x.size() < 3) throw InputError("track: fewer than 3 distinct points");
  if (!t.closed) {
    double gap = std::hypot(x.back() - x.front(), y.back() - y.front());
    double seg = std::hypot(x[1] - x[0], y[1] - y[0]);
    if (opt.force_closed || gap < std::max(opt.closure_tolerance, 1.5 * seg)) t.closed = true;
  }

  const size_t n = x.size();
  std::vector<double> c = curvature_from_points(x, y, t.closed);

  std::vector<double> hd(n);
  for (size_t k = 0; k < n; ++k) {
    size_t kp = t.closed ? (k + 1) % n : std::min(k + 1, n - 1);
    size_t km = t.closed ? (k + n - 1) % n : (k == 0 ? 0 : k - 1);
    hd[k] = std::atan2(y[kp] - y[km], x[kp] - x[km]);
    if (k > 0) {
      while (hd[k] - hd[k - 1] > std::numbers::pi) hd[k] -= kTwoPi;
      while (hd[k] - hd[k - 1] < -std::numbers::pi) hd[k] += kTwoPi;
    }
  }

  std::vector<double> sr(n, 0.0);
  for (size_t k = 1; k < n; ++k) sr[k] = sr[k - 1] + std::hypot(x[k] - x[k - 1], y[k] - y[k - 1]);
  double total = sr.back();
  if (t.closed) {
    total += std::hypot(x.front() - x.back(), y.front() - y.back());
    sr.push_back(total);
    x.push_back(x.front());
    y.push_back(y.front());
    w.push_back(w.front());
    c.push_back(c.front());
    double h = hd.front();
    while (h - hd.back() > std::numbers::pi) h -= kTwoPi;
    while (h - hd.back() < -std::numbers::pi) h += kTwoPi;
    hd.push_back(h);
  }
  t.length = total;

  size_t m = std::max<size_t>(2, static_cast<size_t>(std::lround(total / opt.spacing)));
  double ds = total / static_cast<double>(m);
  for (size_t i = 0; i <= m; ++i) {
    double q = std::min(total, ds * static_cast<double>(i));
    t.s.push_back(q);
    t.x.push_back(lin_interp(sr, x, q));
    t.y.push_back(lin_interp(sr, y, q));
    t.curvature.push_back(lin_interp(sr, c, q));
    t.width.push_back(lin_interp(sr, w, q));
    t.heading.push_back(lin_interp(sr, hd, q));
  }
  if (t.closed) {
    t.curvature.back() = t.curvature.front();
    t.width.back() = t.width.front();
    double turn = t.heading.back() - t.heading.front();
    if (std::abs(std::abs(turn) - kTwoPi) > 0.05) {
      t.warnings.push_back("closed track heading change is " + std::to_string(turn) + " rad, expected +-2 pi");
    }
  }

  // Self-intersection check on the resampled polyline (reported only).
  const size_t segs = t.s.size() - 1;
  bool crossed = false;
  for (size_t i = 0; i < segs && !crossed; ++i) {
    for (size_t j = i + 2; j < segs; ++j) {
      if (t.closed && i == 0 && j == segs - 1) continue;
      if (segments_cross(t.x[i], t.y[i], t.x[i + 1], t.y[i + 1], t.x[j], t.y[j], t.x[j + 1], t.y[j + 1])) {
        t.warnings.push_back("centreline self-intersects near s = " + std::to_string(t.s[i]) + " and s = " +
                             std::to_string(t.s[j]));
        crossed = true;
        break;
      }
    }
  }

  double ratio = t.max_offset_ratio();
  if (ratio >= 1.0) {
    throw InputError("track: half-width times curvature reaches " + std::to_string(ratio) +
                     "; the curvilinear frame would be singular inside the track");
  }
  return t;
}

Track load_track_csv(const std::string& path, const BuildOptions& opt) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open track file " + path);
  std::vector<double> x, y, w;
  std::string line;
  int lineno = 0;
  int ncols = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    std::vector<double> vals;
    bool numeric = true;
    for (auto& cs : cells) {
      try {
        size_t pos = 0;
        double v = std::stod(cs, &pos);
        while (pos < cs.size() && std::isspace(static_cast<unsigned char>(cs[pos]))) ++pos;
        if (pos != cs.size()) numeric = false;
        vals.push_back(v);
      } catch (...) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (x.empty() && ncols < 0) continue;  // header
      throw ParseError(path, lineno, "non-numeric track row");
    }
    if (vals.size() < 2 || vals.size() > 3) throw ParseError(path, lineno, "expected X,Y[,width]");
    if (ncols < 0) ncols = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != ncols) throw ParseError(path, lineno, "inconsistent column count");
    x.push_back(vals[0]);
    y.push_back(vals[1]);
    if (ncols == 3) w.push_back(vals[2]);
  }
  Track t = build_track(x, y, w, opt);
  auto slash = path.find_last_of('/');
  t.name = slash == std::string::npos ? path : path.substr(slash + 1);
  return t;
}

void save_track_csv(const Track& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out.precision(17);
  out << "s,C,w\n";
  for (size_t i = 0; i < t.s.size(); ++i) out << t.s[i] << "," << t.curvature[i] << "," << t.width[i] << "\n";
}

void save_points_csv(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out.precision(12);
  out << "X,Y,width\n";
  for (size_t i = 0; i < x.size(); ++i) out << x[i] << "," << y[i] << "," << (w.empty() ? 6.0 : w[i]) << "\n";
}

Track make_track(const RawPoints& p, const std::string& name, const BuildOptions& opt) {
  BuildOptions o = opt;
  o.force_closed = p.closed;
  Track t = build_track(p.x, p.y, p.w, o);
  t.name = name;
  return t;
}

}  // namespace laptime::track
