#include "laptime/suspension/table.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "laptime/error.hpp"

namespace laptime::suspension {
namespace {

void check_axis(const std::vector<double>& a, const char* name) {
  if (a.empty()) throw InputError(std::string("table axis ") + name + " is empty");
  for (double v : a) {
    if (!std::isfinite(v)) throw InputError(std::string("table axis ") + name + " has a non-finite entry");
  }
  for (size_t i = 1; i < a.size(); ++i) {
    if (!(a[i] > a[i - 1])) throw InputError(std::string("table axis ") + name + " is not strictly increasing");
  }
}

// Segment index and weight for q on axis a; single-point axes give (0, 0).
std::pair<size_t, double> locate(const std::vector<double>& a, double q, OutOfRange mode) {
  if (a.size() == 1) return {0, 0.0};
  if (q < a.front() || q > a.back()) {
    if (mode == OutOfRange::Reject) {
      throw EvaluationError("table lookup at " + std::to_string(q) + " outside [" + std::to_string(a.front()) + ", " +
                            std::to_string(a.back()) + "]");
    }
    q = std::clamp(q, a.front(), a.back());
  }
  auto it = std::upper_bound(a.begin(), a.end(), q);
  size_t i = it == a.begin() ? 0 : static_cast<size_t>(it - a.begin()) - 1;
  if (i >= a.size() - 1) i = a.size() - 2;
  double w = (q - a[i]) / (a[i + 1] - a[i]);
  return {i, w};
}

// Integral from 0 to q of the clamped piecewise-linear interpolant.
double integrate_pl(const std::vector<double>& a, const std::vector<double>& v, double q) {
  auto f = [&](double t) { return interp1(a, v, t, OutOfRange::Clamp); };
  double lo = std::min(0.0, q);
  double hi = std::max(0.0, q);
  std::vector<double> knots{lo};
  for (double k : a) {
    if (k > lo && k < hi) knots.push_back(k);
  }
  knots.push_back(hi);
  double s = 0.0;
  for (size_t i = 1; i < knots.size(); ++i) {
    s += 0.5 * (f(knots[i - 1]) + f(knots[i])) * (knots[i] - knots[i - 1]);
  }
  return q >= 0.0 ? s : -s;
}

}  // namespace

double interp1(const std::vector<double>& x, const std::vector<double>& v, double q, OutOfRange mode) {
  auto [i, w] = locate(x, q, mode);
  if (x.size() == 1) return v[0];
  return v[i] + w * (v[i + 1] - v[i]);
}

Table1D::Table1D(std::vector<double> x, std::vector<double> values, OutOfRange mode)
    : x_(std::move(x)), v_(std::move(values)), mode_(mode) {
  check_axis(x_, "x");
  if (v_.size() != x_.size()) throw InputError("1-D table: value count does not match axis length");
}

Table1D Table1D::constant(double v) { return Table1D({0.0}, {v}); }

double Table1D::operator()(double q) const { return interp1(x_, v_, q, mode_); }

double Table1D::integral(double q) const { return integrate_pl(x_, v_, q); }

Table2D::Table2D(std::vector<double> x, std::vector<double> y, std::vector<std::vector<double>> values,
                 OutOfRange mode)
    : x_(std::move(x)), y_(std::move(y)), v_(std::move(values)), mode_(mode) {
  check_axis(x_, "x");
  check_axis(y_, "y");
  if (v_.size() != x_.size()) throw InputError("2-D table: row count does not match x axis");
  for (const auto& row : v_) {
    if (row.size() != y_.size()) throw InputError("2-D table: column count does not match y axis");
  }
}

Table2D Table2D::constant(double v) { return Table2D({0.0}, {0.0}, {{v}}); }

Table2D Table2D::linear_in_y(double slope, double x_range, double y_range) {
  std::vector<double> xs{-x_range, x_range};
  std::vector<double> ys{-y_range, y_range};
  std::vector<std::vector<double>> vals(2, std::vector<double>{-slope * y_range, slope * y_range});
  return Table2D(xs, ys, vals);
}

double Table2D::operator()(double qx, double qy) const {
  auto [i, wx] = locate(x_, qx, mode_);
  auto [j, wy] = locate(y_, qy, mode_);
  size_t i1 = x_.size() > 1 ? i + 1 : i;
  size_t j1 = y_.size() > 1 ? j + 1 : j;
  double a = v_[i][j] + wy * (v_[i][j1] - v_[i][j]);
  double b = v_[i1][j] + wy * (v_[i1][j1] - v_[i1][j]);
  return a + wx * (b - a);
}

double Table2D::integral_y(double qx, double qy) const {
  auto [i, wx] = locate(x_, qx, mode_);
  size_t i1 = x_.size() > 1 ? i + 1 : i;
  std::vector<double> col(y_.size());
  for (size_t j = 0; j < y_.size(); ++j) col[j] = v_[i][j] + wx * (v_[i1][j] - v_[i][j]);
  return integrate_pl(y_, col, qy);
}

bool Table2D::depends_on_x() const {
  for (size_t i = 1; i < v_.size(); ++i) {
    if (v_[i] != v_[0]) return true;
  }
  return false;
}

Table1D table1d_from_json(const nlohmann::json& j, const std::string& what) {
  try {
    if (j.is_number()) return Table1D::constant(j.get<double>());
    auto mode = j.value("out_of_range", std::string("clamp")) == "reject" ? OutOfRange::Reject : OutOfRange::Clamp;
    return Table1D(j.at("x").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(), mode);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(what + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(what + ": " + e.what());
  }
}

Table2D table2d_from_json(const nlohmann::json& j, const std::string& what) {
  try {
    if (j.is_number()) return Table2D::constant(j.get<double>());
    auto mode = j.value("out_of_range", std::string("clamp")) == "reject" ? OutOfRange::Reject : OutOfRange::Clamp;
    return Table2D(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>(),
                   j.at("values").get<std::vector<std::vector<double>>>(), mode);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(what + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(what + ": " + e.what());
  }
}

nlohmann::json to_json(const Table1D& t) { return {{"x", t.x()}, {"values", t.values()}}; }

nlohmann::json to_json(const Table2D& t) { return {{"x", t.x()}, {"y", t.y()}, {"values", t.values()}}; }

}  // namespace laptime::suspension
