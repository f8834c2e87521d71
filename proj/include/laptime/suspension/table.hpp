#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace laptime::suspension {

enum class OutOfRange { Clamp, Reject };

// Piecewise-linear lookup on a strictly increasing axis.
class Table1D {
 public:
  Table1D() = default;
  Table1D(std::vector<double> x, std::vector<double> values, OutOfRange mode = OutOfRange::Clamp);
  static Table1D constant(double v);

  double operator()(double x) const;
  // Exact integral of the interpolant from 0 to x.
  double integral(double x) const;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> x_, v_;
  OutOfRange mode_ = OutOfRange::Clamp;
};

// Bilinear lookup; values[i][j] sits at (x[i], y[j]).
class Table2D {
 public:
  Table2D() = default;
  Table2D(std::vector<double> x, std::vector<double> y, std::vector<std::vector<double>> values,
          OutOfRange mode = OutOfRange::Clamp);
  static Table2D constant(double v);
  // f(x, y) = slope * y on the given ranges.
  static Table2D linear_in_y(double slope, double x_range, double y_range);

  double operator()(double x, double y) const;
  // Exact integral in y from 0 to y at fixed x.
  double integral_y(double x, double y) const;
  bool depends_on_x() const;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<std::vector<double>>& values() const { return v_; }

 private:
  std::vector<double> x_, y_;
  std::vector<std::vector<double>> v_;
  OutOfRange mode_ = OutOfRange::Clamp;
};

double interp1(const std::vector<double>& x, const std::vector<double>& v, double q,
               OutOfRange mode = OutOfRange::Clamp);

Table1D table1d_from_json(const nlohmann::json& j, const std::string& what);
Table2D table2d_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json to_json(const Table1D& t);
nlohmann::json to_json(const Table2D& t);

}  // namespace laptime::suspension
