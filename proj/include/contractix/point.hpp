#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "contractix/error.hpp"

namespace contractix {

/// A point of the working metric space: a real scalar under |a - b|, or a
/// finite vector under the sup norm.
class Point {
 public:
  static Point scalar(double value) {
    if (!std::isfinite(value)) throw DomainError("point coordinate is not finite");
    return Point(value);
  }

  static Point vector(std::vector<double> coords) {
    if (coords.empty()) throw DomainError("vector point needs at least one coordinate");
    for (double c : coords) {
      if (!std::isfinite(c)) throw DomainError("point coordinate is not finite");
    }
    return Point(std::move(coords));
  }

  static Point zeros(std::size_t dim) { return vector(std::vector<double>(dim, 0.0)); }

  bool is_scalar() const { return std::holds_alternative<double>(data_); }
  bool is_vector() const { return !is_scalar(); }

  // 0 for scalars.
  std::size_t dim() const { return is_scalar() ? 0 : std::get<1>(data_).size(); }

  double value() const {
    if (!is_scalar()) throw ComparabilityError("expected a scalar point");
    return std::get<0>(data_);
  }

  const std::vector<double>& coords() const {
    if (is_scalar()) throw ComparabilityError("expected a vector point");
    return std::get<1>(data_);
  }

  friend bool operator==(const Point&, const Point&) = default;

  std::string to_string() const;

 private:
  explicit Point(double v) : data_(v) {}
  explicit Point(std::vector<double> v) : data_(std::move(v)) {}

  std::variant<double, std::vector<double>> data_;
};

inline bool comparable(const Point& a, const Point& b) {
  return a.is_scalar() == b.is_scalar() && a.dim() == b.dim();
}

inline double metric(const Point& a, const Point& b) {
  if (!comparable(a, b)) {
    throw ComparabilityError("points are not metrically comparable (variant or dimension mismatch)");
  }
  if (a.is_scalar()) return std::fabs(a.value() - b.value());
  const auto& x = a.coords();
  const auto& y = b.coords();
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sup = std::max(sup, std::fabs(x[i] - y[i]));
  return sup;
}

inline std::string Point::to_string() const {
  char buf[32];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  if (is_scalar()) return fmt(value());
  std::string out = "[";
  const auto& c = coords();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ";";
    out += fmt(c[i]);
  }
  return out + "]";
}

}  // namespace contractix
