#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "contractix/error.hpp"
#include "contractix/point.hpp"

namespace contractix {

class MapSpec;

namespace maps {

/// t(u) = 0 for |u| <= 1, u - sgn(u) for 1 < |u| < 2, sgn(u) for |u| >= 2.
struct PiecewiseSaturation {
  friend bool operator==(const PiecewiseSaturation&, const PiecewiseSaturation&) = default;
};

/// T(x) = x - c (x - 1/2)^3 on [0, 1], 0 < c <= 4/3.
struct CubicMK {
  double c;
  friend bool operator==(const CubicMK&, const CubicMK&) = default;
};

/// T(x) = lambda x, 0 <= lambda <= 1.
struct Linear {
  double lambda;
  friend bool operator==(const Linear&, const Linear&) = default;
};

struct Identity {
  friend bool operator==(const Identity&, const Identity&) = default;
};

/// PiecewiseSaturation applied to each coordinate of a sup-norm vector.
struct CoordSaturation {
  std::size_t dim;
  friend bool operator==(const CoordSaturation&, const CoordSaturation&) = default;
};

/// inner composed with itself n times. Never nests: see MapSpec::iterate.
struct Iterate {
  std::shared_ptr<const MapSpec> inner;
  std::size_t n;
};

bool operator==(const Iterate& a, const Iterate& b);

}  // namespace maps

/// Tagged description of one of the catalogue self-maps. Immutable; the
/// factories validate parameters.
class MapSpec {
 public:
  using Variant = std::variant<maps::PiecewiseSaturation, maps::CubicMK, maps::Linear, maps::Identity,
                               maps::CoordSaturation, maps::Iterate>;

  static MapSpec piecewise_saturation() { return MapSpec(maps::PiecewiseSaturation{}); }

  static MapSpec cubic_mk(double c) {
    if (!(c > 0.0 && c <= 4.0 / 3.0)) throw DomainError("cubic_mk requires 0 < c <= 4/3");
    return MapSpec(maps::CubicMK{c});
  }

  static MapSpec linear(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("linear requires lambda in [0, 1]");
    return MapSpec(maps::Linear{lambda});
  }

  static MapSpec identity() { return MapSpec(maps::Identity{}); }

  static MapSpec coord_saturation(std::size_t dim) {
    if (dim == 0) throw DomainError("coord_saturation requires dim >= 1");
    return MapSpec(maps::CoordSaturation{dim});
  }

  // Iterate(Iterate(m, a), b) collapses to Iterate(m, a * b).
  static MapSpec iterate(const MapSpec& inner, std::size_t n) {
    if (n == 0) throw DomainError("iterate requires n >= 1");
    if (const auto* it = std::get_if<maps::Iterate>(&inner.v_)) {
      return MapSpec(maps::Iterate{it->inner, it->n * n});
    }
    return MapSpec(maps::Iterate{std::make_shared<const MapSpec>(inner), n});
  }

  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  std::string kind_name() const;

  friend bool operator==(const MapSpec& a, const MapSpec& b) { return a.v_ == b.v_; }

 private:
  explicit MapSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline bool maps::operator==(const Iterate& a, const Iterate& b) {
  return a.n == b.n && *a.inner == *b.inner;
}

inline std::string MapSpec::kind_name() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, maps::PiecewiseSaturation>) return "piecewise_saturation";
        else if constexpr (std::is_same_v<T, maps::CubicMK>) return "cubic_mk";
        else if constexpr (std::is_same_v<T, maps::Linear>) return "linear";
        else if constexpr (std::is_same_v<T, maps::Identity>) return "identity";
        else if constexpr (std::is_same_v<T, maps::CoordSaturation>) return "coord_saturation";
        else return "iterate";
      },
      v_);
}

/// Vector dimension a map acts on, or nullopt for scalar maps.
inline std::optional<std::size_t> map_dimension(const MapSpec& map) {
  if (const auto* cs = map.get_if<maps::CoordSaturation>()) return cs->dim;
  if (const auto* it = map.get_if<maps::Iterate>()) return map_dimension(*it->inner);
  return std::nullopt;
}

/// The map with any Iterate wrapper removed, and the wrapper's count (1 if none).
inline std::pair<const MapSpec*, std::size_t> unwrap_iterate(const MapSpec& map) {
  if (const auto* it = map.get_if<maps::Iterate>()) return {it->inner.get(), it->n};
  return {&map, 1};
}

// Closed cases win at |u| = 1 and |u| = 2; the middle branch is the open band.
inline double saturate(double u) {
  const double a = std::fabs(u);
  if (a <= 1.0) return 0.0;
  if (a >= 2.0) return u > 0 ? 1.0 : -1.0;
  return u > 0 ? u - 1.0 : u + 1.0;
}

namespace detail {

inline Point apply_once(const MapSpec& map, const Point& x) {
  return std::visit(
      [&x](const auto& m) -> Point {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, maps::CoordSaturation>) {
          if (!x.is_vector() || x.dim() != m.dim) {
            throw ComparabilityError("coord_saturation(" + std::to_string(m.dim) +
                                     ") needs a vector point of that dimension");
          }
          std::vector<double> out(x.coords());
          for (double& u : out) u = saturate(u);
          return Point::vector(std::move(out));
        } else if constexpr (std::is_same_v<T, maps::Iterate>) {
          Point y = x;
          for (std::size_t i = 0; i < m.n; ++i) y = apply_once(*m.inner, y);
          return y;
        } else {
          if (!x.is_scalar()) throw ComparabilityError("scalar map applied to a vector point");
          const double u = x.value();
          if constexpr (std::is_same_v<T, maps::PiecewiseSaturation>) {
            return Point::scalar(saturate(u));
          } else if constexpr (std::is_same_v<T, maps::CubicMK>) {
            if (!(u >= 0.0 && u <= 1.0)) throw DomainError("cubic_mk is defined on [0, 1] only");
            const double s = u - 0.5;
            return Point::scalar(u - m.c * s * s * s);
          } else if constexpr (std::is_same_v<T, maps::Linear>) {
            return Point::scalar(m.lambda * u);
          } else {
            return x;
          }
        }
      },
      map.variant());
}

}  // namespace detail

inline Point apply(const MapSpec& map, const Point& x) { return detail::apply_once(map, x); }

/// T^n x by n successive applications.
inline Point apply_n(const MapSpec& map, const Point& x, std::size_t n) {
  Point y = x;
  for (std::size_t i = 0; i < n; ++i) y = apply(map, y);
  return y;
}

/// Analytic fixed point where it is unique; absent for Identity and Linear(1).
inline std::optional<Point> known_fixed_point(const MapSpec& map) {
  return std::visit(
      [](const auto& m) -> std::optional<Point> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, maps::PiecewiseSaturation>) return Point::scalar(0.0);
        else if constexpr (std::is_same_v<T, maps::CubicMK>) return Point::scalar(0.5);
        else if constexpr (std::is_same_v<T, maps::Linear>) {
          if (m.lambda < 1.0) return Point::scalar(0.0);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, maps::Identity>) return std::nullopt;
        else if constexpr (std::is_same_v<T, maps::CoordSaturation>) return Point::zeros(m.dim);
        else return known_fixed_point(*m.inner);
      },
      map.variant());
}

/// Bounded sampling region standing in for the whole space.
struct Domain {
  enum class Kind { Interval, Box };
  Kind kind = Kind::Interval;
  std::size_t dim = 0;  // Box only
  double lo = 0.0;
  double hi = 1.0;

  static Domain interval(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("domain requires lo < hi");
    return Domain{Kind::Interval, 0, lo, hi};
  }

  static Domain box(std::size_t dim, double lo, double hi) {
    if (dim == 0) throw DomainError("box domain requires dim >= 1");
    if (!(lo < hi)) throw DomainError("domain requires lo < hi");
    return Domain{Kind::Box, dim, lo, hi};
  }

  bool contains(const Point& p) const {
    if (kind == Kind::Interval) return p.is_scalar() && p.value() >= lo && p.value() <= hi;
    if (!p.is_vector() || p.dim() != dim) return false;
    for (double c : p.coords()) {
      if (c < lo || c > hi) return false;
    }
    return true;
  }

  double width() const { return hi - lo; }

  friend bool operator==(const Domain&, const Domain&) = default;
};

inline Domain default_domain(const MapSpec& map) {
  if (auto d = map_dimension(map)) return Domain::box(*d, -5.0, 5.0);
  if (unwrap_iterate(map).first->get_if<maps::CubicMK>()) return Domain::interval(0.0, 1.0);
  return Domain::interval(-5.0, 5.0);
}

inline void require_domain_fits(const MapSpec& map, const Domain& domain) {
  const auto d = map_dimension(map);
  if (d && (domain.kind != Domain::Kind::Box || domain.dim != *d)) {
    throw ComparabilityError("vector map needs a box domain of dimension " + std::to_string(*d));
  }
  if (!d && domain.kind != Domain::Kind::Interval) {
    throw ComparabilityError("scalar map needs an interval domain");
  }
}

}  // namespace contractix
