#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "contractix/lipschitz.hpp"
#include "contractix/maps.hpp"
#include "contractix/rng.hpp"
#include "contractix/schedules.hpp"

namespace contractix {

/// Additive slack on every checked inequality.
inline constexpr double kCertTolerance = 1e-12;

struct Trajectory {
  MapSpec map;
  Point start;
  std::vector<Point> points;             // points[n] = T^n start
  std::vector<double> distances_to_z;    // d(points[n], z)
  Point z;
};

inline Trajectory iterate(const MapSpec& map, const Point& start, std::size_t n_steps, const Point& z) {
  if (!comparable(start, z)) throw ComparabilityError("start and fixed point have different shapes");
  Trajectory t{map, start, {}, {}, z};
  t.points.reserve(n_steps + 1);
  t.distances_to_z.reserve(n_steps + 1);
  t.points.push_back(start);
  t.distances_to_z.push_back(metric(start, z));
  for (std::size_t n = 0; n < n_steps; ++n) {
    t.points.push_back(apply(map, t.points.back()));
    t.distances_to_z.push_back(metric(t.points.back(), z));
  }
  return t;
}

enum class ZSource { Analytic, Iterated };

inline const char* to_string(ZSource s) { return s == ZSource::Analytic ? "analytic" : "iterated"; }

struct Certificate {
  std::string claim;
  std::size_t checked_instances = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min of bound - observed
  bool passed = true;
  ZSource z_source = ZSource::Analytic;

  void record(double bound, double observed) {
    ++checked_instances;
    worst_margin = std::min(worst_margin, bound - observed);
    passed = worst_margin >= -kCertTolerance;
  }
};

/// Banach iteration of T^event_n from `start`; returns the last iterate.
/// With q = Lip(T^event_n) known, stops once q/(1-q) * step <= tol, which
/// bounds the distance to the true fixed point by tol; otherwise stops on
/// step <= tol. Throws NonContractionError when q is known to be >= 1 or the
/// loop runs out of iterations.
inline Point find_fixed_point(const MapSpec& map, std::size_t event_n, const Point& start, double tol,
                              std::size_t max_iter) {
  if (event_n == 0) throw DomainError("event_n must be positive");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const auto q = exact_lipschitz(map, event_n);
  if (q && *q >= 1.0 - kStrictnessGap) {
    throw NonContractionError("T^" + std::to_string(event_n) + " has Lipschitz constant " + std::to_string(*q) +
                              "; fixed-point iteration is not a contraction");
  }
  const double error_per_step = q ? *q / (1.0 - *q) : 1.0;
  Point y = start;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Point next = apply_n(map, y, event_n);
    const double step = metric(next, y);
    if (error_per_step * step <= tol) return next;
    y = std::move(next);
  }
  throw NonContractionError("no convergence within " + std::to_string(max_iter) + " iterations");
}

struct ResolvedFixedPoint {
  Point z;
  ZSource source;
};

/// Analytic fixed point if known, else iterate the first contraction event.
inline ResolvedFixedPoint resolve_fixed_point(const MapSpec& map, std::size_t event_n, const Point& start) {
  if (auto z = known_fixed_point(map)) return {*z, ZSource::Analytic};
  return {find_fixed_point(map, event_n, start, 1e-12, 100000), ZSource::Iterated};
}

namespace detail {

inline void require_fixed(const MapSpec& map, const Point& z) {
  const double d = metric(apply(map, z), z);
  if (!(d <= kCertTolerance)) {
    throw InvalidFixedPointError("z = " + z.to_string() + " is not fixed: d(Tz, z) = " + std::to_string(d));
  }
}

}  // namespace detail

/// d(T^{n_k} x, z) <= Lambda_k d(x, z) at every stored event, every start.
inline Certificate certify_eventwise(const MapSpec& map, const EventSchedule& s, const std::vector<Point>& starts,
                                     const Point& z, ZSource z_source = ZSource::Analytic) {
  detail::require_fixed(map, z);
  Certificate cert{"eventwise_bound"};
  cert.z_source = z_source;
  if (s.size() == 0) return cert;
  const auto lambda = cumulative_factors(s);
  for (const auto& x : starts) {
    const auto traj = iterate(map, x, s.events().back(), z);
    const double d0 = traj.distances_to_z.front();
    for (std::size_t k = 0; k < s.size(); ++k) {
      cert.record(lambda[k] * d0, traj.distances_to_z[s.events()[k]]);
    }
  }
  return cert;
}

/// For n in [n_1, horizon]: d(T^n x, z) <= Lambda_{1+floor((n-n_1)/M)} d(x, z),
/// and d(T^n x, z) <= d(T^{n_k} x, z) for every stored n_k <= n.
inline Certificate certify_full_sequence(const MapSpec& map, const EventSchedule& s, const std::vector<Point>& starts,
                                         const Point& z, std::size_t horizon, ZSource z_source = ZSource::Analytic) {
  if (!s.gap_bound()) throw ScheduleTooShortError("full-sequence certificate needs a gap bound");
  if (s.size() == 0) throw ScheduleTooShortError("schedule has no events");
  detail::require_fixed(map, z);
  Certificate cert{"full_sequence_bound"};
  cert.z_source = z_source;
  const std::size_t n1 = s.events().front();
  std::vector<double> bounds;
  for (std::size_t n = n1; n <= horizon; ++n) bounds.push_back(rate_bound_vlc(n, s).bound_factor);

  for (const auto& x : starts) {
    const auto traj = iterate(map, x, horizon, z);
    const auto& d = traj.distances_to_z;
    for (std::size_t n = n1; n <= horizon; ++n) {
      cert.record(bounds[n - n1] * d.front(), d[n]);
      for (std::size_t nk : s.events()) {
        if (nk > n) break;
        cert.record(d[nk], d[n]);
      }
    }
  }
  return cert;
}

/// Outcome of sampling the condition d(x,y) in [eps, eps+delta) => d(Tx,Ty) < eps.
struct MeirKeelerVerdict {
  bool holds = true;
  std::optional<Point> x;  // first violating pair
  std::optional<Point> y;
  std::size_t pairs_checked = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min of eps - d(Tx, Ty)
};

/// Largest y >= 1 + eps (within a few ulps) whose computed gap y - 1 is at least eps.
inline double mk_probe_partner(double epsilon) {
  double y = 1.0 + epsilon;
  while (y - 1.0 < epsilon) y = std::nextafter(y, std::numeric_limits<double>::infinity());
  return y;
}

inline MeirKeelerVerdict mk_check(const MapSpec& map, double epsilon, double delta, const Domain& domain,
                                  std::size_t num_pairs, std::int64_t seed) {
  if (!(epsilon > 0.0) || !(delta > 0.0)) throw DomainError("mk_check needs epsilon > 0 and delta > 0");
  require_domain_fits(map, domain);
  MeirKeelerVerdict v;
  bool stop = false;

  auto check = [&](const Point& x, const Point& y) {
    const double dxy = metric(x, y);
    if (!(dxy >= epsilon && dxy < epsilon + delta)) return false;
    const double dt = metric(apply(map, x), apply(map, y));
    ++v.pairs_checked;
    v.worst_margin = std::min(v.worst_margin, epsilon - dt);
    if (!(dt < epsilon)) {
      v.holds = false;
      v.x = x;
      v.y = y;
      stop = true;
    }
    return true;
  };

  const Point px = detail::constant_point(domain, 1.0);
  const Point py = detail::constant_point(domain, mk_probe_partner(epsilon));
  const bool probed = domain.contains(px) && domain.contains(py) && check(px, py);
  if (stop) return v;

  const double gap_hi = std::min(epsilon + delta, domain.width());
  if (gap_hi < epsilon) {
    if (probed) return v;
    throw SamplingExhaustedError("no pair at distance >= epsilon fits inside the domain");
  }

  const CounterRng rng(static_cast<std::uint64_t>(seed));
  const std::uint64_t cap = 100 * static_cast<std::uint64_t>(num_pairs);
  std::size_t accepted = 0;
  for (std::uint64_t draw = 0; draw < cap && accepted < num_pairs; ++draw) {
    const double gap = epsilon + (gap_hi - epsilon) * rng.uniform01(draw, 0);
    const double left = domain.lo + (domain.hi - gap - domain.lo) * rng.uniform01(draw, 1);
    const double right = left + gap;
    if (right > domain.hi) continue;
    const bool flip = rng.bits(draw, 2) & 1;
    Point x = Point::scalar(0.0), y = Point::scalar(0.0);
    if (domain.kind == Domain::Kind::Interval) {
      x = Point::scalar(flip ? right : left);
      y = Point::scalar(flip ? left : right);
    } else {
      // shift one coordinate by the gap, keep the rest
      std::vector<double> a(domain.dim);
      for (std::size_t j = 0; j < domain.dim; ++j) a[j] = rng.uniform(domain.lo, domain.hi, draw, 3 + j);
      const std::size_t axis = (rng.bits(draw, 2) >> 1) % domain.dim;
      std::vector<double> b = a;
      a[axis] = flip ? right : left;
      b[axis] = flip ? left : right;
      x = Point::vector(std::move(a));
      y = Point::vector(std::move(b));
    }
    if (check(x, y)) ++accepted;
    if (stop) return v;
  }
  if (accepted < num_pairs) {
    throw SamplingExhaustedError("only " + std::to_string(accepted) + " of " + std::to_string(num_pairs) +
                                 " annulus pairs found within the draw cap");
  }
  return v;
}

/// delta = c eps^3 / 8, the Meir-Keeler width for the cubic map.
inline double mk_delta_cubic(double c, double epsilon) {
  if (!(c > 0.0 && c <= 4.0 / 3.0)) throw OutOfRangeError("c must lie in (0, 4/3]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw OutOfRangeError("epsilon must lie in (0, 1]");
  return c * epsilon * epsilon * epsilon / 8.0;
}

/// d(T^n x, T^n y) <= k_n d(x, y) for n = 1..max_n over enrichment plus sampled pairs.
inline Certificate ane_check(const MapSpec& map, const std::function<double(std::size_t)>& k_sequence,
                             std::size_t max_n, const Domain& domain, std::size_t num_pairs, std::int64_t seed) {
  require_domain_fits(map, domain);
  std::vector<std::pair<Point, Point>> pairs = detail::enrichment_pairs(domain);
  const CounterRng rng(static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < num_pairs; ++i) {
    if (auto pr = detail::sampled_pair(domain, rng, i)) pairs.push_back(std::move(*pr));
  }
  std::vector<double> d0;
  d0.reserve(pairs.size());
  for (const auto& [x, y] : pairs) d0.push_back(metric(x, y));

  Certificate cert{"asymptotically_nonexpansive"};
  for (std::size_t n = 1; n <= max_n; ++n) {
    const double k = k_sequence(n);
    if (!(k >= 1.0)) throw DomainError("k_n must be >= 1 (n = " + std::to_string(n) + ")");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      pairs[i].first = apply(map, pairs[i].first);
      pairs[i].second = apply(map, pairs[i].second);
      cert.record(k * d0[i], metric(pairs[i].first, pairs[i].second));
    }
  }
  return cert;
}

/// {+-4.5, +-2, +-1.5, +-1, +-0.3, 0} clamped into an interval domain; seeded
/// uniform vectors for a box.
inline std::vector<Point> default_starts(const Domain& domain, std::int64_t seed, std::size_t vector_count = 8) {
  std::vector<Point> out;
  if (domain.kind == Domain::Kind::Interval) {
    const double grid[] = {-4.5, -2.0, -1.5, -1.0, -0.3, 0.0, 0.3, 1.0, 1.5, 2.0, 4.5};
    std::vector<double> vals;
    for (double g : grid) vals.push_back(std::clamp(g, domain.lo, domain.hi));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (double v : vals) out.push_back(Point::scalar(v));
    return out;
  }
  const CounterRng rng(static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < vector_count; ++i) out.push_back(detail::sample_point(domain, rng, 1'000'000 + i));
  return out;
}

}  // namespace contractix
