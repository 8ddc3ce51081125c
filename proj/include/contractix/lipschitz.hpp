#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "contractix/maps.hpp"
#include "contractix/rng.hpp"

namespace contractix {

/// Contraction events must sit below 1 - kStrictnessGap to count; keeps
/// rounding noise on unit slopes from being read as a contraction.
inline constexpr double kStrictnessGap = 1e-9;

/// Offset of the breakpoint enrichment pairs.
inline constexpr double kEnrichmentOffset = 1e-3;

/// Kinks of the catalogue maps plus the cubic's flat point.
inline constexpr std::array<double, 5> kEnrichmentAnchors{-2.0, -1.0, 1.0, 2.0, 0.5};

struct LipschitzEstimate {
  enum class Kind { Exact, SampledLowerBound };

  MapSpec map;
  std::size_t iterate_n = 1;
  double value = 0.0;
  Kind kind = Kind::Exact;
  std::size_t pairs_tested = 0;
  std::int64_t seed = 0;
};

inline double power(double base, std::size_t exponent) {
  double r = 1.0;
  for (std::size_t i = 0; i < exponent; ++i) r *= base;
  return r;
}

/// Global Lipschitz constant of T^n for the maps where it is known in closed
/// form. Every catalogue map is covered; Iterate(m, a) at n reads m at a*n.
inline std::optional<double> exact_lipschitz(const MapSpec& map, std::size_t n) {
  if (n == 0) throw DomainError("iterate count must be positive");
  return std::visit(
      [n](const auto& m) -> std::optional<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, maps::PiecewiseSaturation> ||
                      std::is_same_v<T, maps::CoordSaturation>) {
          return n == 1 ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, maps::CubicMK>) {
          // slopes of T lie in [1 - 3c/4, 1] and (T^n)'(1/2) = 1
          return 1.0;
        } else if constexpr (std::is_same_v<T, maps::Linear>) {
          return power(m.lambda, n);
        } else if constexpr (std::is_same_v<T, maps::Identity>) {
          return 1.0;
        } else {
          return exact_lipschitz(*m.inner, m.n * n);
        }
      },
      map.variant());
}

namespace detail {

inline Point sample_point(const Domain& domain, const CounterRng& rng, std::uint64_t stream) {
  if (domain.kind == Domain::Kind::Interval) {
    return Point::scalar(rng.uniform(domain.lo, domain.hi, stream, 0));
  }
  std::vector<double> c(domain.dim);
  for (std::size_t j = 0; j < domain.dim; ++j) c[j] = rng.uniform(domain.lo, domain.hi, stream, j);
  return Point::vector(std::move(c));
}

inline Point constant_point(const Domain& domain, double v) {
  if (domain.kind == Domain::Kind::Interval) return Point::scalar(v);
  return Point::vector(std::vector<double>(domain.dim, v));
}

/// Deterministic pairs straddling every anchor that lies inside the domain.
inline std::vector<std::pair<Point, Point>> enrichment_pairs(const Domain& domain) {
  std::vector<std::pair<Point, Point>> out;
  const double h = kEnrichmentOffset;
  for (double p : kEnrichmentAnchors) {
    const std::array<std::pair<double, double>, 3> offsets{{{p - h, p + h}, {p - h, p}, {p, p + h}}};
    for (const auto& [a, b] : offsets) {
      if (a >= domain.lo && b <= domain.hi) out.emplace_back(constant_point(domain, a), constant_point(domain, b));
    }
  }
  return out;
}

inline constexpr std::uint64_t kMaxRedraws = 64;

/// Pair i of a sampled run; degenerate draws are re-drawn with the next attempt stream.
inline std::optional<std::pair<Point, Point>> sampled_pair(const Domain& domain, const CounterRng& rng,
                                                           std::uint64_t i) {
  for (std::uint64_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const std::uint64_t base = (i * kMaxRedraws + attempt) * 2;
    Point x = sample_point(domain, rng, base);
    Point y = sample_point(domain, rng, base + 1);
    if (metric(x, y) > 0.0) return std::make_pair(std::move(x), std::move(y));
  }
  return std::nullopt;
}

}  // namespace detail

/// Largest observed d(T^n x, T^n y) / d(x, y) over breakpoint enrichment pairs
/// plus num_pairs uniform pairs. A lower bound on Lip(T^n), never an upper one.
inline LipschitzEstimate sampled_lipschitz(const MapSpec& map, std::size_t n, const Domain& domain,
                                           std::size_t num_pairs, std::int64_t seed) {
  if (n == 0) throw DomainError("iterate count must be positive");
  if (num_pairs == 0) throw DomainError("num_pairs must be positive");
  require_domain_fits(map, domain);

  LipschitzEstimate est{map, n, 0.0, LipschitzEstimate::Kind::SampledLowerBound, 0, seed};
  auto consider = [&](const Point& x, const Point& y) {
    const double d = metric(x, y);
    if (d == 0.0) return;
    const double r = metric(apply_n(map, x, n), apply_n(map, y, n)) / d;
    if (r > est.value) est.value = r;
    ++est.pairs_tested;
  };

  for (const auto& [x, y] : detail::enrichment_pairs(domain)) consider(x, y);
  const CounterRng rng(static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < num_pairs; ++i) {
    if (auto pr = detail::sampled_pair(domain, rng, i)) consider(pr->first, pr->second);
  }
  return est;
}

struct Classification {
  enum class Verdict { StrictContraction, LogicallyContractive, NotDetected };

  Verdict verdict = Verdict::NotDetected;
  std::size_t first_event = 0;  // N with Lip(T^N) < 1; 0 when NotDetected
  double mu = 1.0;              // Lip(T^N)
  bool heuristic = false;       // some consulted value was a sampled lower bound
};

inline const char* to_string(Classification::Verdict v) {
  switch (v) {
    case Classification::Verdict::StrictContraction: return "strict_contraction";
    case Classification::Verdict::LogicallyContractive: return "logically_contractive";
    case Classification::Verdict::NotDetected: return "not_detected";
  }
  return "?";
}

/// Searches n = 1..max_n for the first strict iterate. Exact table entries are
/// definitive; sampled lower bounds mark the result heuristic.
inline Classification classify(const MapSpec& map, std::size_t max_n, const Domain& domain, std::int64_t seed,
                               std::size_t sample_pairs = 2000) {
  if (max_n == 0) throw DomainError("max_n must be positive");
  Classification out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    double lip;
    if (auto exact = exact_lipschitz(map, n)) {
      lip = *exact;
    } else {
      lip = sampled_lipschitz(map, n, domain, sample_pairs, seed).value;
      out.heuristic = true;
    }
    if (lip < 1.0 - kStrictnessGap) {
      out.verdict = n == 1 ? Classification::Verdict::StrictContraction
                           : Classification::Verdict::LogicallyContractive;
      out.first_event = n;
      out.mu = lip;
      return out;
    }
  }
  return out;
}

}  // namespace contractix
