#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "contractix/error.hpp"
#include "contractix/lipschitz.hpp"

namespace contractix {

/// Finite prefix of an event schedule: event indices n_1 < ... < n_K, their
/// factors lambda_k in [0, 1], and an optional bound M on consecutive gaps.
///
/// A zero factor is allowed. It is what an iterate collapsing to a constant
/// produces, and every bound built from it stays a valid upper bound.
class EventSchedule {
 public:
  EventSchedule(std::vector<std::size_t> events, std::vector<double> factors,
                std::optional<std::size_t> gap_bound = std::nullopt)
      : events_(std::move(events)), factors_(std::move(factors)), gap_bound_(gap_bound) {
    if (events_.size() != factors_.size()) {
      throw InvalidFactorError("schedule needs exactly one factor per event");
    }
    for (std::size_t k = 0; k < events_.size(); ++k) {
      if (events_[k] == 0) throw OutOfRangeError("event indices must be positive");
      if (k > 0 && events_[k] <= events_[k - 1]) throw OutOfRangeError("event indices must be strictly increasing");
      if (!(factors_[k] >= 0.0 && factors_[k] <= 1.0)) throw InvalidFactorError("factors must lie in [0, 1]");
    }
    if (gap_bound_) {
      if (*gap_bound_ == 0) throw OutOfRangeError("gap bound must be positive");
      for (std::size_t k = 1; k < events_.size(); ++k) {
        if (events_[k] - events_[k - 1] > *gap_bound_) {
          throw OutOfRangeError("event gap " + std::to_string(events_[k] - events_[k - 1]) +
                                " exceeds gap bound " + std::to_string(*gap_bound_));
        }
      }
    }
  }

  const std::vector<std::size_t>& events() const { return events_; }
  const std::vector<double>& factors() const { return factors_; }
  const std::optional<std::size_t>& gap_bound() const { return gap_bound_; }
  std::size_t size() const { return events_.size(); }

  friend bool operator==(const EventSchedule&, const EventSchedule&) = default;

 private:
  std::vector<std::size_t> events_;
  std::vector<double> factors_;
  std::optional<std::size_t> gap_bound_;
};

/// Named factor sequences for extending a schedule past its stored prefix.
/// Indexed by factor position k >= 1.
///   constant:<l>          l
///   one_minus_inv_square  1 - 1/(k+1)^2   (partial product (K+2)/(2(K+1)))
///   one_minus_inv         1 - 1/(k+1)     (partial product 1/(K+1))
class FactorGenerator {
 public:
  enum class Kind { Constant, OneMinusInvSquare, OneMinusInv };

  static FactorGenerator constant(double lambda) { return FactorGenerator(Kind::Constant, lambda); }
  static FactorGenerator one_minus_inv_square() { return FactorGenerator(Kind::OneMinusInvSquare, 0.0); }
  static FactorGenerator one_minus_inv() { return FactorGenerator(Kind::OneMinusInv, 0.0); }

  static FactorGenerator parse(const std::string& name) {
    if (name == "one_minus_inv_square") return one_minus_inv_square();
    if (name == "one_minus_inv") return one_minus_inv();
    const std::string prefix = "constant:";
    if (name.rfind(prefix, 0) == 0) {
      const std::string num = name.substr(prefix.size());
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(num, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != num.size()) throw ParseError("bad constant generator '" + name + "'");
      return constant(v);
    }
    throw ParseError("unknown generator preset '" + name + "'");
  }

  double operator()(std::size_t k) const {
    const double j = static_cast<double>(k) + 1.0;
    switch (kind_) {
      case Kind::Constant: return lambda_;
      case Kind::OneMinusInvSquare: return 1.0 - 1.0 / (j * j);
      case Kind::OneMinusInv: return 1.0 - 1.0 / j;
    }
    return lambda_;
  }

  // -ln of the k-th factor, computed without forming 1 - tiny.
  double neg_log(std::size_t k) const {
    const double j = static_cast<double>(k) + 1.0;
    switch (kind_) {
      case Kind::Constant: return -std::log(lambda_);
      case Kind::OneMinusInvSquare: return -std::log1p(-1.0 / (j * j));
      case Kind::OneMinusInv: return -std::log1p(-1.0 / j);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::OneMinusInvSquare: return "one_minus_inv_square";
      case Kind::OneMinusInv: return "one_minus_inv";
      case Kind::Constant: break;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "constant:%.17g", lambda_);
    return buf;
  }

  Kind kind() const { return kind_; }

 private:
  FactorGenerator(Kind kind, double lambda) : kind_(kind), lambda_(lambda) {}
  Kind kind_;
  double lambda_;
};

/// n_m = m n1 with constant factor mu; gap bound n1.
inline EventSchedule canonical_schedule(std::size_t n1, double mu, std::size_t count) {
  if (n1 == 0) throw OutOfRangeError("first event must be positive");
  if (count == 0) throw OutOfRangeError("schedule length must be positive");
  if (!(mu >= 0.0 && mu < 1.0)) throw InvalidFactorError("canonical schedule needs 0 <= mu < 1");
  std::vector<std::size_t> events(count);
  for (std::size_t m = 0; m < count; ++m) events[m] = (m + 1) * n1;
  return EventSchedule(std::move(events), std::vector<double>(count, mu), n1);
}

/// Events stride, 2 stride, ... with the generator's first `count` factors.
inline EventSchedule generated_schedule(const FactorGenerator& gen, std::size_t stride, std::size_t count) {
  if (stride == 0 || count == 0) throw OutOfRangeError("stride and count must be positive");
  std::vector<std::size_t> events(count);
  std::vector<double> factors(count);
  for (std::size_t k = 1; k <= count; ++k) {
    events[k - 1] = k * stride;
    factors[k - 1] = gen(k);
  }
  return EventSchedule(std::move(events), std::move(factors), stride);
}

/// [Lambda_1, ..., Lambda_K], left-to-right running products.
inline std::vector<double> cumulative_factors(const EventSchedule& s) {
  std::vector<double> out;
  out.reserve(s.size());
  double acc = 1.0;
  for (double f : s.factors()) {
    acc *= f;
    out.push_back(acc);
  }
  return out;
}

/// S_K = -sum ln lambda_k; +infinity once a factor is zero.
inline double log_sum(const EventSchedule& s) {
  double sum = 0.0;
  for (double f : s.factors()) {
    if (f == 0.0) return std::numeric_limits<double>::infinity();
    sum -= std::log(f);
  }
  return sum;
}

struct RateBound {
  enum class Rule { BoundedGap, Canonical, VLCBoundedGap };
  std::size_t iteration_n = 0;
  double bound_factor = 1.0;
  Rule rule = Rule::BoundedGap;
};

/// lambda^(1 + floor((n - n1) / M)), valid for n >= n1.
inline RateBound rate_bound_bounded_gap(std::size_t n, std::size_t n1, std::size_t gap, double lambda) {
  if (n1 == 0 || gap == 0) throw OutOfRangeError("n1 and M must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidFactorError("bounded-gap rate needs 0 < lambda < 1");
  if (n < n1) throw OutOfRangeError("bounded-gap rate holds only for n >= n1");
  return {n, power(lambda, 1 + (n - n1) / gap), RateBound::Rule::BoundedGap};
}

/// mu^floor(n / n1), with 0^0 = 1.
inline RateBound rate_bound_canonical(std::size_t n, std::size_t n1, double mu) {
  if (n1 == 0) throw OutOfRangeError("n1 must be positive");
  if (!(mu >= 0.0 && mu < 1.0)) throw InvalidFactorError("canonical rate needs 0 <= mu < 1");
  return {n, power(mu, n / n1), RateBound::Rule::Canonical};
}

/// Lambda_{1 + floor((n - n1) / M)} read from the stored prefix.
inline RateBound rate_bound_vlc(std::size_t n, const EventSchedule& s) {
  if (!s.gap_bound()) throw ScheduleTooShortError("variable-factor rate needs a gap bound");
  if (s.size() == 0) throw ScheduleTooShortError("schedule has no events");
  const std::size_t n1 = s.events().front();
  if (n < n1) throw OutOfRangeError("variable-factor rate holds only for n >= n1");
  const std::size_t index = 1 + (n - n1) / *s.gap_bound();
  if (index > s.size()) {
    throw ScheduleTooShortError("rate at n = " + std::to_string(n) + " needs " + std::to_string(index) +
                                " factors, schedule stores " + std::to_string(s.size()));
  }
  double acc = 1.0;
  for (std::size_t k = 0; k < index; ++k) acc *= s.factors()[k];
  return {n, acc, RateBound::Rule::VLCBoundedGap};
}

/// Outcome of a finite probe of whether Lambda_k -> 0.
struct ConvergenceVerdict {
  enum class Kind { TendsToZero, BoundedAway, Inconclusive };

  // Lambda_H below this counts as zero.
  static constexpr double kZeroCutoff = 1e-9;
  // BoundedAway needs Lambda_H above this.
  static constexpr double kBoundedFloor = 1e-6;
  // ... and |Lambda_H - Lambda_{H/2}| below this.
  static constexpr double kStabilityTol = 1e-5;
  // S_H - S_{H/2} at or above this reads as a divergent log series.
  static constexpr double kDivergenceIncrement = 0.1;

  Kind kind = Kind::Inconclusive;
  std::size_t horizon = 0;
  double limit_estimate = 1.0;  // Lambda_H
  double half_product = 1.0;    // Lambda_{floor(H/2)}
  double log_sum = 0.0;         // S_H
  double half_log_sum = 0.0;    // S_{floor(H/2)}
  double direct_product = 1.0;  // Lambda_H by plain multiplication
  bool log_space = false;       // limit_estimate came from exp(-S_H)

  double zero_cutoff = kZeroCutoff;
  double bounded_floor = kBoundedFloor;
  double stability_tol = kStabilityTol;
  double divergence_increment = kDivergenceIncrement;
};

inline const char* to_string(ConvergenceVerdict::Kind k) {
  switch (k) {
    case ConvergenceVerdict::Kind::TendsToZero: return "tends_to_zero";
    case ConvergenceVerdict::Kind::BoundedAway: return "bounded_away";
    case ConvergenceVerdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Horizons past this accumulate the product in log space.
inline constexpr std::size_t kLogSpaceHorizon = 10000;

/// Probes Lambda_k -> 0 over the first `horizon` factors: the stored prefix,
/// then `extend` for positions K+1, ..., horizon. Numerical evidence only.
inline ConvergenceVerdict converges(const EventSchedule& s, const FactorGenerator& extend, std::size_t horizon) {
  if (horizon == 0 || horizon < s.size()) throw OutOfRangeError("horizon must cover the stored prefix");
  ConvergenceVerdict v;
  v.horizon = horizon;
  const std::size_t half = horizon / 2;

  double product = 1.0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    double f;
    double neg_log;
    if (k <= s.size()) {
      f = s.factors()[k - 1];
      neg_log = f == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(f);
    } else {
      f = extend(k);
      if (!(f > 0.0 && f <= 1.0)) {
        throw InvalidFactorError("generator " + extend.name() + " left (0, 1] at k = " + std::to_string(k));
      }
      neg_log = extend.neg_log(k);
    }
    product *= f;
    sum += neg_log;
    if (k == half) {
      v.half_product = product;
      v.half_log_sum = sum;
    }
  }
  v.direct_product = product;
  v.log_sum = sum;
  v.log_space = horizon > kLogSpaceHorizon;
  v.limit_estimate = v.log_space ? std::exp(-sum) : product;
  if (v.log_space && half > 0) v.half_product = std::exp(-v.half_log_sum);

  const double lam = v.limit_estimate;
  if (lam < v.zero_cutoff || sum - v.half_log_sum >= v.divergence_increment) {
    v.kind = ConvergenceVerdict::Kind::TendsToZero;
  } else if (lam > v.bounded_floor && std::fabs(lam - v.half_product) < v.stability_tol) {
    v.kind = ConvergenceVerdict::Kind::BoundedAway;
  } else {
    v.kind = ConvergenceVerdict::Kind::Inconclusive;
  }
  return v;
}

}  // namespace contractix
