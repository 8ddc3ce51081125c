#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "contractix/certifier.hpp"
#include "contractix/lipschitz.hpp"
#include "contractix/maps.hpp"
#include "contractix/schedules.hpp"

namespace contractix::json_io {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path + ": not finite");
  return v;
}

inline std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

inline std::size_t positive(const json& j, const std::string& path) {
  const auto v = integer(j, path);
  if (v < 1) throw ParseError(path + ": expected a positive integer");
  return static_cast<std::size_t>(v);
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

// Rewraps domain validation failures with the field path.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace detail

inline json to_json(const MapSpec& map) {
  json params = json::object();
  std::visit(
      [&params](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, maps::CubicMK>) params["c"] = m.c;
        else if constexpr (std::is_same_v<T, maps::Linear>) params["lambda"] = m.lambda;
        else if constexpr (std::is_same_v<T, maps::CoordSaturation>) params["dim"] = m.dim;
        else if constexpr (std::is_same_v<T, maps::Iterate>) {
          params["inner"] = to_json(*m.inner);
          params["n"] = m.n;
        }
      },
      map.variant());
  return json{{"kind", map.kind_name()}, {"params", params}};
}

inline MapSpec map_from_json(const json& j, const std::string& path = "map") {
  using namespace detail;
  const std::string kind = string(field(j, "kind", path), path + ".kind");
  const json empty = json::object();
  const json& params = j.contains("params") ? j.at("params") : empty;
  const std::string pp = path + ".params";
  if (!params.is_object()) throw ParseError(pp + ": expected an object");
  return guarded(path, [&]() -> MapSpec {
    if (kind == "piecewise_saturation") return MapSpec::piecewise_saturation();
    if (kind == "identity") return MapSpec::identity();
    if (kind == "cubic_mk") return MapSpec::cubic_mk(number(field(params, "c", pp), pp + ".c"));
    if (kind == "linear") return MapSpec::linear(number(field(params, "lambda", pp), pp + ".lambda"));
    if (kind == "coord_saturation") return MapSpec::coord_saturation(positive(field(params, "dim", pp), pp + ".dim"));
    if (kind == "iterate") {
      return MapSpec::iterate(map_from_json(field(params, "inner", pp), pp + ".inner"),
                              positive(field(params, "n", pp), pp + ".n"));
    }
    throw ParseError(path + ".kind: unknown map kind '" + kind + "'");
  });
}

inline json to_json(const Domain& d) {
  if (d.kind == Domain::Kind::Interval) return json{{"kind", "interval"}, {"lo", d.lo}, {"hi", d.hi}};
  return json{{"kind", "box"}, {"dim", d.dim}, {"lo", d.lo}, {"hi", d.hi}};
}

inline Domain domain_from_json(const json& j, const std::string& path = "domain") {
  using namespace detail;
  const std::string kind = string(field(j, "kind", path), path + ".kind");
  const double lo = number(field(j, "lo", path), path + ".lo");
  const double hi = number(field(j, "hi", path), path + ".hi");
  return guarded(path, [&] {
    if (kind == "interval") return Domain::interval(lo, hi);
    if (kind == "box") return Domain::box(positive(field(j, "dim", path), path + ".dim"), lo, hi);
    throw ParseError(path + ".kind: unknown domain kind '" + kind + "'");
  });
}

inline json to_json(const Point& p) {
  if (p.is_scalar()) return p.value();
  return p.coords();
}

inline Point point_from_json(const json& j, const std::string& path) {
  using namespace detail;
  return guarded(path, [&] {
    if (j.is_number()) return Point::scalar(number(j, path));
    if (!j.is_array()) throw ParseError(path + ": expected a number or an array of numbers");
    std::vector<double> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return Point::vector(std::move(c));
  });
}

inline json to_json(const EventSchedule& s) {
  json j{{"events", s.events()}, {"factors", s.factors()}};
  j["gap_bound"] = s.gap_bound() ? json(*s.gap_bound()) : json(nullptr);
  return j;
}

inline EventSchedule schedule_from_json(const json& j, const std::string& path = "schedule") {
  using namespace detail;
  const json& ev = field(j, "events", path);
  const json& fa = field(j, "factors", path);
  if (!ev.is_array()) throw ParseError(path + ".events: expected an array");
  if (!fa.is_array()) throw ParseError(path + ".factors: expected an array");
  std::vector<std::size_t> events;
  std::vector<double> factors;
  for (std::size_t i = 0; i < ev.size(); ++i) events.push_back(positive(ev[i], path + ".events[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < fa.size(); ++i) factors.push_back(number(fa[i], path + ".factors[" + std::to_string(i) + "]"));
  std::optional<std::size_t> gap;
  if (j.contains("gap_bound") && !j.at("gap_bound").is_null()) gap = positive(j.at("gap_bound"), path + ".gap_bound");
  return guarded(path, [&] { return EventSchedule(std::move(events), std::move(factors), gap); });
}

inline json to_json(const LipschitzEstimate& e) {
  return json{{"map", to_json(e.map)},
              {"n", e.iterate_n},
              {"value", e.value},
              {"kind", e.kind == LipschitzEstimate::Kind::Exact ? "exact" : "sampled_lower_bound"},
              {"pairs_tested", e.pairs_tested},
              {"seed", e.seed}};
}

inline LipschitzEstimate estimate_from_json(const json& j, const std::string& path = "estimate") {
  using namespace detail;
  const std::string kind = string(field(j, "kind", path), path + ".kind");
  LipschitzEstimate e{map_from_json(field(j, "map", path), path + ".map")};
  e.iterate_n = positive(field(j, "n", path), path + ".n");
  e.value = number(field(j, "value", path), path + ".value");
  if (kind == "exact") e.kind = LipschitzEstimate::Kind::Exact;
  else if (kind == "sampled_lower_bound") e.kind = LipschitzEstimate::Kind::SampledLowerBound;
  else throw ParseError(path + ".kind: unknown estimate kind '" + kind + "'");
  const auto pairs = integer(field(j, "pairs_tested", path), path + ".pairs_tested");
  if (pairs < 0) throw ParseError(path + ".pairs_tested: negative");
  e.pairs_tested = static_cast<std::size_t>(pairs);
  e.seed = integer(field(j, "seed", path), path + ".seed");
  return e;
}

inline json to_json(const Certificate& c) {
  return json{{"claim", c.claim},
              {"checked", c.checked_instances},
              {"worst_margin", c.worst_margin},  // +inf (nothing checked) serializes as null
              {"passed", c.passed},
              {"z_source", to_string(c.z_source)}};
}

inline json to_json(const Classification& c) {
  json j{{"verdict", to_string(c.verdict)}, {"heuristic", c.heuristic}};
  if (c.verdict != Classification::Verdict::NotDetected) {
    j["first_event"] = c.first_event;
    j["mu"] = c.mu;
  }
  return j;
}

inline json to_json(const ConvergenceVerdict& v) {
  return json{{"verdict", to_string(v.kind)},
              {"horizon", v.horizon},
              {"limit_estimate", v.limit_estimate},
              {"half_horizon_product", v.half_product},
              {"log_sum", v.log_sum},
              {"half_horizon_log_sum", v.half_log_sum},
              {"log_space", v.log_space},
              {"thresholds",
               {{"zero_cutoff", v.zero_cutoff},
                {"bounded_floor", v.bounded_floor},
                {"stability_tol", v.stability_tol},
                {"divergence_increment", v.divergence_increment}}}};
}

}  // namespace contractix::json_io
