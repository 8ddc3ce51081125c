#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "contractix/certifier.hpp"
#include "contractix/json_io.hpp"

namespace contractix {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Figure data

struct FigureData {
  std::vector<double> x;
  std::vector<double> t1;  // T(x)
  std::vector<double> t2;  // T^2(x)

  std::string to_csv() const {
    std::string out = "x,T(x),T2(x)\n";
    for (std::size_t i = 0; i < x.size(); ++i) out += fmt17(x[i]) + "," + fmt17(t1[i]) + "," + fmt17(t2[i]) + "\n";
    return out;
  }
};

/// `resolution` evenly spaced samples of T and T^2 over the interval; the
/// grid point nearest to each breakpoint is replaced by the breakpoint itself.
inline FigureData emit_figure_data(const MapSpec& map, const Domain& domain, std::size_t resolution) {
  if (map_dimension(map)) throw UnsupportedError("figure data is only defined for scalar maps");
  if (domain.kind != Domain::Kind::Interval) throw UnsupportedError("figure data needs an interval domain");
  if (resolution < 2) throw DomainError("figure resolution must be at least 2");

  FigureData fig;
  fig.x.resize(resolution);
  const double intervals = static_cast<double>(resolution - 1);
  const double step = domain.width() / intervals;
  // scaled form keeps decimal grids like 0.01 spacing landing on exact values
  for (std::size_t i = 0; i < resolution; ++i) {
    fig.x[i] = (domain.lo * intervals + static_cast<double>(i) * domain.width()) / intervals;
  }
  fig.x.front() = domain.lo;
  fig.x.back() = domain.hi;

  std::vector<double> marks{-2.0, -1.0, 0.0, 1.0, 2.0};
  if (unwrap_iterate(map).first->get_if<maps::CubicMK>()) marks.push_back(0.5);
  std::vector<bool> taken(resolution, false);
  for (double b : marks) {
    if (b < domain.lo || b > domain.hi) continue;
    const auto i = std::min(static_cast<std::size_t>(std::llround((b - domain.lo) / step)), resolution - 1);
    if (taken[i]) throw DomainError("figure resolution too coarse to place every breakpoint on its own sample");
    taken[i] = true;
    fig.x[i] = b;
  }

  const MapSpec square = MapSpec::iterate(map, 2);
  for (double x : fig.x) {
    const Point p = Point::scalar(x);
    fig.t1.push_back(apply(map, p).value());
    fig.t2.push_back(apply(square, p).value());
  }
  return fig;
}

// ---------------------------------------------------------------------------
// Experiment configs

struct CanonicalScheduleRequest {};

struct GeneratedScheduleRequest {
  FactorGenerator generator;
  std::size_t stride = 1;
  std::optional<std::size_t> count;
};

using ScheduleRequest =
    std::variant<std::monostate, CanonicalScheduleRequest, EventSchedule, GeneratedScheduleRequest>;

struct MeirKeelerRequest {
  std::vector<double> epsilons;
  std::optional<double> delta;  // nullopt: c eps^3 / 8 for the cubic map
  std::size_t pairs = 10000;
  bool expect_holds = true;
};

struct ProbeRequest {
  std::vector<std::string> generators;
  std::size_t horizon = 1000000;
};

struct AneRequest {
  std::string k = "one";  // "one" | "one_plus_inv_n"
  std::size_t max_n = 20;
  std::size_t pairs = 1000;
};

struct FigureRequest {
  double lo = -3.2;
  double hi = 3.2;
  std::size_t resolution = 641;
};

struct ExperimentConfig {
  std::string name;
  MapSpec map = MapSpec::identity();
  ScheduleRequest schedule;
  Domain domain;
  std::optional<std::vector<Point>> starts;  // nullopt: default start set
  std::optional<Point> fixed_point;
  std::size_t horizon = 20;
  std::int64_t seed = 0;
  std::size_t max_n = 10;
  std::set<std::string> outputs;
  FigureRequest figure;
  std::optional<MeirKeelerRequest> meir_keeler;
  std::optional<ProbeRequest> probe;
  std::optional<AneRequest> ane;
};

namespace detail {

inline std::vector<double> number_list(const json_io::json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_io::detail::number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Point point_from_json_checked(const json_io::json& j, const std::string& path, const ExperimentConfig& c) {
  Point p = json_io::point_from_json(j, path);
  const auto dim = map_dimension(c.map);
  if (dim ? (!p.is_vector() || p.dim() != *dim) : !p.is_scalar()) {
    throw ParseError(path + ": point " + p.to_string() + " does not match the map's shape");
  }
  return p;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json_io::json& j) {
  using namespace json_io::detail;
  using json_io::json;
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  static const std::set<std::string> known{"name",  "map",   "schedule", "domain",  "starts",      "fixed_point",
                                           "horizon", "seed", "max_n",   "outputs", "figure",      "meir_keeler",
                                           "probe",  "ane"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ParseError("config." + key + ": unknown field");
  }

  ExperimentConfig c;
  c.name = string(field(j, "name", "config"), "config.name");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos || c.name == "." || c.name == "..") {
    throw ParseError("config.name: must be a plain directory name");
  }
  c.map = json_io::map_from_json(field(j, "map", "config"), "config.map");
  c.domain = j.contains("domain") ? json_io::domain_from_json(j.at("domain"), "config.domain") : default_domain(c.map);
  guarded("config.domain", [&] { require_domain_fits(c.map, c.domain); return 0; });
  if (j.contains("horizon")) c.horizon = positive(j.at("horizon"), "config.horizon");
  if (j.contains("seed")) c.seed = integer(j.at("seed"), "config.seed");
  if (j.contains("max_n")) c.max_n = positive(j.at("max_n"), "config.max_n");

  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.is_string()) {
      if (s.get<std::string>() != "canonical") throw ParseError("config.schedule: unknown preset '" + s.get<std::string>() + "'");
      c.schedule = CanonicalScheduleRequest{};
    } else if (s.is_object() && s.contains("generator")) {
      const std::string gen = string(s.at("generator"), "config.schedule.generator");
      GeneratedScheduleRequest g{guarded("config.schedule.generator", [&] { return FactorGenerator::parse(gen); }), 1,
                                 std::nullopt};
      if (s.contains("stride")) g.stride = positive(s.at("stride"), "config.schedule.stride");
      if (s.contains("count")) g.count = positive(s.at("count"), "config.schedule.count");
      c.schedule = g;
    } else {
      c.schedule = json_io::schedule_from_json(s, "config.schedule");
    }
  }

  if (j.contains("starts")) {
    const json& s = j.at("starts");
    if (s.is_string()) {
      if (s.get<std::string>() != "default") throw ParseError("config.starts: expected \"default\" or a list of points");
    } else if (s.is_array()) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string path = "config.starts[" + std::to_string(i) + "]";
        pts.push_back(detail::point_from_json_checked(s[i], path, c));
      }
      if (pts.empty()) throw ParseError("config.starts: empty list");
      c.starts = std::move(pts);
    } else {
      throw ParseError("config.starts: expected \"default\" or a list of points");
    }
  }
  if (j.contains("fixed_point")) c.fixed_point = detail::point_from_json_checked(j.at("fixed_point"), "config.fixed_point", c);

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (!o.is_array()) throw ParseError("config.outputs: expected an array");
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string path = "config.outputs[" + std::to_string(i) + "]";
      const std::string v = string(o[i], path);
      if (v != "table" && v != "certificates" && v != "figure_data") throw ParseError(path + ": unknown output '" + v + "'");
      c.outputs.insert(v);
    }
  } else {
    c.outputs = {"table", "certificates"};
  }

  if (j.contains("figure")) {
    const json& f = j.at("figure");
    if (f.contains("lo")) c.figure.lo = number(f.at("lo"), "config.figure.lo");
    if (f.contains("hi")) c.figure.hi = number(f.at("hi"), "config.figure.hi");
    if (f.contains("resolution")) c.figure.resolution = positive(f.at("resolution"), "config.figure.resolution");
  }

  if (j.contains("meir_keeler")) {
    const json& m = j.at("meir_keeler");
    MeirKeelerRequest r;
    r.epsilons = detail::number_list(field(m, "epsilons", "config.meir_keeler"), "config.meir_keeler.epsilons");
    if (m.contains("delta")) {
      const json& d = m.at("delta");
      if (d.is_string()) {
        if (d.get<std::string>() != "cubic") throw ParseError("config.meir_keeler.delta: expected a number or \"cubic\"");
        if (!unwrap_iterate(c.map).first->get_if<maps::CubicMK>() || unwrap_iterate(c.map).second != 1) {
          throw ParseError("config.meir_keeler.delta: \"cubic\" needs a cubic_mk map");
        }
      } else {
        r.delta = number(d, "config.meir_keeler.delta");
      }
    } else {
      throw ParseError("config.meir_keeler.delta: missing field");
    }
    if (m.contains("pairs")) r.pairs = positive(m.at("pairs"), "config.meir_keeler.pairs");
    if (m.contains("expect")) {
      const std::string e = string(m.at("expect"), "config.meir_keeler.expect");
      if (e != "holds" && e != "violated") throw ParseError("config.meir_keeler.expect: expected \"holds\" or \"violated\"");
      r.expect_holds = e == "holds";
    }
    c.meir_keeler = std::move(r);
  }

  if (j.contains("probe")) {
    const json& p = j.at("probe");
    ProbeRequest r;
    const json& g = field(p, "generators", "config.probe");
    if (!g.is_array()) throw ParseError("config.probe.generators: expected an array");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string path = "config.probe.generators[" + std::to_string(i) + "]";
      r.generators.push_back(string(g[i], path));
      guarded(path, [&] { return FactorGenerator::parse(r.generators.back()); });
    }
    if (p.contains("horizon")) r.horizon = positive(p.at("horizon"), "config.probe.horizon");
    c.probe = std::move(r);
  }

  if (j.contains("ane")) {
    const json& a = j.at("ane");
    AneRequest r;
    if (a.contains("k")) {
      r.k = string(a.at("k"), "config.ane.k");
      if (r.k != "one" && r.k != "one_plus_inv_n") throw ParseError("config.ane.k: expected \"one\" or \"one_plus_inv_n\"");
    }
    if (a.contains("max_n")) r.max_n = positive(a.at("max_n"), "config.ane.max_n");
    if (a.contains("pairs")) r.pairs = positive(a.at("pairs"), "config.ane.pairs");
    c.ane = r;
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  json_io::json j;
  try {
    j = json_io::json::parse(in);
  } catch (const json_io::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Running

struct ExperimentResult {
  std::string name;
  Classification classification;
  std::optional<Point> z;
  ZSource z_source = ZSource::Analytic;
  std::optional<EventSchedule> schedule;
  std::vector<Certificate> certificates;
  std::vector<std::filesystem::path> files;

  bool all_passed() const {
    return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.passed; });
  }
  const Certificate* first_failure() const {
    for (const auto& c : certificates) {
      if (!c.passed) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline std::size_t factors_needed(std::size_t horizon, std::size_t n1, std::size_t gap) {
  return horizon >= n1 ? 1 + (horizon - n1) / gap : 1;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
}

inline std::optional<EventSchedule> resolve_schedule(const ExperimentConfig& c, const Classification& cls) {
  return std::visit(
      [&](const auto& req) -> std::optional<EventSchedule> {
        using T = std::decay_t<decltype(req)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, CanonicalScheduleRequest>) {
          if (cls.verdict == Classification::Verdict::NotDetected) {
            throw ParseError("config.schedule: \"canonical\" needs a contraction event within max_n = " +
                             std::to_string(c.max_n));
          }
          const std::size_t n1 = cls.first_event;
          return canonical_schedule(n1, cls.mu, factors_needed(c.horizon, n1, n1));
        } else if constexpr (std::is_same_v<T, GeneratedScheduleRequest>) {
          const std::size_t count = req.count.value_or(factors_needed(c.horizon, req.stride, req.stride));
          return generated_schedule(req.generator, req.stride, count);
        } else {
          return req;
        }
      },
      c.schedule);
}

}  // namespace detail

/// Runs one experiment and writes its requested outputs under outdir/<name>/.
inline ExperimentResult run_experiment(const ExperimentConfig& c, const std::filesystem::path& outdir) {
  ExperimentResult r;
  r.name = c.name;
  r.classification = classify(c.map, c.max_n, c.domain, c.seed);
  const std::vector<Point> starts = c.starts.value_or(default_starts(c.domain, c.seed));

  if (c.fixed_point) {
    r.z = c.fixed_point;
  } else if (auto z = known_fixed_point(c.map)) {
    r.z = z;
  } else if (r.classification.verdict != Classification::Verdict::NotDetected) {
    auto resolved = resolve_fixed_point(c.map, r.classification.first_event, starts.front());
    r.z = resolved.z;
    r.z_source = resolved.source;
  }

  r.schedule = detail::resolve_schedule(c, r.classification);
  if (r.schedule) {
    if (!r.z) throw ParseError("config.fixed_point: schedule certificates need a fixed point and none is known");
    r.certificates.push_back(certify_eventwise(c.map, *r.schedule, starts, *r.z, r.z_source));
    if (r.schedule->gap_bound()) {
      r.certificates.push_back(certify_full_sequence(c.map, *r.schedule, starts, *r.z, c.horizon, r.z_source));
    }
  }

  std::string mk_csv;
  if (c.meir_keeler) {
    const auto& mk = *c.meir_keeler;
    Certificate cert{mk.expect_holds ? "meir_keeler_holds" : "meir_keeler_violated"};
    cert.z_source = r.z_source;
    mk_csv = "epsilon,delta,verdict,pairs_checked,worst_margin,x,y\n";
    for (std::size_t i = 0; i < mk.epsilons.size(); ++i) {
      const double eps = mk.epsilons[i];
      const double delta = mk.delta ? *mk.delta : mk_delta_cubic(unwrap_iterate(c.map).first->get_if<maps::CubicMK>()->c, eps);
      const auto v = mk_check(c.map, eps, delta, c.domain, mk.pairs, c.seed + static_cast<std::int64_t>(i));
      mk_csv += fmt17(eps) + "," + fmt17(delta) + "," + (v.holds ? "holds" : "violated") + "," +
                std::to_string(v.pairs_checked) + "," + fmt17(v.worst_margin) + "," +
                (v.x ? v.x->to_string() : "") + "," + (v.y ? v.y->to_string() : "") + "\n";
      if (v.holds && mk.expect_holds) {
        cert.record(eps, eps - v.worst_margin);
      } else if (v.holds) {
        cert.record(eps - v.worst_margin, eps);
      } else {
        const double dt = metric(apply(c.map, *v.x), apply(c.map, *v.y));
        // a violation claim holds when d(Tx, Ty) reaches eps
        if (mk.expect_holds) cert.record(eps, dt);
        else cert.record(dt, eps);
      }
    }
    r.certificates.push_back(cert);
  }

  if (c.ane) {
    const bool unit = c.ane->k == "one";
    auto k = [unit](std::size_t n) { return unit ? 1.0 : 1.0 + 1.0 / static_cast<double>(n); };
    auto cert = ane_check(c.map, k, c.ane->max_n, c.domain, c.ane->pairs, c.seed);
    cert.z_source = r.z_source;
    r.certificates.push_back(cert);
  }

  std::string probe_csv;
  if (c.probe) {
    probe_csv = "generator,horizon,verdict,limit_estimate,half_horizon_product,log_sum\n";
    const EventSchedule empty({}, {});
    for (const auto& name : c.probe->generators) {
      const auto v = converges(empty, FactorGenerator::parse(name), c.probe->horizon);
      probe_csv += name + "," + std::to_string(v.horizon) + "," + to_string(v.kind) + "," + fmt17(v.limit_estimate) +
                   "," + fmt17(v.half_product) + "," + fmt17(v.log_sum) + "\n";
    }
  }

  const auto dir = outdir / c.name;
  std::filesystem::create_directories(dir);
  auto emit = [&](const std::string& file, const std::string& content) {
    detail::write_file(dir / file, content);
    r.files.push_back(dir / file);
  };

  if (c.outputs.count("table")) {
    std::string csv = "start_id,n,distance_to_z,point\n";
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const Point z = r.z.value_or(starts[s]);
      const auto traj = iterate(c.map, starts[s], c.horizon, z);
      for (std::size_t n = 0; n < traj.points.size(); ++n) {
        csv += std::to_string(s) + "," + std::to_string(n) + "," + (r.z ? fmt17(traj.distances_to_z[n]) : "") + "," +
               traj.points[n].to_string() + "\n";
      }
    }
    emit("trajectory.csv", csv);
  }
  if (c.outputs.count("figure_data")) {
    emit("figure.csv", emit_figure_data(c.map, Domain::interval(c.figure.lo, c.figure.hi), c.figure.resolution).to_csv());
  }
  if (!mk_csv.empty()) emit("mk_table.csv", mk_csv);
  if (!probe_csv.empty()) emit("probe.csv", probe_csv);
  if (c.outputs.count("certificates")) {
    json_io::json doc{{"experiment", c.name},
                      {"seed", c.seed},
                      {"map", json_io::to_json(c.map)},
                      {"domain", json_io::to_json(c.domain)},
                      {"classification", json_io::to_json(r.classification)}};
    doc["fixed_point"] = r.z ? json_io::to_json(*r.z) : json_io::json(nullptr);
    doc["schedule"] = r.schedule ? json_io::to_json(*r.schedule) : json_io::json(nullptr);
    doc["certificates"] = json_io::json::array();
    for (const auto& cert : r.certificates) doc["certificates"].push_back(json_io::to_json(cert));
    emit("certificates.json", doc.dump(2) + "\n");
  } else {
    r.certificates.clear();
  }
  return r;
}

}  // namespace contractix
