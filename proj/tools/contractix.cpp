// contractix: command-line front end for the fixed-point certification library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "contractix/contractix.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCertificateFailure = 1;
constexpr int kExitUsage = 2;

contractix::MapSpec load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw contractix::ParseError(path + ": cannot open");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw contractix::ParseError(path + ": " + e.what());
  }
  return contractix::json_io::map_from_json(j, path);
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw contractix::ParseError("--domain: expected lo,hi");
  try {
    std::size_t a = 0, b = 0;
    const std::string lo = text.substr(0, comma), hi = text.substr(comma + 1);
    const double l = std::stod(lo, &a);
    const double h = std::stod(hi, &b);
    if (a != lo.size() || b != hi.size()) throw std::invalid_argument(text);
    return {l, h};
  } catch (const std::exception&) {
    throw contractix::ParseError("--domain: expected lo,hi, got '" + text + "'");
  }
}

std::string default_outdir() {
  const char* env = std::getenv("CONTRACTIX_OUTDIR");
  return env && *env ? env : "out";
}

int cmd_run(const std::string& config_path, const std::string& outdir, std::optional<std::int64_t> seed) {
  auto cfg = contractix::load_config(config_path);
  if (seed) cfg.seed = *seed;
  const auto result = contractix::run_experiment(cfg, outdir);
  for (const auto& c : result.certificates) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.claim << "  checked=" << c.checked_instances
              << "  worst_margin=" << contractix::fmt17(c.worst_margin) << "\n";
  }
  std::cout << "classification: " << contractix::to_string(result.classification.verdict) << "\n";
  for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
  if (const auto* failed = result.first_failure()) {
    std::cerr << "certificate failed: claim \"" << failed->claim << "\" worst_margin "
              << contractix::fmt17(failed->worst_margin) << "\n";
    return kExitCertificateFailure;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify convergence of logically contractive fixed-point iterations"};
  app.require_subcommand(1);

  std::string config_path, outdir = default_outdir();
  std::optional<std::int64_t> seed;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its outputs");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--outdir", outdir, "Output directory (default: $CONTRACTIX_OUTDIR or ./out)");
  run->add_option("--seed", seed, "Override the config seed");

  std::string map_path, domain_text, output_path;
  std::size_t resolution = 641;
  auto* figure = app.add_subcommand("figure", "Emit x, T(x), T^2(x) samples as CSV");
  figure->add_option("map", map_path, "Map spec (JSON)")->required();
  figure->add_option("--domain", domain_text, "Interval lo,hi")->required();
  figure->add_option("--resolution", resolution, "Number of sample points")->required();
  figure->add_option("--output", output_path, "Write CSV here instead of stdout");

  std::size_t max_n = 10;
  std::int64_t classify_seed = 0;
  std::string classify_domain;
  auto* classify = app.add_subcommand("classify", "Search for the first strictly contracting iterate");
  classify->add_option("map", map_path, "Map spec (JSON)")->required();
  classify->add_option("--max-n", max_n, "Largest iterate to inspect")->required();
  classify->add_option("--domain", classify_domain, "Interval lo,hi for sampled fallback");
  classify->add_option("--seed", classify_seed, "Seed for sampled fallback");

  std::string preset;
  std::size_t horizon = 0;
  auto* probe = app.add_subcommand("schedule-probe", "Probe whether the cumulative factor product tends to zero");
  probe->add_option("--preset", preset, "constant:<l> | one_minus_inv_square | one_minus_inv")->required();
  probe->add_option("--horizon", horizon, "Number of factors")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, outdir, seed);

    if (*figure) {
      const auto map = load_map(map_path);
      const auto [lo, hi] = parse_range(domain_text);
      const auto csv = contractix::emit_figure_data(map, contractix::Domain::interval(lo, hi), resolution).to_csv();
      if (output_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream(output_path, std::ios::binary) << csv;
      }
      return kExitPass;
    }

    if (*classify) {
      const auto map = load_map(map_path);
      auto domain = contractix::default_domain(map);
      if (!classify_domain.empty()) {
        const auto [lo, hi] = parse_range(classify_domain);
        domain = contractix::Domain::interval(lo, hi);
      }
      const auto c = contractix::classify(map, max_n, domain, classify_seed);
      std::cout << contractix::json_io::to_json(c).dump(2) << "\n";
      return kExitPass;
    }

    if (*probe) {
      const auto gen = contractix::FactorGenerator::parse(preset);
      const auto v = contractix::converges(contractix::EventSchedule({}, {}), gen, horizon);
      auto j = contractix::json_io::to_json(v);
      j["preset"] = gen.name();
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }
  } catch (const contractix::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const contractix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
