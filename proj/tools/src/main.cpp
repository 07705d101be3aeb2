// smot: batch runner for the transport and inequality checks.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "plot.hpp"
#include "report_io.hpp"
#include "scenario.hpp"
#include "smot/geometry/catalog.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/inequalities/sobolev_constant.hpp"

namespace fs = std::filesystem;
using smot::cli::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

fs::path output_dir(const smot::cli::Scenario& s, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SMOT_OUTPUT_DIR"); env && *env) return env;
  return s.outputs.dir;
}

int cmd_run(const std::string& config, const std::string& out_flag, bool quiet) {
  smot::cli::Scenario scenario;
  try {
    scenario = smot::cli::load_scenario(config);
  } catch (const smot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const smot::cli::RunResult result = smot::cli::run_scenario(scenario);
  try {
    for (const auto& p : smot::cli::write_outputs(scenario, result, output_dir(scenario, out_flag))) {
      if (!quiet) std::cout << "wrote " << p.string() << "\n";
    }
  } catch (const smot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& c : result.checks) {
    if (!quiet) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << "check " << c.index << " " << c.type;
      for (auto r : c.reports) {
        std::cout << "  rel_margin=" << smot::cli::format_double(result.reports[r].relative_margin);
      }
      std::cout << "\n";
    }
    for (const auto& p : c.problems) std::cerr << "  check " << c.index << " (" << c.type << "): " << p << "\n";
  }
  return result.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_plot(const std::string& csv, const std::string& svg) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << csv << "\n";
    return kExitUsage;
  }
  try {
    const std::string out = smot::cli::render_margin_plot(smot::cli::read_reports_csv(in));
    std::ofstream file(svg, std::ios::binary);
    if (!file) throw smot::Error("cannot write " + svg);
    file << out;
  } catch (const smot::Error& e) {
    std::cerr << "error: " << csv << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_catalog() {
  for (const auto& e : smot::surface_catalog()) {
    std::cout << e.id << "  (n =";
    for (int d : e.dims) std::cout << " " << d;
    std::cout << ")  " << e.description << "\n";
    for (const auto& p : e.params) {
      std::cout << "    " << p.name << " = " << p.default_value << "  " << p.doc << "\n";
    }
  }
  return kExitOk;
}

int cmd_alpha(int n, int k, long long mc, std::optional<std::uint64_t> seed) {
  Json j;
  j["n"] = n;
  j["k"] = k;
  if (mc > 0) {
    if (!seed) {
      std::cerr << "error: --mc needs --seed\n";
      return kExitUsage;
    }
    const smot::AlphaEstimate est = smot::alpha_constant(n, k, mc, *seed);
    j["method"] = "monte_carlo";
    j["value"] = est.value;
    j["standard_error"] = est.standard_error;
    j["samples"] = est.samples;
    j["seed"] = *seed;
  } else {
    if (k != 1) {
      std::cerr << "error: quadrature is available for k = 1 only; pass --mc N --seed S\n";
      return kExitUsage;
    }
    j["method"] = "quadrature";
    j["value"] = smot::alpha_n1(n);
    j["lower_bound"] = smot::alpha_n1_lower_bound(n);
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_constant(int n, double p) {
  const smot::SobolevConstantResult r = smot::sobolev_constant_search(n, p);
  Json j;
  j["n"] = n;
  j["p"] = p;
  j["value"] = r.value;
  j["profile"] = {{"beta", r.beta}, {"gamma", r.gamma}, {"epsilon", r.epsilon}};
  j["stationarity"] = r.stationarity;
  j["iterations"] = r.iterations;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal transport on immersed submanifolds: inequality and transport checks"};
  app.require_subcommand(1);

  std::string config, out_dir;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a scenario config and write JSON/CSV/SVG reports");
  run->add_option("config", config, "Scenario JSON file")->required();
  run->add_option("-o,--output-dir", out_dir, "Output directory (overrides SMOT_OUTPUT_DIR and the config)");
  run->add_flag("-q,--quiet", quiet, "Only print problems");

  std::string csv, svg;
  auto* plot = app.add_subcommand("plot", "Plot margins from a report CSV");
  plot->add_option("csv", csv, "Report CSV")->required();
  plot->add_option("-o,--output", svg, "SVG file")->required();

  auto* catalog = app.add_subcommand("catalog", "List the surface catalog");

  int n = 0, k = 0;
  long long mc = 0;
  std::uint64_t seed = 0;
  auto* alpha = app.add_subcommand("alpha", "Grassmannian constant alpha_{n,k}");
  alpha->add_option("--n", n, "Intrinsic dimension")->required()->check(CLI::Range(1, 1000));
  alpha->add_option("--k", k, "Codimension")->required()->check(CLI::Range(1, 1000));
  alpha->add_option("--mc", mc, "Monte Carlo samples")->check(CLI::PositiveNumber);
  auto* seed_opt = alpha->add_option("--seed", seed, "Monte Carlo seed");

  double p = 0.0;
  int cn = 0;
  auto* constant = app.add_subcommand("constant", "Sharp L^p Sobolev constant S_{n,p}");
  constant->add_option("--n", cn, "Dimension")->required()->check(CLI::Range(2, 64));
  constant->add_option("--p", p, "Exponent, 1 < p < n")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config, out_dir, quiet);
    if (*plot) return cmd_plot(csv, svg);
    if (*catalog) return cmd_catalog();
    if (*alpha) {
      return cmd_alpha(n, k, mc, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (*constant) return cmd_constant(cn, p);
  } catch (const smot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
