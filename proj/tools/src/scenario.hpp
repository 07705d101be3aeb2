#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "report_io.hpp"
#include "smot/common.hpp"
#include "smot/inequalities/report.hpp"
#include "smot/transport/verification.hpp"

namespace smot::cli {

inline constexpr int kSchemaVersion = 1;

// Config problems: message is "<source>:<line>: <json pointer>: <what>".
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
};

struct SurfaceSpec {
  std::string id;
  std::map<std::string, double> params;
  std::vector<int> resolutions;
  std::optional<SweepSpec> sweep;
};

struct SubspaceSpec {
  enum class Kind { Explicit, Haar, TangentAt };
  Kind kind = Kind::Haar;
  Mat basis;               // explicit: spanning columns
  std::uint64_t seed = 0;  // haar
  Vec point;               // tangent-at: ambient point, nearest sample's tangent plane
};

struct MetricSpec {
  std::string preset = "euclidean";
  std::filesystem::path table;  // custom only
  double t0 = 0.0;
  Vec slope;  // empty means zero
};

struct TestFunctionSpec {
  std::string family = "auto_bump";
  Vec center;
  double radius = 0.5;
  double width = 0.1;
  double collar = 0.25;
  double min_jacobian = 1e-3;
  double max_radius = 0.75;
};

struct CheckSpec {
  std::string type;
  std::string pointer;  // location in the config, for diagnostics
  double tolerance = 0.0;
  std::optional<double> equality;
  TestFunctionSpec test_function;
  double p = 0.0;
  std::optional<double> s_np;
  double jacobian_floor = 1e-6;
  std::optional<double> alpha;
  long long alpha_samples = 0;
  std::optional<std::uint64_t> alpha_seed;
  TransportBatchOptions transport;
  double pythagoras_tolerance = 1e-12;
};

struct OutputSpec {
  std::filesystem::path dir;  // empty: current directory
  std::string json;
  std::string csv;
  std::string svg;  // empty: no plot
};

struct Scenario {
  std::string name;
  std::optional<SurfaceSpec> surface;
  std::optional<SubspaceSpec> subspace;
  std::optional<MetricSpec> metric;
  std::vector<CheckSpec> checks;
  OutputSpec outputs;
};

// `base_dir` resolves relative table paths.
Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

struct CheckOutcome {
  std::size_t index = 0;
  std::string type;
  bool passed = false;
  std::vector<std::size_t> reports;  // indices into RunResult::reports
  std::vector<std::string> problems;
};

struct RunResult {
  std::vector<InequalityReport> reports;
  std::vector<CheckOutcome> checks;
  bool passed() const;
};

// Checks run in declaration order; within a check, sweep values vary
// slowest and resolutions fastest.
RunResult run_scenario(const Scenario& scenario);

Json result_document(const Scenario& scenario, const RunResult& result);

// Writes the JSON document, the CSV and (if requested and non-empty) the SVG
// under `dir`. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const Scenario& scenario, const RunResult& result,
                                                 const std::filesystem::path& dir);

}  // namespace smot::cli
