#include <gtest/gtest.h>

#include <sstream>

#include "plot.hpp"
#include "report_io.hpp"
#include "scenario.hpp"

namespace smot::cli {
namespace {

std::string expect_config_error(const std::string& text) {
  try {
    parse_scenario(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return {};
}

const char* kDisc = R"({
  "schema_version": 1,
  "name": "disc",
  "surface": { "id": "flat-disc", "resolution": [16, 32] },
  "subspace": { "kind": "explicit", "basis": [[1, 0, 0], [0, 1, 0]] },
  "checks": [
    { "type": "weighted_isoperimetric", "tolerance": 0.05, "equality": 0.05 },
    { "type": "lp_sobolev", "tolerance": 1e-6, "p": 1.5, "s_np": 2.5261839045947 }
  ]
})";

TEST(Scenario, ParsesAndRunsInDeclarationOrder) {
  const Scenario s = parse_scenario(kDisc, "disc.json");
  ASSERT_EQ(s.checks.size(), 2u);
  EXPECT_EQ(s.surface->resolutions, (std::vector<int>{16, 32}));
  EXPECT_EQ(s.outputs.json, "disc.json");
  const RunResult r = run_scenario(s);
  ASSERT_EQ(r.reports.size(), 4u);
  EXPECT_EQ(r.reports[0].name, "weighted_isoperimetric");
  EXPECT_EQ(r.reports[1].resolution.front(), 32);
  EXPECT_EQ(r.reports[2].name, "lp_sobolev");
  EXPECT_TRUE(r.passed());
}

TEST(Scenario, SameConfigGivesIdenticalDocument) {
  const Scenario s = parse_scenario(kDisc, "disc.json");
  EXPECT_EQ(result_document(s, run_scenario(s)).dump(2), result_document(s, run_scenario(s)).dump(2));
}

TEST(Scenario, ReportKeysAreExactlyTheSchema) {
  const Scenario s = parse_scenario(kDisc, "disc.json");
  const Json doc = result_document(s, run_scenario(s));
  std::vector<std::string> keys;
  for (const auto& [k, _] : doc["reports"][0].items()) keys.push_back(k);
  EXPECT_EQ(keys, report_columns());
}

TEST(Scenario, EqualityToleranceFailsAStrictInequality) {
  const Scenario s = parse_scenario(R"({"schema_version": 1,
    "surface": {"id": "sphere-cap", "resolution": 24},
    "subspace": {"kind": "haar", "seed": 3},
    "checks": [{"type": "weighted_isoperimetric", "tolerance": 1e-6, "equality": 1e-3}]})",
                                    "cap.json");
  const RunResult r = run_scenario(s);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.reports[0].relative_margin, 1e-3);
  EXPECT_NE(r.checks[0].problems.at(0).find("equality"), std::string::npos);
}

TEST(Scenario, EvaluatorErrorsBecomeCheckFailures) {
  // The lp evaluator refuses support on the critical set of a vertical plane.
  const Scenario s = parse_scenario(R"({"schema_version": 1,
    "surface": {"id": "flat-disc", "resolution": 16},
    "subspace": {"kind": "explicit", "basis": [[1, 0, 0], [0, 0, 1]]},
    "checks": [{"type": "lp_sobolev", "tolerance": 1e-6, "p": 1.5, "s_np": 2.5,
                "test_function": {"family": "chart_bump"}}]})",
                                    "v.json");
  const RunResult r = run_scenario(s);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.reports.empty());
  EXPECT_EQ(r.checks[0].problems.size(), 1u);
}

TEST(Scenario, TangentAtAndSweep) {
  const Scenario s = parse_scenario(R"({"schema_version": 1,
    "surface": {"id": "graph", "resolution": 16, "sweep": {"param": "a", "values": [0.2, 0.4]}},
    "subspace": {"kind": "tangent-at", "point": [0, 0, 0]},
    "checks": [{"type": "weighted_isoperimetric", "tolerance": 1e-6}]})",
                                    "g.json");
  const RunResult r = run_scenario(s);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_DOUBLE_EQ(r.reports[0].params.at("a"), 0.2);
  EXPECT_DOUBLE_EQ(r.reports[1].params.at("a"), 0.4);
  EXPECT_TRUE(r.passed());
}

TEST(Scenario, WarpedChecksUseTheMetric) {
  const Scenario s = parse_scenario(R"({"schema_version": 1,
    "surface": {"id": "sphere-cap", "resolution": 16},
    "subspace": {"kind": "haar", "seed": 5},
    "metric": {"preset": "hyperbolic", "t0": 0.1},
    "checks": [{"type": "warped_isoperimetric", "tolerance": 1e-6},
               {"type": "warped_lp_sobolev", "tolerance": 1e-6, "p": 1.5}]})",
                                    "w.json");
  const RunResult r = run_scenario(s);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_NE(std::find(r.reports[0].flags.begin(), r.reports[0].flags.end(), "metric:hyperbolic"),
            r.reports[0].flags.end());
  EXPECT_TRUE(r.passed());
}

TEST(Scenario, TransportChecksReportInTheSameShape) {
  const Scenario s = parse_scenario(R"({"schema_version": 1, "checks": [
    {"type": "projection_optimality", "tolerance": 1e-9, "instances": 5, "seed": 1, "max_atoms": 20},
    {"type": "composition_optimality", "tolerance": 1e-9, "instances": 5, "seed": 1, "max_atoms": 20}]})",
                                    "t.json");
  const RunResult r = run_scenario(s);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_EQ(r.reports[1].name, "composition_optimality");
  EXPECT_EQ(r.reports[1].rhs, 1e-9);
  EXPECT_EQ(r.reports[1].constants.at("certificate_failures"), 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(Scenario, DiagnosticsCarryLineNumbers) {
  EXPECT_NE(expect_config_error("{\n\"schema_version\": 1,\n\"checks\": [\n}").find("cfg.json:4:"),
            std::string::npos);
  const std::string bad_tol = expect_config_error(R"({
  "schema_version": 1,
  "checks": [
    {"type": "projection_optimality", "seed": 1,
     "tolerance": 0}
  ]
})");
  EXPECT_NE(bad_tol.find("cfg.json:5: /checks/0/tolerance"), std::string::npos) << bad_tol;
  EXPECT_NE(expect_config_error(R"({"schema_version": 2, "checks": []})").find("schema version"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1, "checks": [{"type": "nope", "tolerance": 1}]})")
                .find("unknown check type"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1, "extra": 1, "checks": []})").find("unknown key"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1,
      "surface": {"id": "torus", "resolution": 8},
      "checks": [{"type": "classical_isoperimetric", "tolerance": 1}]})")
                .find("unknown catalog surface"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1,
      "surface": {"id": "flat-disc", "resolution": 8},
      "checks": [{"type": "weighted_isoperimetric", "tolerance": 1}]})")
                .find("needs a \"subspace\""),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"schema_version": 1,
      "checks": [{"type": "composition_optimality", "tolerance": 1e-9}]})")
                .find("seed"),
            std::string::npos);
}

TEST(ReportCsv, RoundTripsExactly) {
  InequalityReport r;
  r.name = "lp_sobolev";
  r.lhs = 0.1 + 0.2;
  r.rhs = 1.0 / 3.0;
  r.margin = r.rhs - r.lhs;
  r.relative_margin = r.margin / r.rhs;
  r.surface = "graph";
  r.params = {{"a", 0.5}};
  r.resolution = {64, 64};
  r.constants = {{"S_np", 2.5}};
  r.flags = {"has,comma", "quote\"d", "a|b"};
  std::stringstream csv;
  write_reports_csv(csv, {r, r});
  const auto back = read_reports_csv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].lhs, r.lhs);
  EXPECT_EQ(back[0].rhs, r.rhs);
  EXPECT_EQ(back[1].flags, r.flags);
  EXPECT_EQ(back[1].resolution, r.resolution);
  EXPECT_EQ(back[1].params, r.params);
}

TEST(ReportCsv, SchemaMismatchAndEmptyAreErrors) {
  std::istringstream empty("");
  EXPECT_THROW(read_reports_csv(empty), Error);
  std::stringstream header_only;
  write_reports_csv(header_only, {});
  EXPECT_THROW(read_reports_csv(header_only), Error);
  std::istringstream wrong("name,lhs,rhs\nx,1,2\n");
  EXPECT_THROW(read_reports_csv(wrong), Error);
  std::stringstream short_row;
  write_reports_csv(short_row, {});
  short_row << "x,1,2\n";
  EXPECT_THROW(read_reports_csv(short_row), Error);
}

TEST(Plot, SingleRowGivesSinglePoints) {
  InequalityReport r;
  r.name = "weighted_isoperimetric";
  r.lhs = 1, r.rhs = 2, r.margin = 1, r.relative_margin = 0.5;
  r.surface = "flat-disc";
  r.params = {{"radius", 1.0}};
  r.resolution = {32, 32};
  const std::string svg = render_margin_plot({r});
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t at = 0; (at = svg.find("<circle", at)) != std::string::npos; ++at) ++circles;
  EXPECT_EQ(circles, 2u);
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
  EXPECT_THROW(render_margin_plot({}), Error);
}

TEST(Plot, ConvergenceStudyDrawsOneLinePerSeries) {
  std::vector<InequalityReport> rows;
  for (int res : {32, 64, 128}) {
    InequalityReport r;
    r.name = "weighted_isoperimetric";
    r.surface = "flat-disc";
    r.params = {{"radius", 1.0}};
    r.resolution = {res, res};
    r.margin = 1.0 / (res * res);
    rows.push_back(r);
  }
  const std::string svg = render_margin_plot(rows);
  std::size_t lines = 0;
  for (std::size_t at = 0; (at = svg.find("<polyline", at)) != std::string::npos; ++at) ++lines;
  EXPECT_EQ(lines, 1u);
}

}  // namespace
}  // namespace smot::cli
