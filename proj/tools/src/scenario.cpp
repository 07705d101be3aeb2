#include "scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "plot.hpp"
#include "smot/geometry/catalog.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/geometry/projection.hpp"
#include "smot/inequalities/evaluators.hpp"
#include "smot/inequalities/sobolev_constant.hpp"
#include "smot/inequalities/test_function.hpp"
#include "smot/warped/warped.hpp"

namespace smot::cli {
namespace fs = std::filesystem;
namespace {

// Line of every JSON pointer in an already validated document.
class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) { value(""); }

  int line_of(const std::string& pointer) const {
    std::string p = pointer;
    while (true) {
      const auto it = lines_.find(p);
      if (it != lines_.end()) return it->second;
      if (p.empty()) return 1;
      p = p.substr(0, p.rfind('/'));
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& pointer) {
    skip_ws();
    lines_.emplace(pointer, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] == '}') break;
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        std::string key = string_token();
        std::string escaped;
        for (char k : key) escaped += k == '~' ? std::string("~0") : k == '/' ? std::string("~1") : std::string(1, k);
        skip_ws();
        ++pos_;  // ':'
        value(pointer + "/" + escaped);
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      int index = 0;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] == ']') break;
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        value(pointer + "/" + std::to_string(index++));
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) == std::string_view::npos) {
        ++pos_;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const std::string& text, std::string source) : locator_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(locator_.line_of(pointer)) + ": " +
                      (pointer.empty() ? "/" : pointer) + ": " + what);
  }

  void object(const Json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    for (const auto& [key, _] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        fail(ptr + "/" + key, "unknown key '" + key + "'");
      }
    }
  }

  const Json* find(const Json& j, const char* key) const {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  const Json& need(const Json& j, const std::string& ptr, const char* key) const {
    const Json* v = find(j, key);
    if (!v) fail(ptr, std::string("missing required key '") + key + "'");
    return *v;
  }

  double number(const Json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  }

  double positive(const Json& v, const std::string& ptr) const {
    const double x = number(v, ptr);
    if (!(x > 0.0)) fail(ptr, "must be > 0");
    return x;
  }

  long long integer(const Json& v, const std::string& ptr, long long lo, long long hi) const {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) fail(ptr, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  std::uint64_t seed(const Json& v, const std::string& ptr) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(ptr, "seed must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const Json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  Vec vector(const Json& v, const std::string& ptr) const {
    if (!v.is_array() || v.empty()) fail(ptr, "expected a non-empty array of numbers");
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], ptr + "/" + std::to_string(i));
    return out;
  }

 private:
  Locator locator_;
  std::string source_;
};

const std::set<std::string>& surface_checks() {
  static const std::set<std::string> s = {"weighted_isoperimetric", "weighted_sobolev_l1", "classical_isoperimetric",
                                          "classical_sobolev_l1",   "lp_sobolev",          "warped_isoperimetric",
                                          "warped_lp_sobolev"};
  return s;
}

bool needs_subspace(const std::string& type) { return surface_checks().count(type) && type.rfind("classical", 0); }
bool is_warped(const std::string& type) { return type.rfind("warped_", 0) == 0; }
bool is_transport(const std::string& type) { return type == "projection_optimality" || type == "composition_optimality"; }

SurfaceSpec parse_surface(const Reader& rd, const Json& j, const std::string& ptr) {
  rd.object(j, ptr, {"id", "params", "resolution", "sweep"});
  SurfaceSpec s;
  s.id = rd.string(rd.need(j, ptr, "id"), ptr + "/id");
  try {
    catalog_entry(s.id);
  } catch (const Error&) {
    rd.fail(ptr + "/id", "unknown catalog surface '" + s.id + "'");
  }
  if (const Json* p = rd.find(j, "params")) {
    if (!p->is_object()) rd.fail(ptr + "/params", "expected an object");
    for (const auto& [k, v] : p->items()) s.params[k] = rd.number(v, ptr + "/params/" + k);
  }
  const Json& res = rd.need(j, ptr, "resolution");
  if (res.is_array()) {
    if (res.empty()) rd.fail(ptr + "/resolution", "expected at least one resolution");
    for (std::size_t i = 0; i < res.size(); ++i) {
      s.resolutions.push_back(static_cast<int>(rd.integer(res[i], ptr + "/resolution/" + std::to_string(i), 2, 4096)));
    }
  } else {
    s.resolutions.push_back(static_cast<int>(rd.integer(res, ptr + "/resolution", 2, 4096)));
  }
  if (const Json* sw = rd.find(j, "sweep")) {
    const std::string sp = ptr + "/sweep";
    rd.object(*sw, sp, {"param", "values"});
    SweepSpec sweep;
    sweep.param = rd.string(rd.need(*sw, sp, "param"), sp + "/param");
    const Vec values = rd.vector(rd.need(*sw, sp, "values"), sp + "/values");
    sweep.values.assign(values.begin(), values.end());
    s.sweep = sweep;
  }
  try {
    std::map<std::string, double> probe = s.params;
    if (s.sweep) probe[s.sweep->param] = s.sweep->values.front();
    resolve_params(s.id, probe);
  } catch (const Error& e) {
    rd.fail(ptr + "/params", e.what());
  }
  return s;
}

SubspaceSpec parse_subspace(const Reader& rd, const Json& j, const std::string& ptr) {
  rd.object(j, ptr, {"kind", "basis", "seed", "point"});
  SubspaceSpec s;
  const std::string kind = rd.string(rd.need(j, ptr, "kind"), ptr + "/kind");
  if (kind == "explicit") {
    s.kind = SubspaceSpec::Kind::Explicit;
    const Json& b = rd.need(j, ptr, "basis");
    if (!b.is_array() || b.empty()) rd.fail(ptr + "/basis", "expected an array of column vectors");
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < b.size(); ++i) cols.push_back(rd.vector(b[i], ptr + "/basis/" + std::to_string(i)));
    s.basis.resize(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].size() != cols.front().size()) rd.fail(ptr + "/basis/" + std::to_string(i), "column length mismatch");
      s.basis.col(static_cast<Eigen::Index>(i)) = cols[i];
    }
  } else if (kind == "haar") {
    s.kind = SubspaceSpec::Kind::Haar;
    s.seed = rd.seed(rd.need(j, ptr, "seed"), ptr + "/seed");
  } else if (kind == "tangent-at") {
    s.kind = SubspaceSpec::Kind::TangentAt;
    s.point = rd.vector(rd.need(j, ptr, "point"), ptr + "/point");
  } else {
    rd.fail(ptr + "/kind", "expected \"explicit\", \"haar\" or \"tangent-at\"");
  }
  return s;
}

MetricSpec parse_metric(const Reader& rd, const Json& j, const std::string& ptr, const fs::path& base) {
  rd.object(j, ptr, {"preset", "table", "t0", "slope"});
  MetricSpec m;
  m.preset = rd.string(rd.need(j, ptr, "preset"), ptr + "/preset");
  if (m.preset != "euclidean" && m.preset != "hyperbolic" && m.preset != "custom") {
    rd.fail(ptr + "/preset", "expected \"euclidean\", \"hyperbolic\" or \"custom\"");
  }
  if (const Json* t = rd.find(j, "table")) {
    if (m.preset != "custom") rd.fail(ptr + "/table", "a table is only used by the custom preset");
    m.table = rd.string(*t, ptr + "/table");
    if (m.table.is_relative()) m.table = base / m.table;
  } else if (m.preset == "custom") {
    rd.fail(ptr, "the custom preset needs a \"table\" CSV of t,w,w_prime");
  }
  if (const Json* t = rd.find(j, "t0")) m.t0 = rd.number(*t, ptr + "/t0");
  if (const Json* s = rd.find(j, "slope")) m.slope = rd.vector(*s, ptr + "/slope");
  return m;
}

TestFunctionSpec parse_test_function(const Reader& rd, const Json& j, const std::string& ptr) {
  rd.object(j, ptr, {"family", "center", "radius", "width", "collar", "min_jacobian", "max_radius"});
  TestFunctionSpec t;
  t.family = rd.string(rd.need(j, ptr, "family"), ptr + "/family");
  static const std::set<std::string> families = {"radial_bump", "smoothed_indicator", "chart_bump", "auto_bump"};
  if (!families.count(t.family)) rd.fail(ptr + "/family", "unknown test function family '" + t.family + "'");
  if (t.family == "radial_bump" || t.family == "smoothed_indicator") {
    t.center = rd.vector(rd.need(j, ptr, "center"), ptr + "/center");
    t.radius = rd.positive(rd.need(j, ptr, "radius"), ptr + "/radius");
  }
  if (t.family == "smoothed_indicator") t.width = rd.positive(rd.need(j, ptr, "width"), ptr + "/width");
  if (const Json* v = rd.find(j, "collar")) t.collar = rd.positive(*v, ptr + "/collar");
  if (const Json* v = rd.find(j, "min_jacobian")) t.min_jacobian = rd.positive(*v, ptr + "/min_jacobian");
  if (const Json* v = rd.find(j, "max_radius")) t.max_radius = rd.positive(*v, ptr + "/max_radius");
  return t;
}

CheckSpec parse_check(const Reader& rd, const Json& j, const std::string& ptr) {
  if (!j.is_object()) rd.fail(ptr, "expected an object");
  CheckSpec c;
  c.pointer = ptr;
  c.type = rd.string(rd.need(j, ptr, "type"), ptr + "/type");
  if (c.type == "weighted_isoperimetric" || c.type == "warped_isoperimetric") {
    rd.object(j, ptr, {"type", "tolerance", "equality"});
  } else if (c.type == "weighted_sobolev_l1") {
    rd.object(j, ptr, {"type", "tolerance", "equality", "test_function"});
  } else if (c.type == "classical_isoperimetric") {
    rd.object(j, ptr, {"type", "tolerance", "equality", "alpha", "alpha_samples", "alpha_seed"});
  } else if (c.type == "classical_sobolev_l1") {
    rd.object(j, ptr, {"type", "tolerance", "equality", "alpha", "alpha_samples", "alpha_seed", "test_function"});
  } else if (c.type == "lp_sobolev" || c.type == "warped_lp_sobolev") {
    rd.object(j, ptr, {"type", "tolerance", "equality", "p", "s_np", "jacobian_floor", "test_function"});
  } else if (c.type == "projection_optimality") {
    rd.object(j, ptr, {"type", "tolerance", "instances", "seed", "max_atoms", "min_dim", "max_dim"});
  } else if (c.type == "composition_optimality") {
    rd.object(j, ptr,
              {"type", "tolerance", "instances", "seed", "max_atoms", "min_dim", "max_dim", "pythagoras_tolerance"});
  } else {
    rd.fail(ptr + "/type", "unknown check type '" + c.type + "'");
  }
  c.tolerance = rd.positive(rd.need(j, ptr, "tolerance"), ptr + "/tolerance");
  if (const Json* v = rd.find(j, "equality")) c.equality = rd.positive(*v, ptr + "/equality");
  if (const Json* v = rd.find(j, "test_function")) c.test_function = parse_test_function(rd, *v, ptr + "/test_function");
  if (const Json* v = rd.find(j, "p")) c.p = rd.number(*v, ptr + "/p");
  if (c.type == "lp_sobolev" || c.type == "warped_lp_sobolev") {
    c.p = rd.number(rd.need(j, ptr, "p"), ptr + "/p");
    if (!(c.p > 1.0)) rd.fail(ptr + "/p", "p must be > 1");
  }
  if (const Json* v = rd.find(j, "s_np")) c.s_np = rd.positive(*v, ptr + "/s_np");
  if (const Json* v = rd.find(j, "jacobian_floor")) c.jacobian_floor = rd.positive(*v, ptr + "/jacobian_floor");
  if (const Json* v = rd.find(j, "alpha")) c.alpha = rd.positive(*v, ptr + "/alpha");
  if (const Json* v = rd.find(j, "alpha_samples")) {
    c.alpha_samples = rd.integer(*v, ptr + "/alpha_samples", 1, 1LL << 40);
  }
  if (const Json* v = rd.find(j, "alpha_seed")) c.alpha_seed = rd.seed(*v, ptr + "/alpha_seed");
  if (c.alpha_samples > 0 && !c.alpha_seed) rd.fail(ptr, "alpha_samples needs an alpha_seed");
  if (is_transport(c.type)) {
    c.transport.seed = rd.seed(rd.need(j, ptr, "seed"), ptr + "/seed");
    if (const Json* v = rd.find(j, "instances")) {
      c.transport.instances = static_cast<int>(rd.integer(*v, ptr + "/instances", 1, 100000));
    }
    if (const Json* v = rd.find(j, "max_atoms")) {
      c.transport.max_atoms = static_cast<std::size_t>(rd.integer(*v, ptr + "/max_atoms", 2, 2000));
    }
    if (const Json* v = rd.find(j, "min_dim")) c.transport.min_dim = static_cast<int>(rd.integer(*v, ptr + "/min_dim", 2, 64));
    if (const Json* v = rd.find(j, "max_dim")) c.transport.max_dim = static_cast<int>(rd.integer(*v, ptr + "/max_dim", 2, 64));
    if (c.transport.max_dim < c.transport.min_dim) rd.fail(ptr + "/max_dim", "max_dim < min_dim");
    if (const Json* v = rd.find(j, "pythagoras_tolerance")) {
      c.pythagoras_tolerance = rd.positive(*v, ptr + "/pythagoras_tolerance");
    }
  }
  return c;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source, const fs::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Byte offset to line and column.
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
    const auto nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const std::size_t col = at - (nl == std::string::npos ? 0 : nl + 1) + 1;
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  const Reader rd(text, source);
  rd.object(doc, "", {"schema_version", "name", "surface", "subspace", "metric", "checks", "outputs"});
  const long long version = rd.integer(rd.need(doc, "", "schema_version"), "/schema_version", 0, 1 << 20);
  if (version != kSchemaVersion) {
    rd.fail("/schema_version", "unsupported schema version " + std::to_string(version) + " (expected " +
                                   std::to_string(kSchemaVersion) + ")");
  }
  Scenario s;
  s.name = doc.contains("name") ? rd.string(doc["name"], "/name") : fs::path(source).stem().string();
  if (s.name.empty()) rd.fail("/name", "must not be empty");
  if (const Json* v = rd.find(doc, "surface")) s.surface = parse_surface(rd, *v, "/surface");
  if (const Json* v = rd.find(doc, "subspace")) s.subspace = parse_subspace(rd, *v, "/subspace");
  if (const Json* v = rd.find(doc, "metric")) s.metric = parse_metric(rd, *v, "/metric", base_dir);

  const Json& checks = rd.need(doc, "", "checks");
  if (!checks.is_array() || checks.empty()) rd.fail("/checks", "expected a non-empty array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string ptr = "/checks/" + std::to_string(i);
    CheckSpec c = parse_check(rd, checks[i], ptr);
    if (surface_checks().count(c.type) && !s.surface) rd.fail(ptr + "/type", c.type + " needs a \"surface\"");
    if (needs_subspace(c.type) && !s.subspace) rd.fail(ptr + "/type", c.type + " needs a \"subspace\"");
    if (is_warped(c.type) && !s.metric) rd.fail(ptr + "/type", c.type + " needs a \"metric\"");
    s.checks.push_back(std::move(c));
  }

  s.outputs.json = s.name + ".json";
  s.outputs.csv = s.name + ".csv";
  if (const Json* o = rd.find(doc, "outputs")) {
    rd.object(*o, "/outputs", {"dir", "json", "csv", "svg"});
    if (const Json* v = rd.find(*o, "dir")) s.outputs.dir = rd.string(*v, "/outputs/dir");
    if (const Json* v = rd.find(*o, "json")) s.outputs.json = rd.string(*v, "/outputs/json");
    if (const Json* v = rd.find(*o, "csv")) s.outputs.csv = rd.string(*v, "/outputs/csv");
    if (const Json* v = rd.find(*o, "svg")) s.outputs.svg = rd.string(*v, "/outputs/svg");
  }
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string(), path.parent_path());
}

bool RunResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

namespace {

struct Instance {
  std::map<std::string, double> params;
  int resolution = 0;
  std::optional<SampledImmersion> flat;
  std::optional<WarpedImmersion> warped;
};

WarpedMetric build_metric(const MetricSpec& spec) {
  if (spec.preset != "custom") return WarpedMetric::from_preset(spec.preset);
  std::ifstream in(spec.table);
  if (!in) throw Error("cannot open metric table " + spec.table.string());
  return WarpedMetric::from_table(in);
}

class Runner {
 public:
  explicit Runner(const Scenario& s) : s_(s) {
    if (s.metric) metric_ = build_metric(*s.metric);
    if (!s.surface) return;
    const SurfaceSpec& surf = *s.surface;
    const std::vector<double> sweep = surf.sweep ? surf.sweep->values : std::vector<double>{0.0};
    for (double v : sweep) {
      for (int res : surf.resolutions) {
        Instance inst;
        inst.params = surf.params;
        if (surf.sweep) inst.params[surf.sweep->param] = v;
        inst.params = resolve_params(surf.id, inst.params);
        inst.resolution = res;
        instances_.push_back(std::move(inst));
      }
    }
  }

  RunResult run() {
    RunResult out;
    for (std::size_t i = 0; i < s_.checks.size(); ++i) {
      const CheckSpec& c = s_.checks[i];
      CheckOutcome oc;
      oc.index = i;
      oc.type = c.type;
      try {
        if (is_transport(c.type)) {
          run_transport(c, out, oc);
        } else {
          run_surface_check(c, out, oc);
        }
      } catch (const Error& e) {
        oc.problems.push_back(e.what());
      }
      oc.passed = oc.problems.empty();
      out.checks.push_back(std::move(oc));
    }
    return out;
  }

 private:
  const SampledImmersion& flat(Instance& inst) {
    if (!inst.flat) inst.flat = make_surface(s_.surface->id, inst.params, inst.resolution);
    return *inst.flat;
  }

  const WarpedImmersion& warped(Instance& inst) {
    if (!inst.warped) {
      const ParametricChart chart = make_chart(s_.surface->id, inst.params, inst.resolution);
      Vec slope = s_.metric->slope.size() ? s_.metric->slope : Vec::Zero(chart.ambient_dim);
      if (slope.size() != chart.ambient_dim) throw Error("metric slope must have one entry per ambient coordinate");
      inst.warped = warped_geometry(lift_chart(chart, s_.metric->t0, slope), *metric_,
                                    SurfaceInfo{s_.surface->id, inst.params});
    }
    return *inst.warped;
  }

  Subspace subspace(Instance& inst) {
    const SampledImmersion& m = flat(inst);
    const SubspaceSpec& spec = *s_.subspace;
    switch (spec.kind) {
      case SubspaceSpec::Kind::Explicit:
        if (spec.basis.rows() != m.ambient_dim) throw Error("explicit basis vectors must live in R^" + std::to_string(m.ambient_dim));
        return Subspace::from_spanning(spec.basis);
      case SubspaceSpec::Kind::Haar:
        return Subspace(haar_plane_sample(m.ambient_dim, m.intrinsic_dim, spec.seed));
      case SubspaceSpec::Kind::TangentAt: {
        if (spec.point.size() != m.ambient_dim) throw Error("tangent-at point must have " + std::to_string(m.ambient_dim) + " coordinates");
        Eigen::Index nearest = 0;
        (m.points.colwise() - spec.point).colwise().squaredNorm().minCoeff(&nearest);
        return Subspace::from_spanning(m.tangent_frames[static_cast<std::size_t>(nearest)]);
      }
    }
    throw Error("unreachable subspace kind");
  }

  static TestFunction make_u(const SampledImmersion& m, const TestFunctionSpec& t, const Vec& jacobians) {
    if (t.family == "radial_bump") return radial_bump(m, t.center, t.radius);
    if (t.family == "smoothed_indicator") return smoothed_indicator(m, t.center, t.radius, t.width);
    if (t.family == "chart_bump") return chart_bump(m, t.collar);
    return auto_bump(m, jacobians, t.min_jacobian, t.max_radius);
  }

  double alpha(const CheckSpec& c, int n, int k) {
    if (c.alpha) return *c.alpha;
    if (c.alpha_samples > 0) return alpha_constant(n, k, c.alpha_samples, *c.alpha_seed).value;
    if (k == 1) return alpha_n1(n);
    throw Error("codimension " + std::to_string(k) + " needs \"alpha\" or alpha_samples/alpha_seed");
  }

  void record(RunResult& out, CheckOutcome& oc, const CheckSpec& c, InequalityReport r) {
    if (r.relative_margin < -c.tolerance) {
      oc.problems.push_back(r.name + " on " + r.surface + ": relative_margin " + format_double(r.relative_margin) +
                            " < -" + format_double(c.tolerance));
    }
    if (c.equality && std::abs(r.relative_margin) > *c.equality) {
      oc.problems.push_back(r.name + " on " + r.surface + ": |relative_margin| " +
                            format_double(std::abs(r.relative_margin)) + " > equality tolerance " +
                            format_double(*c.equality));
    }
    oc.reports.push_back(out.reports.size());
    out.reports.push_back(std::move(r));
  }

  void run_surface_check(const CheckSpec& c, RunResult& out, CheckOutcome& oc) {
    std::optional<double> s_np = c.s_np;
    std::optional<double> alpha_value;
    for (std::size_t idx = 0; idx < instances_.size(); ++idx) {
      Instance& inst = instances_[idx];
      try {
        const SampledImmersion& m = flat(inst);
        const int n = m.intrinsic_dim;
        if ((c.type == "lp_sobolev" || c.type == "warped_lp_sobolev") && !s_np) s_np = sobolev_constant(n, c.p);
        if (c.type.rfind("classical", 0) == 0 && !alpha_value) alpha_value = alpha(c, n, m.ambient_dim - n);
        const LpOptions lp{c.jacobian_floor};
        if (c.type == "weighted_isoperimetric") {
          record(out, oc, c, weighted_isoperimetric(m, subspace(inst)));
        } else if (c.type == "weighted_sobolev_l1") {
          const Subspace e = subspace(inst);
          record(out, oc, c, weighted_sobolev_l1(m, e, make_u(m, c.test_function, projection_jacobians(m, e))));
        } else if (c.type == "classical_isoperimetric") {
          record(out, oc, c, classical_isoperimetric(m, *alpha_value));
        } else if (c.type == "classical_sobolev_l1") {
          const Vec ones = Vec::Ones(static_cast<Eigen::Index>(m.size()));
          record(out, oc, c, classical_sobolev_l1(m, *alpha_value, make_u(m, c.test_function, ones)));
        } else if (c.type == "lp_sobolev") {
          const Subspace e = subspace(inst);
          record(out, oc, c,
                 lp_sobolev(m, e, make_u(m, c.test_function, projection_jacobians(m, e)), c.p, *s_np, lp));
        } else if (c.type == "warped_isoperimetric") {
          record(out, oc, c, warped_weighted_isoperimetric(warped(inst), subspace(inst)));
        } else if (c.type == "warped_lp_sobolev") {
          const Subspace e = subspace(inst);
          const WarpedImmersion& wm = warped(inst);
          const TestFunction u = make_u(wm.sampled, c.test_function, warped_projection_jacobians(wm, e));
          record(out, oc, c, warped_lp_sobolev(wm, e, u, c.p, *s_np, lp));
        }
      } catch (const Error& e) {
        oc.problems.push_back("resolution " + std::to_string(inst.resolution) + ": " + e.what());
      }
    }
  }

  void run_transport(const CheckSpec& c, RunResult& out, CheckOutcome& oc) {
    const bool composition = c.type == "composition_optimality";
    const TransportBatchResult r = composition ? composition_batch(c.transport, c.tolerance)
                                               : projection_optimality_batch(c.transport, c.tolerance);
    for (const auto& f : r.failures) oc.problems.push_back(f);
    if (composition && r.worst_pythagoras_gap > c.pythagoras_tolerance) {
      oc.problems.push_back("Pythagoras gap " + format_double(r.worst_pythagoras_gap) + " > " +
                            format_double(c.pythagoras_tolerance));
    }
    oc.reports.push_back(out.reports.size());
    out.reports.push_back(transport_report(r, c.transport, c.tolerance, c.pythagoras_tolerance));
  }

  const Scenario& s_;
  std::optional<WarpedMetric> metric_;
  std::vector<Instance> instances_;
};

}  // namespace

RunResult run_scenario(const Scenario& scenario) { return Runner(scenario).run(); }

Json result_document(const Scenario& scenario, const RunResult& result) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["scenario"] = scenario.name;
  doc["passed"] = result.passed();
  doc["checks"] = Json::array();
  for (const auto& c : result.checks) {
    const CheckSpec& spec = scenario.checks[c.index];
    Json j;
    j["index"] = c.index;
    j["type"] = c.type;
    j["tolerance"] = spec.tolerance;
    if (spec.equality) j["equality"] = *spec.equality;
    j["passed"] = c.passed;
    j["reports"] = c.reports;
    j["problems"] = c.problems;
    doc["checks"].push_back(std::move(j));
  }
  doc["reports"] = Json::array();
  for (const auto& r : result.reports) doc["reports"].push_back(report_to_json(r));
  return doc;
}

std::vector<fs::path> write_outputs(const Scenario& scenario, const RunResult& result, const fs::path& dir) {
  std::error_code ec;
  if (!dir.empty()) fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  auto open = [&](const std::string& name) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    written.push_back(path);
    return out;
  };
  {
    auto out = open(scenario.outputs.json);
    out << result_document(scenario, result).dump(2) << "\n";
  }
  {
    auto out = open(scenario.outputs.csv);
    write_reports_csv(out, result.reports);
  }
  if (!scenario.outputs.svg.empty() && !result.reports.empty()) {
    auto out = open(scenario.outputs.svg);
    out << render_margin_plot(result.reports);
  }
  return written;
}

}  // namespace smot::cli
