#include "report_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace smot::cli {
namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// One CSV record; quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields, int& line) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw Error("line " + std::to_string(line) + ": unterminated quoted field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

double parse_double(const std::string& s, int line, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error("line " + std::to_string(line) + ": column " + column + " is not a number: '" + s + "'");
  }
  return v;
}

Json parse_json_field(const std::string& s, int line, const std::string& column, Json::value_t kind) {
  Json j = Json::parse(s, nullptr, false);
  if (j.is_discarded() || j.type() != kind) {
    throw Error("line " + std::to_string(line) + ": column " + column + " is not valid JSON of the expected kind");
  }
  return j;
}

}  // namespace

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {"name",    "lhs",        "rhs",       "margin",    "relative_margin",
                                                "surface", "params",     "resolution", "constants", "flags"};
  return cols;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json report_to_json(const InequalityReport& r) {
  Json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["relative_margin"] = r.relative_margin;
  j["surface"] = r.surface;
  j["params"] = Json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = v;
  j["resolution"] = r.resolution;
  j["constants"] = Json::object();
  for (const auto& [k, v] : r.constants) j["constants"][k] = v;
  j["flags"] = r.flags;
  return j;
}

InequalityReport transport_report(const TransportBatchResult& result, const TransportBatchOptions& options,
                                  double tolerance, double pythagoras_tolerance) {
  InequalityReport r;
  r.name = result.name;
  r.lhs = result.worst_cost_gap;
  r.rhs = tolerance;
  r.margin = tolerance - result.worst_cost_gap;
  r.relative_margin = r.margin / tolerance;
  r.surface = "random-instances";
  r.params = {{"instances", static_cast<double>(options.instances)},
              {"seed", static_cast<double>(options.seed)},
              {"max_atoms", static_cast<double>(options.max_atoms)},
              {"min_dim", static_cast<double>(options.min_dim)},
              {"max_dim", static_cast<double>(options.max_dim)}};
  r.constants = {{"certificate_failures", static_cast<double>(result.certificate_failures)}};
  if (result.name == "composition_optimality") {
    r.constants["worst_pythagoras_gap"] = result.worst_pythagoras_gap;
    r.constants["pythagoras_tolerance"] = pythagoras_tolerance;
  }
  r.flags = result.failures;
  return r;
}

void write_reports_csv(std::ostream& out, const std::vector<InequalityReport>& reports) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : reports) {
    const Json j = report_to_json(r);
    out << quote(r.name) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
        << format_double(r.margin) << ',' << format_double(r.relative_margin) << ',' << quote(r.surface) << ','
        << quote(j["params"].dump()) << ',' << quote(j["resolution"].dump()) << ','
        << quote(j["constants"].dump()) << ',' << quote(j["flags"].dump()) << "\n";
  }
}

std::vector<InequalityReport> read_reports_csv(std::istream& in) {
  std::vector<std::string> fields;
  int line = 1;
  if (!read_record(in, fields, line)) throw Error("empty CSV: no header");
  if (fields != report_columns()) throw Error("line 1: header does not match the report schema");
  std::vector<InequalityReport> out;
  while (true) {
    const int row_line = line;
    if (!read_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != report_columns().size()) {
      throw Error("line " + std::to_string(row_line) + ": expected " + std::to_string(report_columns().size()) +
                  " columns, found " + std::to_string(fields.size()));
    }
    InequalityReport r;
    r.name = fields[0];
    r.lhs = parse_double(fields[1], row_line, "lhs");
    r.rhs = parse_double(fields[2], row_line, "rhs");
    r.margin = parse_double(fields[3], row_line, "margin");
    r.relative_margin = parse_double(fields[4], row_line, "relative_margin");
    r.surface = fields[5];
    const Json params = parse_json_field(fields[6], row_line, "params", Json::value_t::object);
    const Json resolution = parse_json_field(fields[7], row_line, "resolution", Json::value_t::array);
    const Json constants = parse_json_field(fields[8], row_line, "constants", Json::value_t::object);
    const Json flags = parse_json_field(fields[9], row_line, "flags", Json::value_t::array);
    try {
      for (const auto& [k, v] : params.items()) r.params[k] = v.get<double>();
      for (const auto& v : resolution) r.resolution.push_back(v.get<int>());
      for (const auto& [k, v] : constants.items()) r.constants[k] = v.get<double>();
      for (const auto& v : flags) r.flags.push_back(v.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error("line " + std::to_string(row_line) + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) throw Error("CSV has a header but no report rows");
  return out;
}

}  // namespace smot::cli
