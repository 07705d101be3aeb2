#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "smot/inequalities/report.hpp"
#include "smot/transport/verification.hpp"

namespace smot::cli {

using Json = nlohmann::ordered_json;

// Column order shared by the JSON objects and the CSV header.
const std::vector<std::string>& report_columns();

Json report_to_json(const InequalityReport& r);

// Transport batches are reported in the same shape: lhs is the worst relative
// cost gap, rhs the tolerance.
InequalityReport transport_report(const TransportBatchResult& result, const TransportBatchOptions& options,
                                  double tolerance, double pythagoras_tolerance);

// Map, vector and flag columns are compact JSON inside quoted CSV fields.
void write_reports_csv(std::ostream& out, const std::vector<InequalityReport>& reports);

// Throws smot::Error on a header or row that does not match the schema.
std::vector<InequalityReport> read_reports_csv(std::istream& in);

std::string format_double(double x);

}  // namespace smot::cli
