#pragma once

#include <map>
#include <string>
#include <vector>

#include "smot/geometry/immersion.hpp"

namespace smot {

// One evaluation of an inequality lhs <= rhs on a sampled surface.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;           // rhs - lhs
  double relative_margin = 0.0;  // margin / rhs
  std::string surface;
  std::map<std::string, double> params;
  std::vector<int> resolution;
  std::map<std::string, double> constants;
  std::vector<std::string> flags;
};

// Fills margins and surface metadata. Throws unless lhs and rhs are finite
// and rhs > 0.
InequalityReport make_report(std::string name, double lhs, double rhs, const SampledImmersion& m,
                             std::map<std::string, double> constants = {}, std::vector<std::string> flags = {});

}  // namespace smot
