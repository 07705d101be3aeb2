#include "smot/inequalities/report.hpp"

#include <cmath>

namespace smot {

InequalityReport make_report(std::string name, double lhs, double rhs, const SampledImmersion& m,
                             std::map<std::string, double> constants, std::vector<std::string> flags) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) throw Error(name + ": non-finite side");
  if (!(rhs > 0.0)) throw Error(name + ": right-hand side is not positive");
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.relative_margin = r.margin / rhs;
  r.surface = m.surface.id;
  r.params = m.surface.params;
  r.resolution = m.resolution;
  r.constants = std::move(constants);
  r.flags = std::move(flags);
  return r;
}

}  // namespace smot
