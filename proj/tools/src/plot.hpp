#pragma once

#include <string>
#include <vector>

#include "smot/inequalities/report.hpp"

namespace smot::cli {

// Two panels: margin against resolution (one line per report name, surface
// and parameter set) and margin against the surface parameter that varies
// within each name/surface/resolution group. Throws on an empty report list.
std::string render_margin_plot(const std::vector<InequalityReport>& reports);

}  // namespace smot::cli
