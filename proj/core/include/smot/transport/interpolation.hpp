#pragma once

#include <utility>
#include <vector>

#include "smot/geometry/subspace.hpp"
#include "smot/measures/plan.hpp"

namespace smot {

// Measure carried by the support at time t: atoms (1 - t) x + t y with the
// entry masses, coincident atoms merged. Throws unless 0 <= t <= 1.
DiscreteMeasure displacement_interpolation(const TransferencePlan& rho, double t);

struct MongeNote {
  bool injective = true;
  // Pairs of distinct atoms with the same projection.
  std::vector<std::pair<std::size_t, std::size_t>> collisions;
  std::string message;
};

// Whether p_E is one-to-one on the atoms of mu. When it is not, the reverse
// problem from p_E mu back to mu has no transport map.
MongeNote monge_problem_solvability_note(const DiscreteMeasure& mu, const Subspace& e, double tol = 1e-9);

}  // namespace smot
