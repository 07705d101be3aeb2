#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smot/common.hpp"

namespace smot {

struct TransportBatchOptions {
  int instances = 100;
  std::uint64_t seed = 0;
  std::size_t max_atoms = 200;  // per side
  int min_dim = 3;              // ambient dimension range
  int max_dim = 5;
};

struct TransportBatchResult {
  std::string name;
  int instances = 0;
  double worst_cost_gap = 0.0;        // max |cost - LP cost| / LP cost
  double worst_pythagoras_gap = 0.0;  // composition only: |total - (proj + inner)| / total
  int certificate_failures = 0;
  std::vector<std::string> failures;  // one line per failing instance
};

// Random mu in R^d and Haar E: the plan (Id x p_E)_# mu against solve_exact
// between mu and p_E mu, plus the exact cyclical-monotonicity certificate on
// the projection plan. Instance i is seeded from (seed, i) only.
TransportBatchResult projection_optimality_batch(const TransportBatchOptions& options, double tolerance);

// mu sampled on a curve or a catalog surface, nu on a Haar E: composed_solution
// against the direct LP, with the Pythagoras split of the composed cost.
TransportBatchResult composition_batch(const TransportBatchOptions& options, double tolerance);

}  // namespace smot
