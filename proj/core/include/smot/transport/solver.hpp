#pragma once

#include <string>

#include "smot/geometry/subspace.hpp"
#include "smot/measures/plan.hpp"

namespace smot {

// Largest atom count accepted on either side.
inline constexpr std::size_t kMaxSolverAtoms = 5000;

struct DualPotentials {
  Vec phi;  // per source atom
  Vec psi;  // per target atom; phi_i + psi_j <= |x_i - y_j|^2
};

struct SolverReport {
  double cost = 0.0;
  std::size_t support_size = 0;
  double dual_gap = 0.0;            // primal cost minus dual objective
  double max_dual_violation = 0.0;  // max over pairs of phi_i + psi_j - c_ij (<= 0 when feasible)
  double max_support_slack = 0.0;   // max over the support of |c_ij - phi_i - psi_j|
  bool monotone_certificate = false;
  long long iterations = 0;
  std::string method;               // "network-simplex" or "assignment"
};

struct ExactSolution {
  TransferencePlan plan;
  DualPotentials duals;
  SolverReport report;
};

struct SolveOptions {
  bool certify = true;     // run the cyclical-monotonicity certificate
  bool allow_assignment = true;
};

// Exact quadratic-cost optimal transport between two discrete measures of equal
// total mass. Equal-size uniform instances go through the assignment solver.
ExactSolution solve_exact(const MeasurePtr& mu, const MeasurePtr& nu, const SolveOptions& options = {});

// The deterministic plan x -> P_E x, optimal between mu and its projection.
TransferencePlan projection_plan(const MeasurePtr& mu, const Subspace& e);

struct ComposedSolution {
  TransferencePlan plan;          // mu -> nu
  TransferencePlan projection;    // mu -> p_E mu
  ExactSolution inner;            // p_E mu -> nu
  double projection_cost = 0.0;
  double inner_cost = 0.0;
  double total_cost = 0.0;        // plan_cost(plan)
};

// Projects onto E, solves inside E, and composes through the gluing.
// Throws if nu is not supported in E (tolerance 1e-9).
ComposedSolution composed_solution(const MeasurePtr& mu, const Subspace& e, const MeasurePtr& nu,
                                   const SolveOptions& options = {});

// Squared 2-Wasserstein distance through solve_exact.
double wasserstein2_squared(const MeasurePtr& mu, const MeasurePtr& nu);

}  // namespace smot
