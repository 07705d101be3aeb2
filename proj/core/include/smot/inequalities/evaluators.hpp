#pragma once

#include "smot/geometry/subspace.hpp"
#include "smot/inequalities/report.hpp"
#include "smot/inequalities/test_function.hpp"

namespace smot {

inline constexpr double kDefaultJacobianFloor = 1e-6;

// Flag carried by every L^p report: the curvature and gradient terms enter
// with a 1/p power (the Hoelder form), not as printed in the bare statement.
inline constexpr const char* kLpHolderFormFlag = "lp_rhs_holder_form:(int w|grad u|^p)^(1/p)+c(int w|H|^p|u|^p)^(1/p)";

// n w_n^(1/n) (int J_E^(1/(n-1)))^((n-1)/n) <= vol(dM) + n int |H|.
InequalityReport weighted_isoperimetric(const SampledImmersion& m, const Subspace& e);

// n w_n^(1/n) (int J_E^(1/(n-1)) |u|^(n/(n-1)))^((n-1)/n) <= int |grad u| + n int |H||u|.
InequalityReport weighted_sobolev_l1(const SampledImmersion& m, const Subspace& e, const TestFunction& u);

// n w_n^(1/n) alpha Vol(M)^((n-1)/n) <= vol(dM) + n int |H|.
InequalityReport classical_isoperimetric(const SampledImmersion& m, double alpha);

// Same with |u|: n w_n^(1/n) alpha (int |u|^(n/(n-1)))^((n-1)/n) <= int |grad u| + n int |H||u|.
InequalityReport classical_sobolev_l1(const SampledImmersion& m, double alpha, const TestFunction& u);

struct LpOptions {
  double jacobian_floor = kDefaultJacobianFloor;
};

// S (int J^(1/(n-1)) |u|^(np/(n-p)))^((n-p)/(np))
//   <= (int J^(-(p-1)/(n-1)) |grad u|^p)^(1/p) + c (int J^(-(p-1)/(n-1)) |H|^p |u|^p)^(1/p),
// c = n(n-p)/(p(n-1)). Throws if J_E < floor anywhere u is nonzero.
InequalityReport lp_sobolev(const SampledImmersion& m, const Subspace& e, const TestFunction& u, double p,
                            double s_np, const LpOptions& options = {});

namespace detail {

// Shared by the flat and warped evaluators. `left_weight` multiplies the
// lhs integrand, `right_weight` both rhs integrands; norms are per sample.
struct LpTerms {
  double lhs = 0.0;
  double gradient_term = 0.0;
  double curvature_term = 0.0;
};
LpTerms lp_terms(const SampledImmersion& m, const Vec& left_weight, const Vec& right_weight,
                 const Vec& jacobian, const Vec& h_norm, const Vec& grad_norm, const TestFunction& u, double p,
                 double s_np, double jacobian_floor);
void check_exponent(int n, double p);

}  // namespace detail

}  // namespace smot
