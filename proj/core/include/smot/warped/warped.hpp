#pragma once

#include "smot/geometry/chart.hpp"
#include "smot/geometry/immersion.hpp"
#include "smot/geometry/subspace.hpp"
#include "smot/inequalities/evaluators.hpp"
#include "smot/warped/metric.hpp"

namespace smot {

// A sampled immersion into (R x R^m, g_N). Coordinate 0 of every ambient
// vector is t. `sampled` holds the g_N quantities: frames are g_N-orthonormal,
// metric is the induced g_N metric, weights and boundary weights are g_N
// volumes, and mean_curvature is H in coordinate components.
struct WarpedImmersion {
  SampledImmersion sampled;
  WarpedMetric metric;
  Vec tau;     // first coordinate of each point
  Vec h_norm;  // |H|_{g_N}

  std::size_t size() const { return sampled.size(); }
  int intrinsic_dim() const { return sampled.intrinsic_dim; }
  // g_N norm of a coordinate vector based at sample j.
  double norm(std::size_t j, const Vec& v) const;
};

// g_N at a point (diagonal: 1, w^2, ..., w^2).
Mat warped_gram(const WarpedMetric& metric, const Vec& x);

// Geometry of the chart in g_N. Mean curvature is the g_N-normal part of
// G^{ab} (d_ab X + Gamma(d_a X, d_b X)) / n with Gamma^t(U, V) = -w w' U^y.V^y
// and Gamma^{y_k}(U, V) = (w'/w)(U^t V^{y_k} + U^{y_k} V^t).
WarpedImmersion warped_geometry(const ParametricChart& chart, const WarpedMetric& metric, SurfaceInfo info = {});

// Lifts a chart into R x R^d: t = t0 + <slope, X>, y = X.
ParametricChart lift_chart(const ParametricChart& chart, double t0, const Vec& slope);

// J_E at sample `index`: |det| of the g_N-orthogonal projection of T_xM onto
// span(d/dy_i, i in E), measured in g_N-orthonormal frames. E lives in the
// R^m factor.
double warped_projection_jacobian(const WarpedImmersion& m, const Subspace& e, std::size_t index);
Vec warped_projection_jacobians(const WarpedImmersion& m, const Subspace& e);

// Jacobian of p : M -> E itself, J_E / w(tau)^n.
double warped_full_jacobian(const WarpedImmersion& m, const Subspace& e, std::size_t index);

// |grad u|_{g_N} per sample.
Vec warped_grad_norm(const WarpedImmersion& m, const TestFunction& u);

// n w_n^(1/n) (int (w^n J_E)^(1/(n-1)))^((n-1)/n) <= int_{dM} w + n int w |H|.
InequalityReport warped_weighted_isoperimetric(const WarpedImmersion& m, const Subspace& e);

// S (int (w^n J)^(1/(n-1)) |u|^(np/(n-p)))^((n-p)/(np))
//   <= (int J^(-(p-1)/(n-1)) w^((n-p)/(n-1)) |grad u|^p)^(1/p)
//    + c (int J^(-(p-1)/(n-1)) w^((n-p)/(n-1)) |H|^p |u|^p)^(1/p).
InequalityReport warped_lp_sobolev(const WarpedImmersion& m, const Subspace& e, const TestFunction& u, double p,
                                   double s_np, const LpOptions& options = {});

}  // namespace smot
