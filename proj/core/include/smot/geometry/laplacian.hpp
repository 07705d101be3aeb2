#pragma once

#include <functional>

#include "smot/geometry/immersion.hpp"

namespace smot {

// An ambient function with its first two derivatives.
struct SmoothPotential {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
  // Optional: returns false where the function is not C^2.
  std::function<bool(const Vec&)> smooth_at;

  static SmoothPotential linear(const Vec& a);
  static SmoothPotential half_norm_squared(int ambient_dim);
  // x -> 0.5 x^T A x + b^T x with symmetric A.
  static SmoothPotential quadratic(const Mat& a, const Vec& b);
};

struct LaplacianCheck {
  double residual = 0.0;
  double intrinsic_laplacian = 0.0;  // Laplace-Beltrami of F restricted to M
  double hessian_trace = 0.0;        // trace of D^2 F over T_xM
  double curvature_term = 0.0;       // n <grad F, H>
};

// Compares the chart finite-difference Laplacian of F|_M at sample `index`
// with tr(D^2 F|T_xM) + n <grad F, H>.
LaplacianCheck laplacian_identity_check(const SampledImmersion& m, const SmoothPotential& f, std::size_t index);

}  // namespace smot
