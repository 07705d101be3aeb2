#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smot/common.hpp"

namespace smot {

// Quadrature for radial integrals over R^n in s = log r: composite
// Gauss-Legendre on panels graded geometrically away from r = 1.
struct RadialGrid {
  double log_extent = 40.0;   // s in [-log_extent, log_extent]
  double first_panel = 1e-3;  // width of the panels touching s = 0
  double growth = 1.5;
  int nodes_per_panel = 24;
};

// The dual functional whose supremum is S_{n,p}:
//   n(n-p)/(p(n-1)) * int v^a / ( |v|_{p*}^a (int |y|^q v^{p*})^(1/q) / |v|_{p*}^(p*/q) )
// with a = p(n-1)/(n-p), p* = np/(n-p), q = p/(p-1). Normalization is folded
// in, so any positive radial profile v(r) is accepted. Dilation invariant.
double sobolev_dual_functional(int n, double p, const std::function<double(double)>& profile,
                               const RadialGrid& grid = {});

struct SobolevConstantResult {
  double value = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double stationarity = 0.0;  // max |d log F / d parameter| at the maximizer
  int iterations = 0;
  std::vector<std::string> trace;
};

struct SobolevConstantOptions {
  RadialGrid grid;
  double stationarity_tol = 1e-6;
  int max_iterations = 4000;
};

// Maximizes the dual functional over v(r) = (1 + r^beta)^(-gamma) (1 + eps r^2 e^{-r^2}).
// Throws with the optimizer trace if stationarity is not reached.
SobolevConstantResult sobolev_constant_search(int n, double p, const SobolevConstantOptions& options = {});
double sobolev_constant(int n, double p, const SobolevConstantOptions& options = {});

}  // namespace smot
