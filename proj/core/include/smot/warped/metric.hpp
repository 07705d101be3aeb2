#pragma once

#include <functional>
#include <istream>
#include <string>

#include "smot/common.hpp"

namespace smot {

// g_N = dt^2 + w(t)^2 dy^2 on R x R^m.
struct WarpedMetric {
  std::string preset = "euclidean";  // "euclidean", "hyperbolic" or "custom"
  std::function<double(double)> w;
  std::function<double(double)> w_prime;

  static WarpedMetric euclidean();
  static WarpedMetric hyperbolic();  // w = e^t
  static WarpedMetric from_functions(std::function<double(double)> w, std::function<double(double)> w_prime,
                                     std::string preset = "custom");
  // Rows "t,w,w_prime" (header optional), t strictly increasing. Values
  // between knots come from cubic Hermite interpolation; outside the table
  // evaluation throws.
  static WarpedMetric from_table(std::istream& csv);
  static WarpedMetric from_preset(const std::string& name);

  double value(double t) const;
  double derivative(double t) const;

  // Checks w > 0 and |w' - central difference| <= tol * max(1, |w'|) on
  // `samples` points of [t_lo, t_hi].
  void validate(double t_lo, double t_hi, double tol = 1e-6, int samples = 65) const;
};

}  // namespace smot
