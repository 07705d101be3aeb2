#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace smot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// All precondition and domain failures surface as this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Volume of the Euclidean unit n-ball, from omega_n = (2 pi / n) omega_{n-2}.
inline double unit_ball_volume(int n) {
  if (n < 0) throw Error("unit_ball_volume: negative dimension");
  if (n == 0) return 1.0;
  double omega = (n % 2 == 1) ? 2.0 : std::numbers::pi;
  for (int m = (n % 2 == 1) ? 3 : 4; m <= n; m += 2) omega *= 2.0 * std::numbers::pi / m;
  return omega;
}

// Euclidean isoperimetric constant n * omega_n^(1/n).
inline double isoperimetric_constant(int n) {
  return n * std::pow(unit_ball_volume(n), 1.0 / n);
}

}  // namespace smot
