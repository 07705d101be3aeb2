#include "smot/geometry/quadrature.hpp"

#include <utility>

namespace smot {

namespace {

// P_order(x) and its derivative via the three-term recurrence.
std::pair<double, double> legendre(int order, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= order; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, order * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw Error("gauss_legendre: order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double dp = legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(order - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(order - 1 - i) = w;
  }
  if (order % 2 == 1) rule.nodes(order / 2) = 0.0;
  return rule;
}

double integrate(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) sum += rule.weights(i) * f(mid + half * rule.nodes(i));
  return half * sum;
}

}  // namespace smot
