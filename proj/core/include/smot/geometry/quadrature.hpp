#pragma once

#include <functional>

#include "smot/common.hpp"

namespace smot {

struct GaussLegendreRule {
  Vec nodes;    // on [-1, 1], ascending
  Vec weights;
};

// Nodes by Newton iteration on P_order from Chebyshev initial guesses.
GaussLegendreRule gauss_legendre(int order);

// Integral of f over [a, b] with the given rule.
double integrate(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a, double b);

}  // namespace smot
