#include "smot/inequalities/sobolev_constant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "smot/geometry/quadrature.hpp"

namespace smot {
namespace {

struct Exponents {
  double a;      // p(n-1)/(n-p)
  double pstar;  // np/(n-p)
  double q;      // p/(p-1)
};

Exponents exponents(int n, double p) {
  if (n < 2 || !(p > 1.0 && p < n)) {
    std::ostringstream os;
    os << "sobolev_constant: need n >= 2 and 1 < p < n (got n = " << n << ", p = " << p << ")";
    throw Error(os.str());
  }
  return {p * (n - 1.0) / (n - p), n * p / (n - p), p / (p - 1.0)};
}

struct LogGrid {
  std::vector<double> s;
  std::vector<double> w;
};

LogGrid build_grid(const RadialGrid& g) {
  if (!(g.log_extent > 0.0) || !(g.first_panel > 0.0) || !(g.growth >= 1.0) || g.nodes_per_panel < 2) {
    throw Error("RadialGrid: invalid layout");
  }
  std::vector<double> breaks{0.0};
  double width = g.first_panel;
  while (breaks.back() < g.log_extent) {
    breaks.push_back(std::min(g.log_extent, breaks.back() + width));
    width *= g.growth;
  }
  const GaussLegendreRule rule = gauss_legendre(g.nodes_per_panel);
  LogGrid out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double half = 0.5 * (breaks[k + 1] - breaks[k]);
    const double mid = 0.5 * (breaks[k + 1] + breaks[k]);
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        out.s.push_back(sign * (mid + half * rule.nodes(i)));
        out.w.push_back(half * rule.weights(i));
      }
    }
  }
  return out;
}

// log of the dual functional (without the n(n-p)/(p(n-1)) prefactor) for a
// profile given through log v as a function of s = log r.
template <class LogProfile>
double log_functional(int n, const Exponents& ex, const LogGrid& grid, LogProfile log_v) {
  // Integrals are accumulated with a common shift to stay in range.
  const std::size_t count = grid.s.size();
  std::vector<double> lv(count);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    lv[i] = log_v(grid.s[i]);
    shift = std::max(shift, lv[i]);
  }
  double ia = 0.0;
  double is = 0.0;
  double iq = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = grid.s[i];
    const double base = std::log(grid.w[i]) + n * s;
    const double d = lv[i] - shift;
    ia += std::exp(base + ex.a * d);
    is += std::exp(base + ex.pstar * d);
    iq += std::exp(base + ex.q * s + ex.pstar * d);
  }
  // F = I_a * I_*^(1/q - a/p*) / I_q^(1/q). The shift cancels by homogeneity;
  // the sphere area n w_n enters with total degree 1 - a/p* = 1/n.
  return std::log(ia) + (1.0 / ex.q - ex.a / ex.pstar) * std::log(is) - std::log(iq) / ex.q +
         std::log(n * unit_ball_volume(n)) / n;
}

double prefactor(int n, double p) { return n * (n - p) / (p * (n - 1.0)); }

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct Family {
  int n;
  double p;
  Exponents ex;
  const LogGrid* grid;

  // Parameters: log beta, log gamma, epsilon.
  double operator()(const std::array<double, 3>& x) const {
    const double beta = std::exp(x[0]);
    const double gamma = std::exp(x[1]);
    const double eps = x[2];
    if (!std::isfinite(beta) || !std::isfinite(gamma)) return std::numeric_limits<double>::infinity();
    if (beta * gamma * ex.pstar <= n + ex.q + 1e-9) return std::numeric_limits<double>::infinity();
    if (eps <= -0.99 * std::exp(1.0)) return std::numeric_limits<double>::infinity();
    return -log_functional(n, ex, *grid, [&](double s) {
      const double r2 = std::exp(2.0 * s);
      return -gamma * softplus(beta * s) + std::log1p(eps * r2 * std::exp(-r2));
    });
  }
};

using Point = std::array<double, 3>;

struct NelderMeadResult {
  Point best;
  double value;
  int iterations;
};

NelderMeadResult nelder_mead(const Family& f, Point start, double step, int budget) {
  std::array<Point, 4> x;
  std::array<double, 4> fx;
  x[0] = start;
  for (int i = 0; i < 3; ++i) {
    x[static_cast<std::size_t>(i + 1)] = start;
    x[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)] += step;
  }
  for (std::size_t i = 0; i < 4; ++i) fx[i] = f(x[i]);

  int it = 0;
  for (; it < budget; ++it) {
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::array<Point, 4> xs;
    std::array<double, 4> fs;
    for (std::size_t i = 0; i < 4; ++i) {
      xs[i] = x[order[i]];
      fs[i] = fx[order[i]];
    }
    x = xs;
    fx = fs;

    double diameter = 0.0;
    for (std::size_t i = 1; i < 4; ++i) {
      for (std::size_t c = 0; c < 3; ++c) diameter = std::max(diameter, std::abs(x[i][c] - x[0][c]));
    }
    if (diameter < 1e-10 && fx[3] - fx[0] < 1e-15) break;

    Point centroid{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t c = 0; c < 3; ++c) centroid[c] += x[i][c] / 3.0;
    }
    auto along = [&](double t) {
      Point r;
      for (std::size_t c = 0; c < 3; ++c) r[c] = centroid[c] + t * (x[3][c] - centroid[c]);
      return r;
    };
    const Point xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fx[0]) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        x[3] = xe;
        fx[3] = fe;
      } else {
        x[3] = xr;
        fx[3] = fr;
      }
    } else if (fr < fx[2]) {
      x[3] = xr;
      fx[3] = fr;
    } else {
      const Point xc = fr < fx[3] ? along(-0.5) : along(0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fx[3])) {
        x[3] = xc;
        fx[3] = fc;
      } else {
        for (std::size_t i = 1; i < 4; ++i) {
          for (std::size_t c = 0; c < 3; ++c) x[i][c] = x[0][c] + 0.5 * (x[i][c] - x[0][c]);
          fx[i] = f(x[i]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best], it};
}

double stationarity(const Family& f, const Point& x) {
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    Point a = x;
    Point b = x;
    a[c] += h;
    b[c] -= h;
    worst = std::max(worst, std::abs((f(a) - f(b)) / (2.0 * h)));
  }
  return worst;
}

}  // namespace

double sobolev_dual_functional(int n, double p, const std::function<double(double)>& profile, const RadialGrid& grid) {
  const Exponents ex = exponents(n, p);
  const LogGrid g = build_grid(grid);
  const double lf = log_functional(n, ex, g, [&](double s) {
    const double v = profile(std::exp(s));
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("sobolev_dual_functional: profile must be finite and >= 0");
    return std::log(v);
  });
  if (!std::isfinite(lf)) throw Error("sobolev_dual_functional: profile is not integrable on the grid");
  return prefactor(n, p) * std::exp(lf);
}

SobolevConstantResult sobolev_constant_search(int n, double p, const SobolevConstantOptions& options) {
  const Exponents ex = exponents(n, p);
  const LogGrid grid = build_grid(options.grid);
  const Family f{n, p, ex, &grid};

  // Start away from the known extremal shape so the search does real work.
  Point x{std::log(1.3 * ex.q), std::log(0.8 * (n - p) / p), 0.2};
  SobolevConstantResult result;
  double step = 0.2;
  int used = 0;
  for (int restart = 0; used < options.max_iterations; ++restart) {
    const NelderMeadResult nm = nelder_mead(f, x, step, options.max_iterations - used);
    used += nm.iterations + 1;
    x = nm.best;
    const double stat = stationarity(f, x);
    std::ostringstream os;
    os << "restart " << restart << ": iterations " << nm.iterations << ", beta " << std::exp(x[0]) << ", gamma "
       << std::exp(x[1]) << ", eps " << x[2] << ", value " << prefactor(n, p) * std::exp(-nm.value)
       << ", stationarity " << stat;
    result.trace.push_back(os.str());
    result.value = prefactor(n, p) * std::exp(-nm.value);
    result.beta = std::exp(x[0]);
    result.gamma = std::exp(x[1]);
    result.epsilon = x[2];
    result.stationarity = stat;
    result.iterations = used;
    if (stat <= options.stationarity_tol) return result;
    step = std::max(1e-4, step * 0.1);
  }
  std::ostringstream os;
  os << "sobolev_constant: no stationary maximizer within " << options.max_iterations << " iterations";
  for (const std::string& line : result.trace) os << "\n  " << line;
  throw Error(os.str());
}

double sobolev_constant(int n, double p, const SobolevConstantOptions& options) {
  return sobolev_constant_search(n, p, options).value;
}

}  // namespace smot
