#include "smot/warped/metric.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "csv_util.hpp"

namespace smot {
namespace {

struct HermiteTable {
  std::vector<double> t, w, d;

  std::size_t segment(double x) const {
    if (!(x >= t.front() && x <= t.back())) {
      std::ostringstream os;
      os << "custom warp: t = " << x << " outside the table range [" << t.front() << ", " << t.back() << "]";
      throw Error(os.str());
    }
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const auto i = static_cast<std::size_t>(it - t.begin());
    return std::min(i, t.size() - 1) - 1;
  }

  double value(double x) const {
    const std::size_t i = segment(x);
    const double h = t[i + 1] - t[i];
    const double s = (x - t[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * w[i] + (s3 - 2 * s2 + s) * h * d[i] + (-2 * s3 + 3 * s2) * w[i + 1] +
           (s3 - s2) * h * d[i + 1];
  }

  double derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = t[i + 1] - t[i];
    const double s = (x - t[i]) / h;
    const double s2 = s * s;
    return (6 * s2 - 6 * s) * (w[i] - w[i + 1]) / h + (3 * s2 - 4 * s + 1) * d[i] + (3 * s2 - 2 * s) * d[i + 1];
  }
};

}  // namespace

WarpedMetric WarpedMetric::euclidean() {
  return {"euclidean", [](double) { return 1.0; }, [](double) { return 0.0; }};
}

WarpedMetric WarpedMetric::hyperbolic() {
  return {"hyperbolic", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }};
}

WarpedMetric WarpedMetric::from_functions(std::function<double(double)> w, std::function<double(double)> w_prime,
                                          std::string preset) {
  if (!w || !w_prime) throw Error("WarpedMetric: w and w' must both be set");
  return {std::move(preset), std::move(w), std::move(w_prime)};
}

WarpedMetric WarpedMetric::from_table(std::istream& csv) {
  auto table = std::make_shared<HermiteTable>();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(csv, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (lineno == 1 && !cells.empty() && cells[0] == "t") continue;
    if (cells.size() != 3) throw Error("line " + std::to_string(lineno) + ": expected t,w,w_prime");
    const double t = detail::parse_number(cells[0], lineno);
    const double w = detail::parse_number(cells[1], lineno);
    const double d = detail::parse_number(cells[2], lineno);
    if (!table->t.empty() && !(t > table->t.back())) {
      throw Error("line " + std::to_string(lineno) + ": t must be strictly increasing");
    }
    if (!(w > 0.0)) throw Error("line " + std::to_string(lineno) + ": w must be positive");
    table->t.push_back(t);
    table->w.push_back(w);
    table->d.push_back(d);
  }
  if (table->t.size() < 2) throw Error("custom warp: table needs at least two rows");
  return {"custom", [table](double t) { return table->value(t); }, [table](double t) { return table->derivative(t); }};
}

WarpedMetric WarpedMetric::from_preset(const std::string& name) {
  if (name == "euclidean") return euclidean();
  if (name == "hyperbolic") return hyperbolic();
  if (name == "custom") throw Error("WarpedMetric: the custom preset needs a (t, w, w') table");
  throw Error("WarpedMetric: unknown preset '" + name + "' (known: euclidean, hyperbolic, custom)");
}

double WarpedMetric::value(double t) const { return w(t); }
double WarpedMetric::derivative(double t) const { return w_prime(t); }

void WarpedMetric::validate(double t_lo, double t_hi, double tol, int samples) const {
  if (!w || !w_prime) throw Error("WarpedMetric: w and w' must both be set");
  if (!(t_hi >= t_lo) || samples < 2) throw Error("WarpedMetric::validate: bad range");
  const double h = 1e-5 * std::max(1.0, t_hi - t_lo);
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    const double wt = w(t);
    if (!(wt > 0.0) || !std::isfinite(wt)) {
      std::ostringstream os;
      os << "WarpedMetric: w(" << t << ") = " << wt << " is not positive";
      throw Error(os.str());
    }
    // One-sided at the ends so tables are never evaluated outside their range.
    const double a = (i == 0) ? t : t - h;
    const double b = (i == samples - 1) ? t : t + h;
    const double fd = (w(b) - w(a)) / (b - a);
    const double wp = w_prime(t);
    const double allowed = (i == 0 || i == samples - 1) ? std::max(tol, 1e-4) : tol;
    if (!(std::abs(wp - fd) <= allowed * std::max(1.0, std::abs(wp)))) {
      std::ostringstream os;
      os << "WarpedMetric: w'(" << t << ") = " << wp << " disagrees with the difference quotient " << fd;
      throw Error(os.str());
    }
  }
}

}  // namespace smot
