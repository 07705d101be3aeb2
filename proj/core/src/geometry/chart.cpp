#include "smot/geometry/chart.hpp"

#include <sstream>

namespace smot {

double ParametricChart::cell_size(int axis) const {
  const AxisSpec& a = axes.at(static_cast<std::size_t>(axis));
  return (a.hi - a.lo) / a.resolution;
}

double ParametricChart::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= cell_size(a);
  return v;
}

std::size_t ParametricChart::node_count() const {
  std::size_t count = 1;
  for (const AxisSpec& a : axes) count *= static_cast<std::size_t>(a.resolution);
  return count;
}

std::vector<double> ParametricChart::node_params(std::span<const int> index) const {
  std::vector<double> s(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) {
    s[a] = axes[a].lo + (index[a] + 0.5) * cell_size(static_cast<int>(a));
  }
  return s;
}

void ParametricChart::validate() const {
  if (axes.empty()) throw Error("ParametricChart: no parameter axes");
  if (!map) throw Error("ParametricChart: map is not set");
  if (ambient_dim < dim()) throw Error("ParametricChart: ambient dimension below chart dimension");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const AxisSpec& ax = axes[a];
    if (!(ax.hi > ax.lo)) throw Error("ParametricChart: empty domain on axis " + std::to_string(a));
    if (ax.resolution < 3) {
      throw Error("ParametricChart: resolution must be >= 3 on axis " + std::to_string(a));
    }
    if ((ax.lo_face == FaceKind::Periodic) != (ax.hi_face == FaceKind::Periodic)) {
      throw Error("ParametricChart: periodic faces must come in pairs on axis " + std::to_string(a));
    }
  }
}

Vec evaluate_chart(const ParametricChart& chart, std::span<const double> params) {
  Vec x = chart.map(params);
  if (x.size() != chart.ambient_dim) {
    throw Error("chart map returned a vector of size " + std::to_string(x.size()) + ", expected " +
                std::to_string(chart.ambient_dim));
  }
  if (!x.allFinite()) {
    std::ostringstream os;
    os << "chart map is not finite at parameters (";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << params[i];
    os << ")";
    throw Error(os.str());
  }
  return x;
}

ChartDerivatives chart_derivatives(const ParametricChart& chart, std::span<const double> params) {
  std::vector<double> steps(static_cast<std::size_t>(chart.dim()));
  for (int a = 0; a < chart.dim(); ++a) steps[static_cast<std::size_t>(a)] = chart.fd_step(a);
  return chart_derivatives(chart, params, steps);
}

ChartDerivatives chart_derivatives(const ParametricChart& chart, std::span<const double> params,
                                   std::span<const double> steps) {
  const int n = chart.dim();
  const int d = chart.ambient_dim;
  ChartDerivatives out;
  out.position = evaluate_chart(chart, params);
  out.partials.resize(d, n);
  out.second.assign(static_cast<std::size_t>(n), Mat(d, n));

  std::vector<double> s(params.begin(), params.end());
  auto at = [&](int a, double da, int b, double db) {
    s.assign(params.begin(), params.end());
    s[static_cast<std::size_t>(a)] += da;
    s[static_cast<std::size_t>(b)] += db;
    return evaluate_chart(chart, s);
  };

  for (int a = 0; a < n; ++a) {
    const double h = steps[static_cast<std::size_t>(a)];
    const Vec plus = at(a, h, a, 0.0);
    const Vec minus = at(a, -h, a, 0.0);
    out.partials.col(a) = (plus - minus) / (2.0 * h);
    out.second[static_cast<std::size_t>(a)].col(a) = (plus - 2.0 * out.position + minus) / (h * h);
  }
  for (int a = 0; a < n; ++a) {
    const double ha = steps[static_cast<std::size_t>(a)];
    for (int b = a + 1; b < n; ++b) {
      const double hb = steps[static_cast<std::size_t>(b)];
      const Vec mixed = (at(a, ha, b, hb) - at(a, ha, b, -hb) - at(a, -ha, b, hb) + at(a, -ha, b, -hb)) /
                        (4.0 * ha * hb);
      out.second[static_cast<std::size_t>(a)].col(b) = mixed;
      out.second[static_cast<std::size_t>(b)].col(a) = mixed;
    }
  }
  return out;
}

void for_each_index(std::span<const int> extents, const std::function<void(std::span<const int>)>& fn) {
  const std::size_t n = extents.size();
  for (int e : extents) {
    if (e <= 0) return;
  }
  std::vector<int> idx(n, 0);
  while (true) {
    fn(idx);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < extents[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace smot
