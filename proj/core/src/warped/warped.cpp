#include "smot/warped/warped.hpp"

#include <cmath>
#include <sstream>

namespace smot {
namespace {

Vec christoffel(double w, double wp, const Vec& u, const Vec& v) {
  const Eigen::Index m = u.size() - 1;
  Vec out(u.size());
  out(0) = -w * wp * u.tail(m).dot(v.tail(m));
  out.tail(m) = (wp / w) * (u(0) * v.tail(m) + v(0) * u.tail(m));
  return out;
}

void check_subspace(const WarpedImmersion& m, const Subspace& e, const char* who) {
  if (e.ambient_dim() != m.sampled.ambient_dim - 1 || e.dim() != m.intrinsic_dim()) {
    std::ostringstream os;
    os << who << ": E must be a " << m.intrinsic_dim() << "-plane in R^" << m.sampled.ambient_dim - 1
       << " (got a " << e.dim() << "-plane in R^" << e.ambient_dim() << ")";
    throw Error(os.str());
  }
}

double frame_jacobian(const WarpedImmersion& m, const Subspace& e, std::size_t j) {
  const Mat& f = m.sampled.tangent_frames[j];
  const double w = m.metric.value(m.tau(static_cast<Eigen::Index>(j)));
  const Mat q = w * (e.basis().transpose() * f.bottomRows(f.rows() - 1));
  return std::abs(q.determinant());
}

}  // namespace

double WarpedImmersion::norm(std::size_t j, const Vec& v) const {
  const double w = metric.value(tau(static_cast<Eigen::Index>(j)));
  return std::sqrt(v(0) * v(0) + w * w * v.tail(v.size() - 1).squaredNorm());
}

Mat warped_gram(const WarpedMetric& metric, const Vec& x) {
  const double w = metric.value(x(0));
  Vec diag = Vec::Constant(x.size(), w * w);
  diag(0) = 1.0;
  return diag.asDiagonal();
}

WarpedImmersion warped_geometry(const ParametricChart& chart, const WarpedMetric& metric, SurfaceInfo info) {
  chart.validate();
  const int n = chart.dim();
  const int d = chart.ambient_dim;
  if (d < n + 1) throw Error("warped_geometry: chart must map into R x R^m with m >= n");
  if (!metric.w || !metric.w_prime) throw Error("warped_geometry: metric is not set");
  const std::size_t count = chart.node_count();

  WarpedImmersion out;
  out.metric = metric;
  SampledImmersion& m = out.sampled;
  m.ambient_dim = d;
  m.intrinsic_dim = n;
  m.points.resize(d, static_cast<Eigen::Index>(count));
  m.mean_curvature.resize(d, static_cast<Eigen::Index>(count));
  m.weights.resize(static_cast<Eigen::Index>(count));
  m.params.resize(n, static_cast<Eigen::Index>(count));
  m.surface = std::move(info);
  for (const AxisSpec& a : chart.axes) m.resolution.push_back(a.resolution);
  m.chart = std::make_shared<ParametricChart>(chart);
  out.tau.resize(static_cast<Eigen::Index>(count));
  out.h_norm.resize(static_cast<Eigen::Index>(count));

  const double cell = chart.cell_volume();
  std::vector<int> extents(m.resolution);
  Eigen::Index j = 0;
  for_each_index(extents, [&](std::span<const int> idx) {
    const std::vector<double> s = chart.node_params(idx);
    const ChartDerivatives der = chart_derivatives(chart, s);
    const double t = der.position(0);
    const double w = metric.value(t);
    const double wp = metric.derivative(t);
    if (!(w > 0.0) || !std::isfinite(w) || !std::isfinite(wp)) {
      throw Error("warped_geometry: w(" + std::to_string(t) + ") is not positive and finite");
    }
    Vec scale = Vec::Constant(d, w);
    scale(0) = 1.0;
    const Mat g = der.partials.transpose() * (scale.array().square().matrix().asDiagonal() * der.partials);
    const double det = g.determinant();
    if (!(det > 1e-12)) {
      std::ostringstream os;
      os << "warped_geometry: degenerate induced metric (Gram determinant " << det << ") at cell [";
      for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ", " : "") << idx[i];
      os << "]";
      throw Error(os.str());
    }
    // g_N-orthonormal frame: orthonormalize in the rescaled picture, map back.
    const Mat frame = scale.cwiseInverse().asDiagonal() * orthonormalize_columns(scale.asDiagonal() * der.partials);
    const Mat ginv = g.inverse();
    Vec trace = Vec::Zero(d);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const Vec cov = der.second[static_cast<std::size_t>(a)].col(b) +
                        christoffel(w, wp, der.partials.col(a), der.partials.col(b));
        trace += ginv(a, b) * cov;
      }
    }
    const Vec gtrace = scale.array().square().matrix().cwiseProduct(trace);
    const Vec normal_part = trace - frame * (frame.transpose() * gtrace);
    const Vec h = normal_part / n;

    m.points.col(j) = der.position;
    m.mean_curvature.col(j) = h;
    m.weights(j) = std::sqrt(det) * cell;
    for (int a = 0; a < n; ++a) m.params(a, j) = s[static_cast<std::size_t>(a)];
    m.tangent_frames.push_back(frame);
    m.partials.push_back(der.partials);
    m.metric.push_back(g);
    out.tau(j) = t;
    out.h_norm(j) = std::sqrt(h(0) * h(0) + w * w * h.tail(d - 1).squaredNorm());
    ++j;
  });

  const AmbientMetric gn = [metric](const Vec& x) { return warped_gram(metric, x); };
  m.boundary = sample_boundary(chart, &gn);
  return out;
}

ParametricChart lift_chart(const ParametricChart& chart, double t0, const Vec& slope) {
  if (slope.size() != chart.ambient_dim) throw Error("lift_chart: slope has wrong dimension");
  ParametricChart lifted = chart;
  lifted.ambient_dim = chart.ambient_dim + 1;
  ChartMap inner = chart.map;
  lifted.map = [inner, t0, slope](std::span<const double> s) -> Vec {
    const Vec x = inner(s);
    Vec out(x.size() + 1);
    out(0) = t0 + slope.dot(x);
    out.tail(x.size()) = x;
    return out;
  };
  return lifted;
}

double warped_projection_jacobian(const WarpedImmersion& m, const Subspace& e, std::size_t index) {
  check_subspace(m, e, "warped_projection_jacobian");
  if (index >= m.size()) throw Error("warped_projection_jacobian: point id out of range");
  return frame_jacobian(m, e, index);
}

Vec warped_projection_jacobians(const WarpedImmersion& m, const Subspace& e) {
  check_subspace(m, e, "warped_projection_jacobians");
  Vec out(static_cast<Eigen::Index>(m.size()));
  for (std::size_t j = 0; j < m.size(); ++j) out(static_cast<Eigen::Index>(j)) = frame_jacobian(m, e, j);
  return out;
}

double warped_full_jacobian(const WarpedImmersion& m, const Subspace& e, std::size_t index) {
  const double w = m.metric.value(m.tau(static_cast<Eigen::Index>(index)));
  return warped_projection_jacobian(m, e, index) / std::pow(w, m.intrinsic_dim());
}

Vec warped_grad_norm(const WarpedImmersion& m, const TestFunction& u) {
  if (u.gradient.cols() != static_cast<Eigen::Index>(m.size())) {
    throw Error("warped_grad_norm: test function does not match the immersion");
  }
  Vec out(u.gradient.cols());
  for (std::size_t j = 0; j < m.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) = m.norm(j, u.gradient.col(static_cast<Eigen::Index>(j)));
  }
  return out;
}

InequalityReport warped_weighted_isoperimetric(const WarpedImmersion& m, const Subspace& e) {
  const int n = m.intrinsic_dim();
  if (n < 2) throw Error("warped_weighted_isoperimetric: needs intrinsic dimension n >= 2");
  if (!m.sampled.has_boundary()) throw Error("warped_weighted_isoperimetric: the sampled domain has no boundary data");
  const Vec jac = warped_projection_jacobians(m, e);
  const Vec w = m.tau.unaryExpr([&](double t) { return m.metric.value(t); });
  const auto dv = m.sampled.weights.array();
  const double mass = ((w.array().pow(n) * jac.array()).pow(1.0 / (n - 1)) * dv).sum();
  const double lhs = isoperimetric_constant(n) * std::pow(mass, (n - 1.0) / n);
  double perimeter = 0.0;
  for (const BoundarySample& b : m.sampled.boundary) perimeter += m.metric.value(b.point(0)) * b.weight;
  const double rhs = perimeter + n * (w.array() * m.h_norm.array() * dv).sum();
  return make_report("warped_weighted_isoperimetric", lhs, rhs, m.sampled, {{"omega_n", unit_ball_volume(n)}},
                     {"metric:" + m.metric.preset});
}

InequalityReport warped_lp_sobolev(const WarpedImmersion& m, const Subspace& e, const TestFunction& u, double p,
                                   double s_np, const LpOptions& options) {
  const int n = m.intrinsic_dim();
  detail::check_exponent(n, p);
  require_compact_support(m.sampled, u);
  const Vec jac = warped_projection_jacobians(m, e);
  const Vec w = m.tau.unaryExpr([&](double t) { return m.metric.value(t); });
  const Vec left = (w.array().pow(n) * jac.array()).pow(1.0 / (n - 1));
  const Vec right = jac.cwiseMax(options.jacobian_floor).array().pow(-(p - 1.0) / (n - 1)) *
                    w.array().pow((n - p) / (n - 1.0));
  const detail::LpTerms t = detail::lp_terms(m.sampled, left, right, jac, m.h_norm, warped_grad_norm(m, u), u, p,
                                             s_np, options.jacobian_floor);
  return make_report("warped_lp_sobolev", t.lhs, t.gradient_term + t.curvature_term, m.sampled,
                     {{"omega_n", unit_ball_volume(n)}, {"S_np", s_np}, {"p", p},
                      {"jacobian_floor", options.jacobian_floor}},
                     {kLpHolderFormFlag, "u:" + u.family, "metric:" + m.metric.preset});
}

}  // namespace smot
