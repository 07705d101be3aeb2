#include "smot/geometry/laplacian.hpp"

#include <vector>

namespace smot {

SmoothPotential SmoothPotential::linear(const Vec& a) {
  SmoothPotential p;
  p.value = [a](const Vec& x) { return a.dot(x); };
  p.gradient = [a](const Vec&) { return a; };
  p.hessian = [a](const Vec&) { return Mat::Zero(a.size(), a.size()).eval(); };
  return p;
}

SmoothPotential SmoothPotential::half_norm_squared(int ambient_dim) {
  SmoothPotential p;
  p.value = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  p.gradient = [](const Vec& x) { return x; };
  p.hessian = [ambient_dim](const Vec&) { return Mat::Identity(ambient_dim, ambient_dim).eval(); };
  return p;
}

SmoothPotential SmoothPotential::quadratic(const Mat& a, const Vec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw Error("SmoothPotential::quadratic: shape mismatch");
  const Mat sym = 0.5 * (a + a.transpose());
  SmoothPotential p;
  p.value = [sym, b](const Vec& x) { return 0.5 * x.dot(sym * x) + b.dot(x); };
  p.gradient = [sym, b](const Vec& x) { return (sym * x + b).eval(); };
  p.hessian = [sym](const Vec&) { return sym; };
  return p;
}

LaplacianCheck laplacian_identity_check(const SampledImmersion& m, const SmoothPotential& f, std::size_t index) {
  if (!m.chart) throw Error("laplacian_identity_check: immersion has no chart attached");
  if (index >= m.size()) throw Error("laplacian_identity_check: point id out of range");
  if (!f.value || !f.gradient || !f.hessian) throw Error("laplacian_identity_check: potential is incomplete");
  const ParametricChart& chart = *m.chart;
  const int n = m.intrinsic_dim;
  const auto j = static_cast<Eigen::Index>(index);
  const Vec x = m.points.col(j);
  if (f.smooth_at && !f.smooth_at(x)) throw Error("laplacian_identity_check: potential is not C^2 at the sample");

  std::vector<double> s0(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) s0[static_cast<std::size_t>(a)] = m.params(a, j);
  const ChartDerivatives der = chart_derivatives(chart, s0);

  auto fval = [&](int a, double da, int b, double db) {
    std::vector<double> s = s0;
    s[static_cast<std::size_t>(a)] += da;
    s[static_cast<std::size_t>(b)] += db;
    const double v = f.value(evaluate_chart(chart, s));
    if (!std::isfinite(v)) throw Error("laplacian_identity_check: potential is not finite near the sample");
    return v;
  };

  const double f0 = f.value(der.position);
  Vec df(n);
  Mat ddf(n, n);
  for (int a = 0; a < n; ++a) {
    const double h = chart.fd_step(a);
    const double fp = fval(a, h, a, 0.0);
    const double fm = fval(a, -h, a, 0.0);
    df(a) = (fp - fm) / (2.0 * h);
    ddf(a, a) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double ha = chart.fd_step(a);
      const double hb = chart.fd_step(b);
      ddf(a, b) = (fval(a, ha, b, hb) - fval(a, ha, b, -hb) - fval(a, -ha, b, hb) + fval(a, -ha, b, -hb)) /
                  (4.0 * ha * hb);
      ddf(b, a) = ddf(a, b);
    }
  }

  // Laplace-Beltrami in coordinates: g^{ab} (d_ab f - Gamma^c_ab d_c f) with
  // Gamma^c_ab = g^{cd} <d_ab X, d_d X>.
  const Mat g = der.partials.transpose() * der.partials;
  const Mat ginv = g.inverse();
  double lap = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vec lower = der.partials.transpose() * der.second[static_cast<std::size_t>(a)].col(b);
      const double christoffel_term = (ginv * lower).dot(df);
      lap += ginv(a, b) * (ddf(a, b) - christoffel_term);
    }
  }

  const Mat& frame = m.tangent_frames[index];
  const Mat hess = f.hessian(x);
  const Vec grad = f.gradient(x);
  LaplacianCheck out;
  out.intrinsic_laplacian = lap;
  out.hessian_trace = (frame.transpose() * hess * frame).trace();
  out.curvature_term = n * grad.dot(m.mean_curvature.col(j));
  out.residual = std::abs(lap - out.hessian_trace - out.curvature_term);
  return out;
}

}  // namespace smot
