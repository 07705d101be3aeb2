#include "smot/inequalities/evaluators.hpp"

#include <cmath>
#include <sstream>

#include "smot/geometry/projection.hpp"

namespace smot {
namespace {

void require_dim(const SampledImmersion& m, const char* who) {
  if (m.intrinsic_dim < 2) throw Error(std::string(who) + ": needs intrinsic dimension n >= 2");
}

void require_boundary(const SampledImmersion& m, const char* who) {
  if (!m.has_boundary()) throw Error(std::string(who) + ": the sampled domain has no boundary data");
}

double curvature_integral(const SampledImmersion& m, const Vec& weight_u) {
  const Vec h = m.mean_curvature.colwise().norm().transpose();
  return (h.array() * weight_u.array() * m.weights.array()).sum();
}

}  // namespace

InequalityReport weighted_isoperimetric(const SampledImmersion& m, const Subspace& e) {
  require_dim(m, "weighted_isoperimetric");
  require_boundary(m, "weighted_isoperimetric");
  const int n = m.intrinsic_dim;
  const Vec jac = projection_jacobians(m, e);
  const double mass = (jac.array().pow(1.0 / (n - 1)) * m.weights.array()).sum();
  const double lhs = isoperimetric_constant(n) * std::pow(mass, (n - 1.0) / n);
  const double rhs = m.boundary_volume() + n * curvature_integral(m, Vec::Ones(jac.size()));
  return make_report("weighted_isoperimetric", lhs, rhs, m, {{"omega_n", unit_ball_volume(n)}});
}

InequalityReport weighted_sobolev_l1(const SampledImmersion& m, const Subspace& e, const TestFunction& u) {
  require_dim(m, "weighted_sobolev_l1");
  require_compact_support(m, u);
  const int n = m.intrinsic_dim;
  const Vec jac = projection_jacobians(m, e);
  const Vec au = u.values.cwiseAbs();
  const double mass = (jac.array().pow(1.0 / (n - 1)) * au.array().pow(n / (n - 1.0)) * m.weights.array()).sum();
  const double lhs = isoperimetric_constant(n) * std::pow(mass, (n - 1.0) / n);
  const double rhs = (u.grad_norm().array() * m.weights.array()).sum() + n * curvature_integral(m, au);
  return make_report("weighted_sobolev_l1", lhs, rhs, m, {{"omega_n", unit_ball_volume(n)}}, {"u:" + u.family});
}

InequalityReport classical_isoperimetric(const SampledImmersion& m, double alpha) {
  require_dim(m, "classical_isoperimetric");
  require_boundary(m, "classical_isoperimetric");
  const int n = m.intrinsic_dim;
  const double lhs = isoperimetric_constant(n) * alpha * std::pow(m.volume(), (n - 1.0) / n);
  const double rhs = m.boundary_volume() + n * curvature_integral(m, Vec::Ones(static_cast<Eigen::Index>(m.size())));
  return make_report("classical_isoperimetric", lhs, rhs, m, {{"omega_n", unit_ball_volume(n)}, {"alpha", alpha}});
}

InequalityReport classical_sobolev_l1(const SampledImmersion& m, double alpha, const TestFunction& u) {
  require_dim(m, "classical_sobolev_l1");
  require_compact_support(m, u);
  const int n = m.intrinsic_dim;
  const Vec au = u.values.cwiseAbs();
  const double mass = (au.array().pow(n / (n - 1.0)) * m.weights.array()).sum();
  const double lhs = isoperimetric_constant(n) * alpha * std::pow(mass, (n - 1.0) / n);
  const double rhs = (u.grad_norm().array() * m.weights.array()).sum() + n * curvature_integral(m, au);
  return make_report("classical_sobolev_l1", lhs, rhs, m, {{"omega_n", unit_ball_volume(n)}, {"alpha", alpha}},
                     {"u:" + u.family});
}

namespace detail {

void check_exponent(int n, double p) {
  if (n < 2) throw Error("lp_sobolev: needs intrinsic dimension n >= 2");
  if (!(p > 1.0 && p < n)) {
    std::ostringstream os;
    os << "lp_sobolev: exponent p = " << p << " outside (1, " << n << ")";
    throw Error(os.str());
  }
}

LpTerms lp_terms(const SampledImmersion& m, const Vec& left_weight, const Vec& right_weight, const Vec& jacobian,
                 const Vec& h_norm, const Vec& grad_norm, const TestFunction& u, double p, double s_np,
                 double jacobian_floor) {
  const int n = m.intrinsic_dim;
  std::ostringstream bad;
  int offending = 0;
  for (Eigen::Index j = 0; j < u.values.size(); ++j) {
    if (u.values(j) != 0.0 && jacobian(j) < jacobian_floor) {
      if (offending < 5) {
        bad << (offending ? "; " : "") << "#" << j << " (J_E = " << jacobian(j) << ", x = ["
            << m.points.col(j).transpose() << "])";
      }
      ++offending;
    }
  }
  if (offending > 0) {
    std::ostringstream os;
    os << "lp_sobolev: u is supported on " << offending << " near-critical sample(s) with J_E < "
       << jacobian_floor << ": " << bad.str();
    throw Error(os.str());
  }

  const double pstar = n * p / (n - p);
  const Vec au = u.values.cwiseAbs();
  const auto w = m.weights.array();
  LpTerms t;
  t.lhs = s_np * std::pow((left_weight.array() * au.array().pow(pstar) * w).sum(), 1.0 / pstar);
  t.gradient_term = std::pow((right_weight.array() * grad_norm.array().pow(p) * w).sum(), 1.0 / p);
  const double c = n * (n - p) / (p * (n - 1.0));
  t.curvature_term =
      c * std::pow((right_weight.array() * h_norm.array().pow(p) * au.array().pow(p) * w).sum(), 1.0 / p);
  return t;
}

}  // namespace detail

InequalityReport lp_sobolev(const SampledImmersion& m, const Subspace& e, const TestFunction& u, double p,
                            double s_np, const LpOptions& options) {
  const int n = m.intrinsic_dim;
  detail::check_exponent(n, p);
  require_compact_support(m, u);
  const Vec jac = projection_jacobians(m, e);
  const Vec clipped = jac.cwiseMax(options.jacobian_floor);
  const Vec left = jac.array().pow(1.0 / (n - 1));
  const Vec right = clipped.array().pow(-(p - 1.0) / (n - 1));
  const Vec h = m.mean_curvature.colwise().norm().transpose();
  const detail::LpTerms t =
      detail::lp_terms(m, left, right, jac, h, u.grad_norm(), u, p, s_np, options.jacobian_floor);
  return make_report("lp_sobolev", t.lhs, t.gradient_term + t.curvature_term, m,
                     {{"omega_n", unit_ball_volume(n)}, {"S_np", s_np}, {"p", p},
                      {"jacobian_floor", options.jacobian_floor}},
                     {kLpHolderFormFlag, "u:" + u.family});
}

}  // namespace smot
