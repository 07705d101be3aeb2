#include "smot/transport/solver.hpp"

#include <algorithm>
#include <limits>

#include "smot/transport/network_simplex.hpp"

namespace smot {
namespace {

bool is_uniform(const DiscreteMeasure& m) {
  const double first = m.mass(0);
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (m.mass(i) != first) return false;
  }
  return true;
}

void fill_report(ExactSolution& s, const Mat* costs, const DiscreteMeasure& mu, const DiscreteMeasure& nu, bool certify) {
  SolverReport& r = s.report;
  r.cost = plan_cost(s.plan);
  r.support_size = s.plan.support().size();
  const double dual = mu.masses().dot(s.duals.phi) + nu.masses().dot(s.duals.psi);
  r.dual_gap = r.cost - dual;
  auto c = [&](std::size_t i, std::size_t j) {
    if (costs) return (*costs)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return (mu.atom(i) - nu.atom(j)).squaredNorm();
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      worst = std::max(worst, s.duals.phi(static_cast<Eigen::Index>(i)) + s.duals.psi(static_cast<Eigen::Index>(j)) - c(i, j));
    }
  }
  r.max_dual_violation = worst;
  double slack = 0.0;
  for (const PlanEntry& e : s.plan.support()) {
    slack = std::max(slack, std::abs(c(e.src, e.dst) - s.duals.phi(static_cast<Eigen::Index>(e.src)) -
                                     s.duals.psi(static_cast<Eigen::Index>(e.dst))));
  }
  r.max_support_slack = slack;
  if (certify) {
    MonotonicityOptions opt;
    opt.mode = r.support_size <= 2000 ? MonotonicityMode::Exact : MonotonicityMode::Sampled;
    r.monotone_certificate = is_cyclically_monotone(s.plan, opt).monotone;
  }
}

}  // namespace

ExactSolution solve_exact(const MeasurePtr& mu, const MeasurePtr& nu, const SolveOptions& options) {
  if (!mu || !nu || mu->size() == 0 || nu->size() == 0) throw Error("solve_exact: empty measure");
  if (mu->dim() != nu->dim()) throw Error("solve_exact: measures live in different dimensions");
  if (mu->size() > kMaxSolverAtoms || nu->size() > kMaxSolverAtoms) {
    throw Error("solve_exact: instance exceeds " + std::to_string(kMaxSolverAtoms) + " atoms per side");
  }
  const double a = mu->total_mass();
  const double b = nu->total_mass();
  if (std::abs(a - b) > 1e-12 * std::max(1.0, std::max(a, b))) {
    throw Error("solve_exact: total masses differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }

  const std::size_t m = mu->size();
  const std::size_t n = nu->size();
  const bool dense = m * n <= 4000000;
  Mat costs;
  double max_cost = 0.0;
  if (dense) {
    costs.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const Vec y = nu->atom(j);
      costs.col(static_cast<Eigen::Index>(j)) = (mu->atoms().colwise() - y).colwise().squaredNorm().transpose();
    }
    max_cost = costs.maxCoeff();
  } else {
    // Diameter bound from the bounding boxes.
    const Vec lo = mu->atoms().rowwise().minCoeff().cwiseMin(nu->atoms().rowwise().minCoeff());
    const Vec hi = mu->atoms().rowwise().maxCoeff().cwiseMax(nu->atoms().rowwise().maxCoeff());
    max_cost = (hi - lo).squaredNorm();
  }

  ExactSolution s;
  if (options.allow_assignment && m == n && dense && is_uniform(*mu) && is_uniform(*nu) && mu->mass(0) == nu->mass(0)) {
    const AssignmentSolution as = hungarian(costs);
    std::vector<PlanEntry> support;
    support.reserve(m);
    for (std::size_t i = 0; i < m; ++i) support.push_back({i, as.column_of_row[i], mu->mass(i)});
    s.plan = TransferencePlan(mu, nu, std::move(support));
    s.duals = {as.u, as.v};
    s.report.iterations = as.iterations;
    s.report.method = "assignment";
  } else {
    TransportProblem p;
    p.supply = mu->masses();
    p.demand = nu->masses();
    p.max_cost = max_cost;
    if (dense) {
      p.cost = [&costs](std::size_t i, std::size_t j) {
        return costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      };
    } else {
      p.cost = [&mu, &nu](std::size_t i, std::size_t j) {
        return (mu->atoms().col(static_cast<Eigen::Index>(i)) - nu->atoms().col(static_cast<Eigen::Index>(j))).squaredNorm();
      };
    }
    const TransportSolution ts = network_simplex(p);
    std::vector<PlanEntry> support;
    support.reserve(ts.flows.size());
    for (const auto& f : ts.flows) support.push_back({f.i, f.j, f.amount});
    s.plan = TransferencePlan(mu, nu, std::move(support));
    s.duals = {ts.u, ts.v};
    s.report.iterations = ts.iterations;
    s.report.method = "network-simplex";
  }
  fill_report(s, dense ? &costs : nullptr, *mu, *nu, options.certify);
  return s;
}

TransferencePlan projection_plan(const MeasurePtr& mu, const Subspace& e) {
  if (mu->dim() != e.ambient_dim()) throw Error("projection_plan: dimension mismatch");
  return map_plan(mu, [&e](const Vec& x) { return e.project(x); });
}

ComposedSolution composed_solution(const MeasurePtr& mu, const Subspace& e, const MeasurePtr& nu,
                                   const SolveOptions& options) {
  if (nu->dim() != e.ambient_dim()) throw Error("composed_solution: target dimension mismatch");
  for (std::size_t j = 0; j < nu->size(); ++j) {
    const Vec y = nu->atom(j);
    if (e.distance_to(y) > 1e-9 * (1.0 + y.norm())) {
      throw Error("composed_solution: target atom " + std::to_string(j) + " is not in the subspace");
    }
  }
  TransferencePlan projection = projection_plan(mu, e);
  ExactSolution inner = solve_exact(projection.target_ptr(), nu, options);
  TransferencePlan plan = compose(glue(projection, inner.plan));
  ComposedSolution out{std::move(plan), std::move(projection), std::move(inner)};
  out.projection_cost = plan_cost(out.projection);
  out.inner_cost = out.inner.report.cost;
  out.total_cost = plan_cost(out.plan);
  return out;
}

double wasserstein2_squared(const MeasurePtr& mu, const MeasurePtr& nu) {
  SolveOptions o;
  o.certify = false;
  return solve_exact(mu, nu, o).report.cost;
}

}  // namespace smot
