#include "smot/transport/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "smot/geometry/catalog.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/transport/solver.hpp"

namespace smot {
namespace {

std::uint64_t instance_seed(std::uint64_t seed, int i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Vec random_masses(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Vec m(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = u(rng);
  return m / m.sum();
}

Mat gaussian(int rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) a(i, j) = g(rng);
  }
  return a;
}

void check_options(const TransportBatchOptions& o, int lowest_dim) {
  if (o.instances < 1) throw Error("transport batch: need at least one instance");
  if (o.max_atoms < 2 || o.max_atoms > kMaxSolverAtoms) throw Error("transport batch: max_atoms out of range");
  if (o.min_dim < lowest_dim || o.max_dim < o.min_dim) throw Error("transport batch: bad dimension range");
}

// Atoms on a random smooth curve or on a sampled catalog surface in R^d.
Mat manifold_atoms(int d, std::size_t count, std::mt19937_64& rng, std::string& label) {
  Mat atoms(d, static_cast<Eigen::Index>(count));
  if (d == 3 && rng() % 2 == 0) {
    static const char* ids[] = {"sphere-cap", "graph", "catenoid", "torus-patch"};
    const std::string id = ids[rng() % 4];
    const SampledImmersion m = make_surface(id, {}, 16);
    std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) atoms.col(j) = m.point(pick(rng));
    label = id;
    return atoms;
  }
  // Curve t -> sum_k a_k cos(k t) + b_k sin(k t) with random coefficients.
  const Mat a = gaussian(d, 3, rng);
  const Mat b = gaussian(d, 3, rng);
  std::uniform_real_distribution<double> t(0.0, 2.0 * std::numbers::pi);
  for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
    const double s = t(rng);
    Vec x = Vec::Zero(d);
    for (int k = 0; k < 3; ++k) x += a.col(k) * std::cos((k + 1) * s) + b.col(k) * std::sin((k + 1) * s);
    atoms.col(j) = x;
  }
  label = "curve";
  return atoms;
}

}  // namespace

TransportBatchResult projection_optimality_batch(const TransportBatchOptions& options, double tolerance) {
  check_options(options, 2);
  TransportBatchResult out;
  out.name = "projection_optimality";
  out.instances = options.instances;
  MonotonicityOptions exact;
  exact.mode = MonotonicityMode::Exact;
  for (int i = 0; i < options.instances; ++i) {
    std::mt19937_64 rng(instance_seed(options.seed, i));
    const int d = uniform_int(rng, options.min_dim, options.max_dim);
    const int n = uniform_int(rng, 1, d - 1);
    const auto count = static_cast<std::size_t>(uniform_int(rng, 2, static_cast<int>(options.max_atoms)));
    const MeasurePtr mu = share(DiscreteMeasure(gaussian(d, static_cast<Eigen::Index>(count), rng),
                                                random_masses(count, rng)));
    const Subspace e(haar_plane_sample(d, n, rng));
    const TransferencePlan rho = projection_plan(mu, e);
    const ExactSolution lp = solve_exact(mu, rho.target_ptr());
    const double gap = std::abs(plan_cost(rho) - lp.report.cost) / std::max(lp.report.cost, 1e-300);
    out.worst_cost_gap = std::max(out.worst_cost_gap, gap);
    const bool monotone = is_cyclically_monotone(rho, exact).monotone;
    if (!monotone) ++out.certificate_failures;
    if (gap > tolerance || !monotone) {
      std::ostringstream os;
      os << "instance " << i << " (d=" << d << ", n=" << n << ", atoms=" << count << "): relative gap " << gap
         << (monotone ? "" : ", projection plan not cyclically monotone");
      out.failures.push_back(os.str());
    }
  }
  return out;
}

TransportBatchResult composition_batch(const TransportBatchOptions& options, double tolerance) {
  check_options(options, 2);
  TransportBatchResult out;
  out.name = "composition_optimality";
  out.instances = options.instances;
  for (int i = 0; i < options.instances; ++i) {
    std::mt19937_64 rng(instance_seed(options.seed, i));
    const int d = uniform_int(rng, options.min_dim, options.max_dim);
    const int n = uniform_int(rng, 1, d - 1);
    const int hi = static_cast<int>(options.max_atoms);
    const auto m_count = static_cast<std::size_t>(uniform_int(rng, 2, hi));
    const auto k_count = static_cast<std::size_t>(uniform_int(rng, 2, hi));
    std::string label;
    const Mat x = manifold_atoms(d, m_count, rng, label);
    const Subspace e(haar_plane_sample(d, n, rng));
    const Mat y = e.basis() * gaussian(n, static_cast<Eigen::Index>(k_count), rng);
    const MeasurePtr mu = share(DiscreteMeasure(x, random_masses(m_count, rng)));
    const MeasurePtr nu = share(DiscreteMeasure(y, random_masses(k_count, rng)));

    const ComposedSolution composed = composed_solution(mu, e, nu);
    const ExactSolution direct = solve_exact(mu, nu);
    const double gap = std::abs(composed.total_cost - direct.report.cost) / std::max(direct.report.cost, 1e-300);
    const double pyth = std::abs(composed.total_cost - (composed.projection_cost + composed.inner_cost)) /
                        std::max(composed.total_cost, 1e-300);
    out.worst_cost_gap = std::max(out.worst_cost_gap, gap);
    out.worst_pythagoras_gap = std::max(out.worst_pythagoras_gap, pyth);
    const bool certified = composed.inner.report.monotone_certificate && direct.report.monotone_certificate;
    if (!certified) ++out.certificate_failures;
    if (gap > tolerance || !certified) {
      std::ostringstream os;
      os << "instance " << i << " (" << label << ", d=" << d << ", n=" << n << ", atoms=" << m_count << "/"
         << k_count << "): relative gap " << gap << (certified ? "" : ", solver certificate failed");
      out.failures.push_back(os.str());
    }
  }
  return out;
}

}  // namespace smot
