#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "../support/instances.hpp"
#include "smot/geometry/catalog.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/transport/ball.hpp"
#include "smot/transport/interpolation.hpp"
#include "smot/transport/network_simplex.hpp"
#include "smot/transport/solver.hpp"
#include "smot/transport/verification.hpp"

namespace smot {
namespace {

constexpr double kPi = std::numbers::pi;

void expect_certified(const ExactSolution& s) {
  EXPECT_LE(s.report.max_dual_violation, 1e-9);
  EXPECT_LE(s.report.max_support_slack, 1e-9);
  EXPECT_LE(std::abs(s.report.dual_gap), 1e-9 * std::max(1.0, s.report.cost));
  EXPECT_TRUE(s.report.monotone_certificate);
  EXPECT_LT(s.plan.marginal_error(), 1e-10);
}

TEST(SolveExact, SortedLineIsMonotoneRearrangement) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  Mat x(1, 9);
  Mat y(1, 9);
  for (int i = 0; i < 9; ++i) {
    x(0, i) = u(rng);
    y(0, i) = u(rng);
  }
  const ExactSolution s = solve_exact(share(DiscreteMeasure::uniform(x)), share(DiscreteMeasure::uniform(y)));
  std::vector<double> xs(x.data(), x.data() + 9);
  std::vector<double> ys(y.data(), y.data() + 9);
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double expected = 0.0;
  for (int i = 0; i < 9; ++i) expected += (xs[i] - ys[i]) * (xs[i] - ys[i]) / 9.0;
  EXPECT_NEAR(s.report.cost, expected, 1e-12);
  expect_certified(s);
}

TEST(SolveExact, GeneralMassesOnTheLine) {
  // 1D optimal cost equals the integral of |F^-1 - G^-1|^2 over quantiles.
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Mat x(1, 6);
    Mat y(1, 8);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 6; ++i) x(0, i) = u(rng);
    for (int i = 0; i < 8; ++i) y(0, i) = u(rng);
    const MeasurePtr mu = share(DiscreteMeasure(x, testing::random_masses(6, rng)));
    const MeasurePtr nu = share(DiscreteMeasure(y, testing::random_masses(8, rng)));
    std::vector<std::pair<double, double>> a;
    std::vector<std::pair<double, double>> b;
    for (int i = 0; i < 6; ++i) a.emplace_back(x(0, i), mu->mass(static_cast<std::size_t>(i)));
    for (int i = 0; i < 8; ++i) b.emplace_back(y(0, i), nu->mass(static_cast<std::size_t>(i)));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double expected = 0.0;
    std::size_t p = 0;
    std::size_t q = 0;
    double ra = a[0].second;
    double rb = b[0].second;
    while (p < a.size() && q < b.size()) {
      const double m = std::min(ra, rb);
      expected += m * (a[p].first - b[q].first) * (a[p].first - b[q].first);
      ra -= m;
      rb -= m;
      if (ra <= 1e-15 && ++p < a.size()) ra = a[p].second;
      if (rb <= 1e-15 && ++q < b.size()) rb = b[q].second;
    }
    const ExactSolution s = solve_exact(mu, nu);
    EXPECT_NEAR(s.report.cost, expected, 1e-12);
    EXPECT_EQ(s.report.method, "network-simplex");
    expect_certified(s);
  }
}

TEST(SolveExact, MatchesBruteForceOnSmallUniformInstances) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    const Mat x = testing::gaussian_atoms(3, n, rng);
    const Mat y = testing::gaussian_atoms(3, n, rng);
    const double brute = testing::brute_force_assignment(x, y);
    SolveOptions hung;
    SolveOptions simplex;
    simplex.allow_assignment = false;
    const MeasurePtr mu = share(DiscreteMeasure::uniform(x));
    const MeasurePtr nu = share(DiscreteMeasure::uniform(y));
    const ExactSolution a = solve_exact(mu, nu, hung);
    const ExactSolution b = solve_exact(mu, nu, simplex);
    EXPECT_NEAR(a.report.cost, brute, 1e-12);
    EXPECT_NEAR(b.report.cost, brute, 1e-12);
    expect_certified(a);
    expect_certified(b);
  }
}

TEST(SolveExact, IdenticalMeasuresCostNothing) {
  std::mt19937_64 rng(4);
  const MeasurePtr mu = testing::random_measure(3, 30, rng);
  const ExactSolution s = solve_exact(mu, mu);
  EXPECT_NEAR(s.report.cost, 0.0, 1e-14);
  expect_certified(s);
}

TEST(SolveExact, LargerGeneralInstancesAreCertified) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const MeasurePtr mu = testing::random_measure(4, 150, rng);
    const MeasurePtr nu = testing::random_measure(4, 120, rng);
    const ExactSolution s = solve_exact(mu, nu);
    expect_certified(s);
    EXPECT_LE(s.report.support_size, 150u + 120u - 1u);
  }
}

TEST(SolveExact, DegenerateGridInstance) {
  // Many ties: integer lattice to a shifted lattice with equal masses.
  Mat x(2, 16);
  Mat y(2, 16);
  for (int i = 0; i < 16; ++i) {
    x(0, i) = i % 4;
    x(1, i) = i / 4;
    y(0, i) = (i % 4) + 1;
    y(1, i) = i / 4;
  }
  SolveOptions o;
  o.allow_assignment = false;
  const ExactSolution s = solve_exact(share(DiscreteMeasure::uniform(x)), share(DiscreteMeasure::uniform(y)), o);
  EXPECT_NEAR(s.report.cost, 1.0, 1e-12);
  expect_certified(s);
}

TEST(SolveExact, RejectsMassMismatchAndSize) {
  const MeasurePtr a = share(DiscreteMeasure(Mat::Zero(2, 1), Vec::Ones(1)));
  const MeasurePtr b = share(DiscreteMeasure(Mat::Zero(2, 1), Vec::Constant(1, 2.0)));
  EXPECT_THROW(solve_exact(a, b), Error);
  const MeasurePtr big = share(DiscreteMeasure::uniform(Mat::Zero(1, 5001)));
  EXPECT_THROW(solve_exact(big, big), Error);
}

TEST(ProjectionPlan, Basics) {
  const Subspace xy = Subspace::coordinate(3, 2);
  Mat one(3, 1);
  one << 1, 1, 1;
  const TransferencePlan rho = projection_plan(share(DiscreteMeasure::uniform(one)), xy);
  EXPECT_DOUBLE_EQ(plan_cost(rho), 1.0);
  EXPECT_LT((rho.target().atom(0) - Vec((Vec(3) << 1, 1, 0).finished())).norm(), 1e-15);

  std::mt19937_64 rng(6);
  Mat flat = Mat::Zero(3, 10);
  flat.topRows(2) = testing::gaussian_atoms(2, 10, rng);
  EXPECT_EQ(plan_cost(projection_plan(share(DiscreteMeasure::uniform(flat)), xy)), 0.0);
}

TEST(ProjectionPlan, IsOptimal) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const MeasurePtr mu = testing::random_measure(3, 50, rng);
    const Subspace e = Subspace::from_spanning(haar_plane_sample(3, 2, rng));
    const TransferencePlan rho = projection_plan(mu, e);
    const ExactSolution s = solve_exact(mu, rho.target_ptr());
    EXPECT_NEAR(plan_cost(rho), s.report.cost, 1e-9 * s.report.cost);
  }
}

TEST(ComposedSolution, HelixToLine) {
  Mat helix(3, 3);
  for (int i = 0; i < 3; ++i) {
    const double t = 0.9 * i;
    helix.col(i) << std::cos(t), std::sin(t), 0.4 * t;
  }
  Mat line = Mat::Zero(3, 3);
  line.row(0) << -0.5, 0.2, 1.0;
  const MeasurePtr mu = share(DiscreteMeasure::uniform(helix));
  const MeasurePtr nu = share(DiscreteMeasure::uniform(line));
  Mat xaxis = Mat::Zero(3, 1);
  xaxis(0, 0) = 1;
  // nu lives on the x-axis, which sits inside the plane E spanned by x and y.
  const Subspace e = Subspace::coordinate(3, 2);
  const ComposedSolution c = composed_solution(mu, e, nu);
  const ExactSolution direct = solve_exact(mu, nu);
  EXPECT_NEAR(c.total_cost, direct.report.cost, 1e-9 * direct.report.cost);
  EXPECT_NEAR(c.total_cost, c.projection_cost + c.inner_cost, 1e-12 * c.total_cost);
}

TEST(ComposedSolution, ReducesToSolveExactInsideE) {
  std::mt19937_64 rng(8);
  Mat x = Mat::Zero(3, 20);
  Mat y = Mat::Zero(3, 15);
  x.topRows(2) = testing::gaussian_atoms(2, 20, rng);
  y.topRows(2) = testing::gaussian_atoms(2, 15, rng);
  const MeasurePtr mu = share(DiscreteMeasure(x, testing::random_masses(20, rng)));
  const MeasurePtr nu = share(DiscreteMeasure(y, testing::random_masses(15, rng)));
  const ComposedSolution c = composed_solution(mu, Subspace::coordinate(3, 2), nu);
  EXPECT_NEAR(c.total_cost, solve_exact(mu, nu).report.cost, 1e-12);
  EXPECT_EQ(c.projection_cost, 0.0);
}

TEST(ComposedSolution, RejectsTargetOutsideE) {
  std::mt19937_64 rng(9);
  const MeasurePtr mu = testing::random_measure(3, 5, rng);
  const MeasurePtr nu = testing::random_measure(3, 5, rng);
  EXPECT_THROW(composed_solution(mu, Subspace::coordinate(3, 2), nu), Error);
}

TEST(BallTarget, MomentsAndContainment) {
  const Subspace e = Subspace::from_spanning(haar_plane_sample(4, 2, 3));
  const BallTarget mc = ball_target(e, 20000, BallSampling::MonteCarlo, 17);
  for (Eigen::Index j = 0; j < mc.coordinates.cols(); ++j) EXPECT_LE(mc.coordinates.col(j).norm(), 1.0);
  // Per-axis second moment of the uniform n-ball is 1/(n+2); the sample
  // variance of y_1^2 bounds the Monte Carlo error.
  const Eigen::ArrayXd y1sq = mc.coordinates.row(0).array().square();
  const double mean = y1sq.mean();
  const double se = std::sqrt((y1sq - mean).square().mean() / static_cast<double>(y1sq.size()));
  EXPECT_NEAR(mean, 0.25, 4 * se);
  EXPECT_LT((mc.measure->atoms() - e.basis() * mc.coordinates).norm(), 1e-12);
}

TEST(BallTarget, GridCountTracksArea) {
  const Subspace e = Subspace::coordinate(2, 2);
  for (double h : {0.1, 0.05, 0.02}) {
    const BallTarget g = ball_target_grid(e, h);
    const double expected = kPi / (h * h);
    EXPECT_LT(std::abs(static_cast<double>(g.measure->size()) - expected), 8.0 / h);
  }
  EXPECT_THROW(ball_target(e, 5, BallSampling::Grid), Error);
  const BallTarget g = ball_target(e, 400, BallSampling::Grid);
  EXPECT_NEAR(static_cast<double>(g.measure->size()), 400.0, 60.0);
}

TEST(Interpolation, EndpointsAndMidpoint) {
  std::mt19937_64 rng(10);
  const MeasurePtr mu = testing::random_measure(2, 6, rng);
  const MeasurePtr nu = testing::random_measure(2, 6, rng);
  const ExactSolution s = solve_exact(mu, nu);
  EXPECT_LT(measure_deviation(displacement_interpolation(s.plan, 0.0), *mu), 1e-15);
  EXPECT_THROW(displacement_interpolation(s.plan, 1.5), Error);

  Mat a(2, 1);
  a << 1, 0;
  Mat b(2, 1);
  b << -1, 0;
  const TransferencePlan pm(share(DiscreteMeasure::uniform(a)), share(DiscreteMeasure::uniform(b)), {{0, 0, 1.0}});
  const DiscreteMeasure mid = displacement_interpolation(pm, 0.5);
  ASSERT_EQ(mid.size(), 1u);
  EXPECT_LT(mid.atom(0).norm(), 1e-15);
}

TEST(Interpolation, ConstantSpeedGeodesic) {
  std::mt19937_64 rng(11);
  const MeasurePtr mu = testing::random_measure(3, 12, rng);
  const MeasurePtr nu = testing::random_measure(3, 10, rng);
  const ExactSolution s = solve_exact(mu, nu);
  const double w = std::sqrt(s.report.cost);
  const MeasurePtr a = share(displacement_interpolation(s.plan, 0.25));
  const MeasurePtr b = share(displacement_interpolation(s.plan, 0.75));
  EXPECT_NEAR(std::sqrt(wasserstein2_squared(a, b)), 0.5 * w, 1e-6 * w);
}

TEST(MongeNote, GraphSphereAndSingleAtom) {
  const Subspace xy = Subspace::coordinate(3, 2);
  const SampledImmersion graph = make_surface("graph", {}, 10);
  EXPECT_TRUE(monge_problem_solvability_note(DiscreteMeasure::uniform(graph.points), xy).injective);
  const SampledImmersion sphere = make_surface("sphere-cap", {{"angle", kPi}}, 10);
  const MongeNote note = monge_problem_solvability_note(DiscreteMeasure::uniform(sphere.points), xy);
  EXPECT_FALSE(note.injective);
  // Upper and lower hemispheres pair up: 5 rings of 10 points each.
  EXPECT_EQ(note.collisions.size(), 50u);
  for (const auto& [i, j] : note.collisions) {
    EXPECT_NEAR(sphere.points(2, static_cast<Eigen::Index>(i)), -sphere.points(2, static_cast<Eigen::Index>(j)), 1e-12);
  }
  EXPECT_TRUE(monge_problem_solvability_note(DiscreteMeasure::uniform(Mat::Ones(3, 1)), xy).injective);
}

TEST(Hungarian, DualsCertifyAssignment) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 10);
  Mat c(7, 7);
  for (Eigen::Index i = 0; i < 7; ++i) {
    for (Eigen::Index j = 0; j < 7; ++j) c(i, j) = std::floor(u(rng));
  }
  const AssignmentSolution a = hungarian(c);
  for (Eigen::Index i = 0; i < 7; ++i) {
    for (Eigen::Index j = 0; j < 7; ++j) EXPECT_LE(a.u(i) + a.v(j), c(i, j) + 1e-12);
    EXPECT_NEAR(a.u(i) + a.v(static_cast<Eigen::Index>(a.column_of_row[static_cast<std::size_t>(i)])),
                c(i, static_cast<Eigen::Index>(a.column_of_row[static_cast<std::size_t>(i)])), 1e-12);
  }
}

TEST(Verification, ProjectionBatchIsOptimal) {
  TransportBatchOptions o;
  o.instances = 12;
  o.seed = 5;
  o.max_atoms = 40;
  const TransportBatchResult r = projection_optimality_batch(o, 1e-9);
  EXPECT_EQ(r.instances, 12);
  EXPECT_LE(r.worst_cost_gap, 1e-9);
  EXPECT_EQ(r.certificate_failures, 0);
  EXPECT_TRUE(r.failures.empty());
}

TEST(Verification, CompositionBatchMatchesDirect) {
  TransportBatchOptions o;
  o.instances = 12;
  o.seed = 9;
  o.max_atoms = 40;
  const TransportBatchResult r = composition_batch(o, 1e-9);
  EXPECT_LE(r.worst_cost_gap, 1e-9);
  EXPECT_LE(r.worst_pythagoras_gap, 1e-12);
  EXPECT_EQ(r.certificate_failures, 0);
}

TEST(Verification, BatchesAreReproducible) {
  TransportBatchOptions o;
  o.instances = 4;
  o.seed = 77;
  o.max_atoms = 30;
  const auto a = composition_batch(o, 1e-9);
  const auto b = composition_batch(o, 1e-9);
  EXPECT_EQ(a.worst_cost_gap, b.worst_cost_gap);
  EXPECT_EQ(a.worst_pythagoras_gap, b.worst_pythagoras_gap);
}

TEST(Verification, ZeroToleranceReportsInstances) {
  TransportBatchOptions o;
  o.instances = 6;
  o.max_atoms = 30;
  const auto r = projection_optimality_batch(o, -1.0);
  EXPECT_EQ(r.failures.size(), 6u);
  EXPECT_NE(r.failures[0].find("instance 0"), std::string::npos);
}

TEST(Verification, RejectsBadOptions) {
  TransportBatchOptions o;
  o.instances = 0;
  EXPECT_THROW(projection_optimality_batch(o, 1e-9), Error);
  o.instances = 1;
  o.max_atoms = 1;
  EXPECT_THROW(composition_batch(o, 1e-9), Error);
  o.max_atoms = 10;
  o.min_dim = 1;
  EXPECT_THROW(composition_batch(o, 1e-9), Error);
}

}  // namespace
}  // namespace smot
