#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "../support/instances.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/geometry/projection.hpp"
#include "smot/geometry/catalog.hpp"
#include "smot/measures/plan.hpp"

namespace smot {
namespace {

MeasurePtr line_measure(std::vector<double> xs) {
  Mat a(1, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) a(0, static_cast<Eigen::Index>(i)) = xs[i];
  return share(DiscreteMeasure::uniform(a));
}

TEST(DiscreteMeasure, ValidatesMassesAndAtoms) {
  EXPECT_THROW(DiscreteMeasure(Mat::Zero(2, 2), Vec::Constant(2, -1.0)), Error);
  Mat bad = Mat::Zero(2, 1);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(DiscreteMeasure(bad, Vec::Ones(1)), Error);
  const auto m = DiscreteMeasure::normalized(Mat::Zero(2, 3), Vec::Constant(3, 5.0));
  EXPECT_TRUE(m.is_probability());
}

TEST(PushForward, IdentityAndMerge) {
  std::mt19937_64 rng(1);
  const MeasurePtr mu = testing::random_measure(3, 10, rng);
  const PushForward id = push_forward(*mu, [](const Vec& x) { return x; });
  EXPECT_EQ(measure_deviation(id.measure, *mu), 0.0);

  Mat a(1, 3);
  a << -1.0, 1.0, 2.0;
  const DiscreteMeasure m(a, (Vec(3) << 0.2, 0.3, 0.5).finished());
  const PushForward sq = push_forward(m, [](const Vec& x) { return Vec(x.cwiseAbs2()); });
  ASSERT_EQ(sq.measure.size(), 2u);
  EXPECT_DOUBLE_EQ(sq.measure.mass(0), 0.5);
  EXPECT_DOUBLE_EQ(sq.measure.mass(1), 0.5);
  EXPECT_EQ(sq.atom_of, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(PushForward, ProjectedSphereAtomsFollowDensityFormula) {
  // Three sphere atoms, two of them mirror images across the xy-plane.
  const double z = 0.6;
  const double r = 0.8;
  Mat a(3, 3);
  a << r, r, 0.0,
       0.0, 0.0, 1.0,
       z, -z, 0.0;
  // Masses f(x)/J_E(x) with f = 1: J_E = |<nu, e_z>| = |z| for the first two.
  const Vec f = Vec::Ones(3);
  Vec w(3);
  w << f(0) / z, f(1) / z, f(2) / 1e-3;
  const DiscreteMeasure mu = DiscreteMeasure::normalized(a, w);
  const Subspace xy = Subspace::coordinate(3, 2);
  const PushForward p = push_forward(mu, [&](const Vec& x) { return xy.project(x); });
  ASSERT_EQ(p.measure.size(), 2u);
  EXPECT_NEAR(p.measure.mass(0), (f(0) / z + f(1) / z) / w.sum(), 1e-15);
  EXPECT_NEAR(p.measure.mass(1), (f(2) / 1e-3) / w.sum(), 1e-15);
}

TEST(PlanCost, Arithmetic) {
  Mat x = Mat::Zero(2, 1);
  Mat y(2, 1);
  y << 3, 4;
  const TransferencePlan rho(share(DiscreteMeasure::uniform(x)), share(DiscreteMeasure::uniform(y)), {{0, 0, 1.0}});
  EXPECT_DOUBLE_EQ(plan_cost(rho), 25.0);
  std::mt19937_64 rng(2);
  const MeasurePtr mu = testing::random_measure(3, 6, rng);
  EXPECT_EQ(plan_cost(identity_plan(mu)), 0.0);
}

TEST(TransferencePlan, RejectsBadMarginals) {
  const MeasurePtr mu = line_measure({0.0, 1.0});
  EXPECT_THROW(TransferencePlan(mu, mu, {{0, 0, 0.5}}), Error);
  EXPECT_THROW(TransferencePlan(mu, mu, {{0, 0, 0.5}, {1, 2, 0.5}}), Error);
  EXPECT_NO_THROW(TransferencePlan(mu, mu, {{0, 1, 0.5}, {1, 0, 0.5}}));
}

TEST(Monotonicity, SortedLineCouplingIsMonotone) {
  const MeasurePtr mu = line_measure({0.0, 0.5, 1.0, 3.0});
  const MeasurePtr nu = line_measure({-1.0, 2.0, 2.5, 4.0});
  const TransferencePlan sorted(mu, nu, {{0, 0, 0.25}, {1, 1, 0.25}, {2, 2, 0.25}, {3, 3, 0.25}});
  EXPECT_TRUE(is_cyclically_monotone(sorted).monotone);
  MonotonicityOptions exact;
  exact.mode = MonotonicityMode::Exact;
  EXPECT_TRUE(is_cyclically_monotone(sorted, exact).monotone);
}

TEST(Monotonicity, CrossingPairIsReported) {
  const MeasurePtr mu = line_measure({0.0, 1.0});
  const TransferencePlan crossed(mu, mu, {{0, 1, 0.5}, {1, 0, 0.5}});
  for (auto mode : {MonotonicityMode::Exhaustive, MonotonicityMode::Exact, MonotonicityMode::Sampled}) {
    MonotonicityOptions o;
    o.mode = mode;
    const MonotonicityResult r = is_cyclically_monotone(crossed, o);
    EXPECT_FALSE(r.monotone);
    EXPECT_EQ(r.cycle.size(), 2u);
    EXPECT_DOUBLE_EQ(r.original_cost, 2.0);
    EXPECT_DOUBLE_EQ(r.permuted_cost, 0.0);
  }
}

TEST(Monotonicity, ExhaustiveModeRefusesLargeSupports) {
  std::mt19937_64 rng(4);
  const MeasurePtr mu = share(DiscreteMeasure::uniform(testing::gaussian_atoms(2, 60, rng)));
  EXPECT_THROW(is_cyclically_monotone(identity_plan(mu)), Error);
  MonotonicityOptions o;
  o.mode = MonotonicityMode::Exact;
  EXPECT_TRUE(is_cyclically_monotone(identity_plan(mu), o).monotone);
}

TEST(Monotonicity, ProjectionPlanIsMonotone) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const MeasurePtr mu = testing::random_measure(4, 12, rng);
    const Subspace e = Subspace::from_spanning(haar_plane_sample(4, 2, rng));
    const TransferencePlan rho = map_plan(mu, [&](const Vec& x) { return e.project(x); });
    MonotonicityOptions o;
    o.max_cycle_len = 4;
    EXPECT_TRUE(is_cyclically_monotone(rho, o).monotone);
    o.mode = MonotonicityMode::Exact;
    EXPECT_TRUE(is_cyclically_monotone(rho, o).monotone);
  }
}

TEST(Monotonicity, AgreesWithPermutationOptimality) {
  // Small uniform instances: a permutation coupling is monotone exactly when
  // its cost is the brute-force minimum.
  std::mt19937_64 rng(6);
  int optimal = 0;
  int suboptimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
    const Mat x = testing::gaussian_atoms(2, n, rng);
    const Mat y = testing::gaussian_atoms(2, n, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const MeasurePtr mu = share(DiscreteMeasure::uniform(x));
    const MeasurePtr nu = share(DiscreteMeasure::uniform(y));
    std::vector<PlanEntry> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back({i, perm[i], 1.0 / static_cast<double>(n)});
    const TransferencePlan rho(mu, nu, s);
    const bool is_opt = plan_cost(rho) <= testing::brute_force_assignment(x, y) + 1e-12;
    MonotonicityOptions o;
    o.tol = 1e-12;
    EXPECT_EQ(is_cyclically_monotone(rho, o).monotone, is_opt);
    (is_opt ? optimal : suboptimal)++;
  }
  EXPECT_GT(optimal, 0);
  EXPECT_GT(suboptimal, 0);
}

TEST(Glue, DeterministicMapsCompose) {
  std::mt19937_64 rng(7);
  const MeasurePtr mu = testing::random_measure(2, 5, rng);
  auto f1 = [](const Vec& x) { return Vec(2.0 * x + Vec::Ones(2)); };
  auto f2 = [](const Vec& x) { return Vec((Vec(2) << x(1), -x(0)).finished()); };
  const TransferencePlan rho12 = map_plan(mu, f1);
  const TransferencePlan rho23 = map_plan(rho12.target_ptr(), f2);
  const TransferencePlan direct = map_plan(mu, [&](const Vec& x) { return f2(f1(x)); });
  const TransferencePlan composed = compose(glue(rho12, rho23));
  ASSERT_EQ(composed.support().size(), direct.support().size());
  for (std::size_t k = 0; k < direct.support().size(); ++k) {
    const PlanEntry& a = composed.support()[k];
    EXPECT_EQ(a.src, direct.support()[k].src);
    EXPECT_LT((composed.target().atom(a.dst) - f2(f1(mu->atom(a.src)))).norm(), 1e-14);
    EXPECT_NEAR(a.mass, direct.support()[k].mass, 1e-16);
  }
}

TEST(Glue, IdentityIsNeutral) {
  std::mt19937_64 rng(8);
  const MeasurePtr mu = testing::random_measure(2, 4, rng);
  const MeasurePtr nu = testing::random_measure(2, 5, rng);
  const TransferencePlan rho = random_feasible_plan(mu, nu, rng);
  const TransferencePlan c = compose(glue(rho, identity_plan(nu)));
  EXPECT_LT((c.dense() - rho.dense()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Glue, RandomMarginalsAreExact) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const MeasurePtr m1 = testing::random_measure(2, 4, rng);
    const MeasurePtr m2 = testing::random_measure(2, 4, rng);
    const MeasurePtr m3 = testing::random_measure(2, 4, rng);
    const TransferencePlan a = random_feasible_plan(m1, m2, rng);
    const TransferencePlan b = random_feasible_plan(m2, m3, rng);
    const TripleCoupling g = glue(a, b);
    EXPECT_LT((g.marginal(0, 1).dense() - a.dense()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((g.marginal(1, 2).dense() - b.dense()).cwiseAbs().maxCoeff(), 1e-12);
    const TransferencePlan c = compose(g);
    EXPECT_LT(c.marginal_error(), 1e-12);
    EXPECT_TRUE(support_lemma_check(c));
  }
}

TEST(Glue, MismatchedMiddleReportsDeviation) {
  std::mt19937_64 rng(10);
  const MeasurePtr m1 = testing::random_measure(2, 3, rng);
  const MeasurePtr m2 = testing::random_measure(2, 3, rng);
  const MeasurePtr m3 = testing::random_measure(2, 3, rng);
  try {
    glue(random_feasible_plan(m1, m2, rng), random_feasible_plan(m3, m1, rng));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("max deviation"), std::string::npos);
  }
}

TEST(OrthogonalSubspaces, EveryPlanHasTheSameCost) {
  std::mt19937_64 rng(11);
  Mat x = Mat::Zero(4, 7);
  Mat y = Mat::Zero(4, 9);
  x.topRows(2) = testing::gaussian_atoms(2, 7, rng);
  y.bottomRows(2) = testing::gaussian_atoms(2, 9, rng);
  const MeasurePtr mu = share(DiscreteMeasure(x, testing::random_masses(7, rng)));
  const MeasurePtr nu = share(DiscreteMeasure(y, testing::random_masses(9, rng)));
  const double expected = mu->second_moment() + nu->second_moment();
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_NEAR(plan_cost(random_feasible_plan(mu, nu, rng)), expected, 1e-12);
  }
}

TEST(SupportLemma, RandomPlansCoverEverySource) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const MeasurePtr mu = testing::random_measure(3, 6, rng);
    const MeasurePtr nu = testing::random_measure(3, 4, rng);
    EXPECT_TRUE(support_lemma_check(random_feasible_plan(mu, nu, rng)));
  }
}

TEST(Csv, MeasureAndPlanRoundTrip) {
  std::mt19937_64 rng(13);
  const MeasurePtr mu = testing::random_measure(3, 5, rng);
  const MeasurePtr nu = testing::random_measure(3, 4, rng);
  const TransferencePlan rho = random_feasible_plan(mu, nu, rng);
  std::stringstream ms;
  write_measure_csv(ms, *mu);
  const DiscreteMeasure back = read_measure_csv(ms);
  EXPECT_EQ(measure_deviation(back, *mu), 0.0);
  std::stringstream ps;
  write_plan_csv(ps, rho);
  const TransferencePlan rho2 = read_plan_csv(ps, mu, nu);
  EXPECT_EQ((rho2.dense() - rho.dense()).cwiseAbs().maxCoeff(), 0.0);
  std::stringstream broken("id,x0,mass\n0,abc,1\n");
  EXPECT_THROW(read_measure_csv(broken), Error);
}

}  // namespace
}  // namespace smot
