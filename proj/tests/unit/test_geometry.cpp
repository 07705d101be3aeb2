#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "smot/geometry/catalog.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/geometry/laplacian.hpp"
#include "smot/geometry/projection.hpp"
#include "smot/geometry/quadrature.hpp"

namespace smot {
namespace {

constexpr double kPi = std::numbers::pi;

ParametricChart unit_square_plane(int res) {
  ParametricChart c;
  c.ambient_dim = 3;
  c.axes = {{0.0, 1.0, FaceKind::Boundary, FaceKind::Boundary, res},
            {0.0, 1.0, FaceKind::Boundary, FaceKind::Boundary, res}};
  c.map = [](std::span<const double> s) { return Vec((Vec(3) << s[0], s[1], 0.0).finished()); };
  return c;
}

Mat random_rotation(int d, std::uint64_t seed) {
  Mat q = haar_plane_sample(d, d, seed);
  return q;
}

TEST(Subspace, RejectsNonOrthonormalBasis) {
  Mat b(3, 2);
  b << 1, 0, 0, 2, 0, 0;
  EXPECT_THROW(Subspace{b}, Error);
  EXPECT_NO_THROW(Subspace::from_spanning(b));
}

TEST(Subspace, ProjectionIsIdempotent) {
  const Subspace e = Subspace::from_spanning(haar_plane_sample(5, 2, 7));
  const Vec x = Vec::LinSpaced(5, -1.0, 2.0);
  EXPECT_LT((e.project(e.project(x)) - e.project(x)).norm(), 1e-14);
  EXPECT_NEAR(e.distance_to(x) * e.distance_to(x) + e.project(x).squaredNorm(), x.squaredNorm(), 1e-12);
}

TEST(Quadrature, IntegratesPolynomialsExactly) {
  const GaussLegendreRule rule = gauss_legendre(8);
  EXPECT_NEAR(rule.weights.sum(), 2.0, 1e-14);
  const double v = integrate(rule, [](double x) { return std::pow(x, 15) + 3 * x * x; }, 0.0, 1.0);
  EXPECT_NEAR(v, 1.0 / 16.0 + 1.0, 1e-14);
  const GaussLegendreRule big = gauss_legendre(256);
  EXPECT_NEAR(integrate(big, [](double x) { return std::sin(x); }, 0.0, kPi), 2.0, 1e-13);
}

TEST(SampleImmersion, FlatSquareHasUnitAreaAndNoCurvature) {
  const SampledImmersion m = sample_immersion(unit_square_plane(64));
  EXPECT_NEAR(m.volume(), 1.0, 1e-6);
  EXPECT_LT(m.mean_curvature.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(m.boundary_volume(), 4.0, 1e-9);
}

TEST(SampleImmersion, FramesAreOrthonormalAndCurvatureIsNormal) {
  const SampledImmersion m = make_surface("torus-patch", {}, 32);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const Mat& f = m.tangent_frames[j];
    EXPECT_LT((f.transpose() * f - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((f.transpose() * m.mean_curvature.col(static_cast<Eigen::Index>(j))).norm(), 1e-8);
  }
}

TEST(SampleImmersion, UnitSphereHasUnitMeanCurvature) {
  const SampledImmersion m = make_surface("sphere-cap", {{"angle", kPi}}, 64);
  for (std::size_t j = 0; j < m.size(); ++j) {
    EXPECT_NEAR(m.mean_curvature.col(static_cast<Eigen::Index>(j)).norm(), 1.0, 5e-3);
  }
  EXPECT_NEAR(m.volume(), 4.0 * kPi, 1e-2);
  EXPECT_FALSE(m.has_boundary());
}

TEST(SampleImmersion, SphereCurvatureErrorIsSecondOrder) {
  auto worst = [](int res) {
    const SampledImmersion m = make_surface("sphere-cap", {{"angle", kPi}}, res);
    double err = 0.0;
    for (Eigen::Index j = 0; j < m.mean_curvature.cols(); ++j) {
      err = std::max(err, std::abs(m.mean_curvature.col(j).norm() - 1.0));
    }
    return err;
  };
  const double ratio = worst(32) / worst(64);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(SampleImmersion, CatenoidIsMinimal) {
  const SampledImmersion m = make_surface("catenoid", {}, 128);
  EXPECT_LT(m.mean_curvature.colwise().norm().maxCoeff(), 1e-3);
}

TEST(SampleImmersion, BoundaryLengthOfSphereCap) {
  const double angle = kPi / 3;
  const SampledImmersion m = make_surface("sphere-cap", {{"angle", angle}}, 128);
  EXPECT_NEAR(m.boundary_volume(), 2 * kPi * std::sin(angle), 1e-3);
  EXPECT_NEAR(m.volume(), 2 * kPi * (1 - std::cos(angle)), 1e-3);
  for (const BoundarySample& b : m.boundary) {
    // The outward conormal of a polar cap points away from the pole.
    EXPECT_LT(b.conormal(2), 0.0);
    EXPECT_NEAR(b.conormal.norm(), 1.0, 1e-12);
  }
}

TEST(SampleImmersion, ThreeDimensionalBallVolume) {
  const SampledImmersion m = make_surface("flat-disc", {{"dim", 3}}, 24);
  EXPECT_NEAR(m.volume(), 4.0 * kPi / 3.0, 2e-2);
  EXPECT_NEAR(m.boundary_volume(), 4.0 * kPi, 5e-2);
}

TEST(SampleImmersion, DegenerateMetricNamesTheCell) {
  ParametricChart c = unit_square_plane(4);
  c.map = [](std::span<const double> s) { return Vec((Vec(3) << s[0], s[0], 0.0).finished()); };
  try {
    sample_immersion(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("cell [0, 0]"), std::string::npos);
  }
}

TEST(SampleImmersion, NonFiniteMapIsRejected) {
  ParametricChart c = unit_square_plane(4);
  c.map = [](std::span<const double> s) { return Vec((Vec(3) << s[0], s[1], std::log(s[0] - 0.5)).finished()); };
  EXPECT_THROW(sample_immersion(c), Error);
}

TEST(SampleImmersion, ResolutionBelowThreeIsRejected) {
  EXPECT_THROW(sample_immersion(unit_square_plane(2)), Error);
}

TEST(ProjectionJacobian, IdentityAndRankDeficientCases) {
  const SampledImmersion flat = sample_immersion(unit_square_plane(8));
  const Subspace xy = Subspace::coordinate(3, 2);
  for (std::size_t j = 0; j < flat.size(); ++j) EXPECT_NEAR(projection_jacobian(flat, xy, j), 1.0, 1e-14);
  EXPECT_TRUE(critical_set(flat, xy).empty());
  EXPECT_EQ(critical_set(flat, xy, 1.0).size(), flat.size());

  Mat xz(3, 2);
  xz << 1, 0, 0, 0, 0, 1;
  const Subspace vertical(xz);
  Mat yz(3, 2);
  yz << 0, 0, 1, 0, 0, 1;
  EXPECT_LE(plane_cosine(yz, Subspace(xy)), 1e-12);
  EXPECT_NEAR(plane_cosine(xz, vertical), 1.0, 1e-15);
}

TEST(ProjectionJacobian, HypersurfaceMatchesNormalCosine) {
  const SampledImmersion m = make_surface("sphere-cap", {{"angle", kPi}}, 32);
  const Vec xi = (Vec(3) << 0.3, -0.4, 0.866).finished().normalized();
  Mat perp(3, 3);
  perp.col(0) = xi;
  perp.col(1) = Vec::Unit(3, 0);
  perp.col(2) = Vec::Unit(3, 1);
  const Mat q = orthonormalize_columns(perp);
  const Subspace e(q.rightCols(2));
  for (std::size_t j = 0; j < m.size(); j += 7) {
    const Vec nu = m.point(j).normalized();
    const Mat& f = m.tangent_frames[j];
    // Direct determinant of the projected frame as the oracle.
    const double direct = std::abs((q.rightCols(2).transpose() * f).determinant());
    EXPECT_NEAR(projection_jacobian(m, e, j), direct, 1e-14);
    EXPECT_NEAR(projection_jacobian(m, e, j), std::abs(nu.dot(xi)), 1e-3);
  }
}

TEST(ProjectionJacobian, InvariantUnderFrameRotation) {
  const SampledImmersion m = make_surface("graph", {}, 16);
  const Subspace e = Subspace::from_spanning(haar_plane_sample(3, 2, 11));
  std::mt19937_64 rng(3);
  for (std::size_t j = 0; j < m.size(); j += 5) {
    const Mat r = haar_plane_sample(2, 2, rng);
    const double base = projection_jacobian(m, e, j);
    EXPECT_NEAR(plane_cosine(m.tangent_frames[j] * r, e), base, 1e-12);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
  }
}

TEST(ProjectionJacobian, DimensionMismatchThrows) {
  const SampledImmersion m = make_surface("graph", {}, 8);
  EXPECT_THROW(projection_jacobian(m, Subspace::coordinate(4, 2), 0), Error);
}

TEST(CriticalSet, FullSphereEquatorBand) {
  const SampledImmersion m = make_surface("sphere-cap", {{"angle", kPi}}, 33);
  const Subspace xy = Subspace::coordinate(3, 2);
  const double eps = 1e-6;
  const auto ids = critical_set(m, xy, eps);
  // Odd resolution puts a ring of cell centers exactly on the equator.
  EXPECT_EQ(ids.size(), 33u);
  for (std::size_t j : ids) EXPECT_LE(std::abs(m.point(j)(2)), 1e-12);
}

TEST(PlaneCosine, RotationByThetaAndSymmetry) {
  const Subspace e = Subspace::coordinate(3, 2);
  for (double theta : {0.0, 0.3, 1.1, kPi / 2}) {
    Mat f(3, 2);
    f << 1, 0, 0, std::cos(theta), 0, std::sin(theta);
    EXPECT_NEAR(plane_cosine(f, e), std::abs(std::cos(theta)), 1e-14);
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Mat a = haar_plane_sample(5, 2, rng);
    const Mat b = haar_plane_sample(5, 2, rng);
    EXPECT_NEAR(plane_cosine(a, Subspace(b)), plane_cosine(b, Subspace(a)), 1e-12);
  }
  Mat bad(3, 2);
  bad << 1, 0, 0, 1.1, 0, 0;
  EXPECT_THROW(plane_cosine(bad, e), Error);
}

TEST(Grassmannian, HaarSampleIsReproducibleAndOrthonormal) {
  const Mat a = haar_plane_sample(6, 3, 42);
  const Mat b = haar_plane_sample(6, 3, 42);
  EXPECT_EQ((a - b).norm(), 0.0);
  EXPECT_LT((a.transpose() * a - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  const Mat full = haar_plane_sample(3, 3, 1);
  EXPECT_NEAR(plane_cosine(full, Subspace::coordinate(3, 3)), 1.0, 1e-12);
}

TEST(Grassmannian, AlphaQuadratureAnchors) {
  EXPECT_NEAR(alpha_n1(2), 2.0 / 3.0, 1e-9);
  // Values from independent arbitrary-precision quadrature.
  EXPECT_NEAR(alpha_n1(3), 0.7058593280086556, 1e-9);
  EXPECT_NEAR(alpha_n1(5), 0.7646332379994534, 1e-9);
  EXPECT_NEAR(alpha_n1(10), 0.8410223018556129, 1e-9);
  EXPECT_NEAR(alpha_n1(50), 0.9497252476756249, 1e-9);
}

TEST(Grassmannian, AlphaLowerBoundAndWallis) {
  for (int n = 2; n <= 50; ++n) EXPECT_GE(alpha_n1(n), alpha_n1_lower_bound(n)) << "n = " << n;
  EXPECT_NEAR(wallis_integral(0), kPi, 1e-15);
  EXPECT_NEAR(wallis_integral(1), 2.0, 1e-15);
  const double ratio = wallis_integral(199) * std::sqrt(199.0 / (2 * kPi));
  EXPECT_NEAR(ratio, 1.0, 0.02);
}

TEST(Grassmannian, AlphaMonteCarloMatchesQuadrature) {
  const AlphaEstimate a = alpha_constant(2, 1, 200000, 9);
  EXPECT_NEAR(a.value, 2.0 / 3.0, 3 * a.standard_error);
  EXPECT_EQ(alpha_constant(3, 0, 1000, 1).value, 1.0);
  EXPECT_THROW(alpha_constant(2, 1, 10, 1), Error);
}

TEST(Grassmannian, AlphaDoesNotDependOnReferenceOrThreads) {
  const Subspace other = Subspace::from_spanning(haar_plane_sample(4, 3, 77));
  const AlphaEstimate a = alpha_constant(3, 1, 50000, 4);
  const AlphaEstimate b = alpha_constant(3, 1, 50000, 5, other);
  EXPECT_NEAR(a.value, b.value, 3 * std::hypot(a.standard_error, b.standard_error));
  const AlphaEstimate c = alpha_constant(3, 1, 50000, 4, std::nullopt, 3);
  EXPECT_EQ(a.value, c.value);
}

TEST(Laplacian, LinearPotentialOnTorus) {
  const SampledImmersion m = make_surface("torus-patch", {}, 64);
  const SmoothPotential f = SmoothPotential::linear((Vec(3) << 0.2, -1.0, 0.7).finished());
  for (std::size_t j = 0; j < m.size(); j += 97) EXPECT_LT(laplacian_identity_check(m, f, j).residual, 5e-3);
}

TEST(Laplacian, HalfNormOnSphere) {
  const SampledImmersion m = make_surface("sphere-cap", {{"angle", kPi}}, 64);
  const SmoothPotential f = SmoothPotential::half_norm_squared(3);
  for (std::size_t j = 0; j < m.size(); j += 31) {
    const LaplacianCheck c = laplacian_identity_check(m, f, j);
    EXPECT_LT(c.residual, 5e-3);
    EXPECT_NEAR(c.hessian_trace, 2.0, 1e-12);
  }
}

TEST(Laplacian, TangentialQuadraticOnFlatPlane) {
  const SampledImmersion m = sample_immersion(unit_square_plane(16));
  Mat a = Mat::Zero(3, 3);
  a.topLeftCorner(2, 2) << 2.0, 0.5, 0.5, 1.0;
  const SmoothPotential f = SmoothPotential::quadratic(a, Vec::Zero(3));
  for (std::size_t j = 0; j < m.size(); ++j) EXPECT_LT(laplacian_identity_check(m, f, j).residual, 1e-8);
}

TEST(Laplacian, NonSmoothPointIsRejected) {
  const SampledImmersion m = sample_immersion(unit_square_plane(8));
  SmoothPotential f = SmoothPotential::half_norm_squared(3);
  f.smooth_at = [](const Vec&) { return false; };
  EXPECT_THROW(laplacian_identity_check(m, f, 0), Error);
}

TEST(Catalog, KnownIdsAndParameterValidation) {
  std::vector<std::string> ids;
  for (const CatalogEntry& e : surface_catalog()) ids.push_back(e.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"flat-disc", "sphere-cap", "graph", "catenoid", "torus-patch"}));
  EXPECT_THROW(make_surface("klein-bottle", {}, 8), Error);
  EXPECT_THROW(make_surface("graph", {{"bogus", 1.0}}, 8), Error);
  EXPECT_THROW(make_surface("catenoid", {{"dim", 3}}, 8), Error);
}

TEST(Immersion, RotationMovesEveryAmbientQuantity) {
  const SampledImmersion m = make_surface("graph", {}, 12);
  const Mat q = random_rotation(3, 8);
  const SampledImmersion r = m.rotated(q);
  EXPECT_LT((r.points - q * m.points).norm(), 1e-12);
  EXPECT_LT((r.weights - m.weights).norm(), 1e-15);
  EXPECT_NEAR(r.boundary_volume(), m.boundary_volume(), 1e-14);
}

}  // namespace
}  // namespace smot
