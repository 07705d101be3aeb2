#include "smot/transport/ball.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "smot/geometry/chart.hpp"

namespace smot {
namespace {

BallTarget from_coordinates(const Subspace& e, const std::vector<Vec>& pts) {
  if (pts.empty()) throw Error("ball_target: no atoms inside the ball");
  Mat coords(e.dim(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) coords.col(static_cast<Eigen::Index>(i)) = pts[i];
  Mat ambient = e.basis() * coords;
  return {e, share(DiscreteMeasure::uniform(std::move(ambient))), std::move(coords)};
}

}  // namespace

BallTarget ball_target_grid(const Subspace& e, double spacing) {
  if (!(spacing > 0 && spacing <= 1)) throw Error("ball_target_grid: spacing must lie in (0, 1]");
  const int n = e.dim();
  const int k = static_cast<int>(std::floor(1.0 / spacing));
  std::vector<int> extents(static_cast<std::size_t>(n), 2 * k + 1);
  std::vector<Vec> pts;
  for_each_index(extents, [&](std::span<const int> idx) {
    Vec y(n);
    for (int a = 0; a < n; ++a) y(a) = spacing * (idx[static_cast<std::size_t>(a)] - k);
    if (y.squaredNorm() <= 1.0) pts.push_back(std::move(y));
  });
  return from_coordinates(e, pts);
}

BallTarget ball_target(const Subspace& e, std::size_t num_atoms, BallSampling mode, std::uint64_t seed) {
  if (num_atoms < 10) throw Error("ball_target: need at least 10 atoms");
  const int n = e.dim();
  if (mode == BallSampling::Grid) {
    const double spacing = std::pow(unit_ball_volume(n) / static_cast<double>(num_atoms), 1.0 / n);
    return ball_target_grid(e, std::min(spacing, 1.0));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vec> pts;
  pts.reserve(num_atoms);
  while (pts.size() < num_atoms) {
    Vec y(n);
    for (int a = 0; a < n; ++a) y(a) = unit(rng);
    if (y.squaredNorm() <= 1.0) pts.push_back(std::move(y));
  }
  return from_coordinates(e, pts);
}

}  // namespace smot
