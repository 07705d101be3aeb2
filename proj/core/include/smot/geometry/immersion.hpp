#pragma once

#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "smot/geometry/chart.hpp"

namespace smot {

struct BoundarySample {
  Vec point;
  Vec conormal;   // outward unit conormal, tangent to M
  double weight;  // (n-1)-volume carried by this sample
};

// Where a sampled surface came from; copied verbatim into reports.
struct SurfaceInfo {
  std::string id = "custom";
  std::map<std::string, double> params;
};

// Quadrature-weighted point cloud on an immersed n-manifold. Column j of
// every matrix belongs to sample j.
struct SampledImmersion {
  int ambient_dim = 0;
  int intrinsic_dim = 0;
  Mat points;                      // d x N
  std::vector<Mat> tangent_frames; // d x n, orthonormal
  std::vector<Mat> partials;       // d x n, raw chart partials
  std::vector<Mat> metric;         // n x n induced metric in chart coordinates
  Mat mean_curvature;              // d x N
  Vec weights;                     // N
  Mat params;                      // n x N chart parameters
  std::vector<BoundarySample> boundary;
  SurfaceInfo surface;
  std::vector<int> resolution;
  std::shared_ptr<const ParametricChart> chart;

  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
  bool has_boundary() const { return !boundary.empty(); }
  double volume() const { return weights.sum(); }
  double boundary_volume() const;
  Vec point(std::size_t j) const { return points.col(static_cast<Eigen::Index>(j)); }

  // Applies x -> q x to every ambient quantity. Weights are unchanged.
  SampledImmersion rotated(const Mat& q) const;
};

// Samples the chart on cell centers and attaches boundary samples for every
// face marked Boundary. Throws on a degenerate metric (Gram determinant at or
// below 1e-12), naming the cell.
SampledImmersion sample_immersion(const ParametricChart& chart, SurfaceInfo info = {});

// Riemannian metric on the ambient coordinates: x -> SPD Gram matrix.
using AmbientMetric = std::function<Mat(const Vec&)>;

// Boundary samples for every Boundary face; weights, conormals and
// orthogonality measured in `metric` when given, Euclidean otherwise.
std::vector<BoundarySample> sample_boundary(const ParametricChart& chart, const AmbientMetric* metric = nullptr);

// CSV: point_id, x0..x{d-1}, weight, H0..H{d-1}, frame entries row-major.
void write_immersion_csv(std::ostream& out, const SampledImmersion& m);

}  // namespace smot
