#pragma once

#include <functional>
#include <span>
#include <vector>

#include "smot/common.hpp"

namespace smot {

// What a face of the parameter box means geometrically.
enum class FaceKind {
  Boundary,   // part of the boundary of the sampled domain
  Collapsed,  // degenerate face (pole, polar origin); contributes no boundary
  Periodic,   // identified with the opposite face
};

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  FaceKind lo_face = FaceKind::Boundary;
  FaceKind hi_face = FaceKind::Boundary;
  int resolution = 16;  // cells along this axis
};

using ChartMap = std::function<Vec(std::span<const double>)>;

// Discretization front-end: a map from an axis-aligned parameter box into
// R^ambient_dim, sampled on cell centers.
struct ParametricChart {
  std::vector<AxisSpec> axes;
  ChartMap map;
  int ambient_dim = 0;

  int dim() const { return static_cast<int>(axes.size()); }
  double cell_size(int axis) const;
  double cell_volume() const;
  // Central-difference step: half a cell, so every stencil stays inside the box.
  double fd_step(int axis) const { return 0.5 * cell_size(axis); }
  std::size_t node_count() const;
  // Parameters of the cell center with the given per-axis indices.
  std::vector<double> node_params(std::span<const int> index) const;

  void validate() const;
};

// Map value and coordinate derivatives at one parameter point, all from
// second-order central differences with the chart's per-axis steps.
struct ChartDerivatives {
  Vec position;
  Mat partials;                 // ambient_dim x n, column a = d/ds_a
  std::vector<Mat> second;      // second[a](:, b) = d^2 / ds_a ds_b
};

ChartDerivatives chart_derivatives(const ParametricChart& chart, std::span<const double> params);

// Same, with explicit steps (used for refinement studies and oracles).
ChartDerivatives chart_derivatives(const ParametricChart& chart, std::span<const double> params,
                                   std::span<const double> steps);

// Evaluates the map and throws if any coordinate is non-finite.
Vec evaluate_chart(const ParametricChart& chart, std::span<const double> params);

// Iterates every multi-index of a box with the given extents, last axis fastest.
void for_each_index(std::span<const int> extents, const std::function<void(std::span<const int>)>& fn);

}  // namespace smot
