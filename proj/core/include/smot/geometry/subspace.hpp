#pragma once

#include "smot/common.hpp"

namespace smot {

// An n-dimensional linear subspace of R^d, stored as a d x n matrix with
// orthonormal columns.
class Subspace {
 public:
  // Takes an already orthonormal basis; throws if its Gram matrix is off the
  // identity by more than 1e-12.
  explicit Subspace(Mat basis);

  // Orthonormalizes arbitrary spanning columns (must have full column rank).
  static Subspace from_spanning(const Mat& vectors);
  // Span of the first n coordinate axes of R^d.
  static Subspace coordinate(int ambient_dim, int dim);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }

  // Orthogonal projection onto the subspace, in ambient coordinates.
  Vec project(const Vec& x) const { return basis_ * (basis_.transpose() * x); }
  // Coordinates of the projection in the subspace basis.
  Vec coordinates(const Vec& x) const { return basis_.transpose() * x; }
  Vec embed(const Vec& coords) const { return basis_ * coords; }
  double distance_to(const Vec& x) const { return (x - project(x)).norm(); }

  // Applies an ambient orthogonal transformation to the basis.
  Subspace rotated(const Mat& rotation) const;

 private:
  Mat basis_;
};

// Modified Gram-Schmidt with one reorthogonalization pass. Throws if a column
// is numerically dependent on the previous ones.
Mat orthonormalize_columns(const Mat& vectors);

}  // namespace smot
