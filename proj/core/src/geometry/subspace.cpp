#include "smot/geometry/subspace.hpp"

#include <string>

namespace smot {

Mat orthonormalize_columns(const Mat& vectors) {
  Mat q = vectors;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double original = q.col(j).norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    const double norm = q.col(j).norm();
    if (!(norm > 1e-12 * std::max(1.0, original))) {
      throw Error("orthonormalize_columns: column " + std::to_string(j) + " is linearly dependent");
    }
    q.col(j) /= norm;
  }
  return q;
}

Subspace::Subspace(Mat basis) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
    throw Error("Subspace: dimension must lie in [1, ambient_dim]");
  }
  const Mat gram = basis_.transpose() * basis_;
  const double dev = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-12)) {
    throw Error("Subspace: basis is not orthonormal (Gram deviation " + std::to_string(dev) + ")");
  }
}

Subspace Subspace::from_spanning(const Mat& vectors) {
  return Subspace(orthonormalize_columns(vectors));
}

Subspace Subspace::coordinate(int ambient_dim, int dim) {
  if (dim < 1 || dim > ambient_dim) throw Error("Subspace::coordinate: bad dimensions");
  return Subspace(Mat::Identity(ambient_dim, dim));
}

Subspace Subspace::rotated(const Mat& rotation) const {
  if (rotation.rows() != basis_.rows() || rotation.cols() != basis_.rows()) {
    throw Error("Subspace::rotated: rotation has wrong shape");
  }
  return from_spanning(rotation * basis_);
}

}  // namespace smot
