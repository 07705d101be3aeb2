#include "smot/geometry/projection.hpp"

#include <algorithm>

namespace smot {
namespace {

void check_dims(int ambient, int n, const Subspace& e, const char* who) {
  if (ambient != e.ambient_dim() || n != e.dim()) {
    throw Error(std::string(who) + ": dimension mismatch (plane " + std::to_string(n) + " in R^" +
                std::to_string(ambient) + ", subspace " + std::to_string(e.dim()) + " in R^" +
                std::to_string(e.ambient_dim()) + ")");
  }
}

double frame_cosine(const Mat& frame, const Subspace& e) {
  const double v = std::abs((e.basis().transpose() * frame).determinant());
  return std::min(v, 1.0);
}

}  // namespace

double plane_cosine(const Mat& f_basis, const Subspace& e) {
  check_dims(static_cast<int>(f_basis.rows()), static_cast<int>(f_basis.cols()), e, "plane_cosine");
  const Mat gram = f_basis.transpose() * f_basis;
  const double dev = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-10)) throw Error("plane_cosine: basis is not orthonormal");
  return frame_cosine(f_basis, e);
}

double projection_jacobian(const SampledImmersion& m, const Subspace& e, std::size_t index) {
  check_dims(m.ambient_dim, m.intrinsic_dim, e, "projection_jacobian");
  if (index >= m.size()) throw Error("projection_jacobian: point id out of range");
  return frame_cosine(m.tangent_frames[index], e);
}

Vec projection_jacobians(const SampledImmersion& m, const Subspace& e) {
  check_dims(m.ambient_dim, m.intrinsic_dim, e, "projection_jacobians");
  Vec out(static_cast<Eigen::Index>(m.size()));
  for (std::size_t j = 0; j < m.size(); ++j) out(static_cast<Eigen::Index>(j)) = frame_cosine(m.tangent_frames[j], e);
  return out;
}

std::vector<std::size_t> critical_set(const SampledImmersion& m, const Subspace& e, double eps) {
  if (!(eps > 0)) throw Error("critical_set: eps must be positive");
  const Vec jac = projection_jacobians(m, e);
  std::vector<std::size_t> ids;
  for (Eigen::Index j = 0; j < jac.size(); ++j) {
    if (jac(j) <= eps) ids.push_back(static_cast<std::size_t>(j));
  }
  return ids;
}

}  // namespace smot
