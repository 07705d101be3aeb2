#pragma once

#include <vector>

#include "smot/geometry/immersion.hpp"
#include "smot/geometry/subspace.hpp"

namespace smot {

// Default threshold below which a point counts as critical for the projection.
inline constexpr double kDefaultCriticalEps = 1e-8;

// |det(B_E^T F)| for an orthonormal n-frame F; the cosine of the angle
// between the planes. Throws if F is not orthonormal to 1e-10 or the
// dimensions disagree.
double plane_cosine(const Mat& f_basis, const Subspace& e);

// J_E at sample `index`: Jacobian of the orthogonal projection T_xM -> E.
double projection_jacobian(const SampledImmersion& m, const Subspace& e, std::size_t index);

// All J_E values at once.
Vec projection_jacobians(const SampledImmersion& m, const Subspace& e);

// Ids with J_E <= eps.
std::vector<std::size_t> critical_set(const SampledImmersion& m, const Subspace& e,
                                      double eps = kDefaultCriticalEps);

}  // namespace smot
