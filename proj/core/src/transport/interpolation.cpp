#include "smot/transport/interpolation.hpp"

#include <algorithm>
#include <numeric>

namespace smot {

DiscreteMeasure displacement_interpolation(const TransferencePlan& rho, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("displacement_interpolation: t must lie in [0, 1]");
  const auto& s = rho.support();
  if (s.empty()) throw Error("displacement_interpolation: empty plan");
  Mat atoms(rho.source().dim(), static_cast<Eigen::Index>(s.size()));
  Vec masses(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    atoms.col(kk) = (1.0 - t) * rho.source().atom(s[k].src) + t * rho.target().atom(s[k].dst);
    masses(kk) = s[k].mass;
  }
  return push_forward(DiscreteMeasure(std::move(atoms), std::move(masses)), [](const Vec& x) { return x; }).measure;
}

MongeNote monge_problem_solvability_note(const DiscreteMeasure& mu, const Subspace& e, double tol) {
  if (mu.dim() != e.ambient_dim()) throw Error("monge_problem_solvability_note: dimension mismatch");
  MongeNote note;
  const std::size_t n = mu.size();
  Mat proj(e.dim(), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) proj.col(static_cast<Eigen::Index>(i)) = e.coordinates(mu.atom(i));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proj(0, static_cast<Eigen::Index>(a)) < proj(0, static_cast<Eigen::Index>(b));
  });
  for (std::size_t p = 0; p < n; ++p) {
    const auto a = static_cast<Eigen::Index>(order[p]);
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto b = static_cast<Eigen::Index>(order[q]);
      if (proj(0, b) - proj(0, a) > tol) break;
      if ((proj.col(a) - proj.col(b)).norm() <= tol && (mu.atoms().col(a) - mu.atoms().col(b)).norm() > tol) {
        note.collisions.emplace_back(std::min(order[p], order[q]), std::max(order[p], order[q]));
      }
    }
  }
  std::sort(note.collisions.begin(), note.collisions.end());
  note.injective = note.collisions.empty();
  note.message = note.injective
                     ? "projection is injective on the support; the reverse transport is given by a map"
                     : std::to_string(note.collisions.size()) +
                           " pairs of atoms share a projection; no map carries p_E mu back onto mu";
  return note;
}

}  // namespace smot
