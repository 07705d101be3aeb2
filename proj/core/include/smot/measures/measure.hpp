#pragma once

#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <vector>

#include "smot/common.hpp"

namespace smot {

// Two images closer than this in every coordinate are merged into one atom.
inline constexpr double kMergeTolerance = 1e-12;

// Finitely many weighted atoms; column i of `atoms` carries `masses(i)`.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  // Masses must be positive and atoms finite. The total is kept as given.
  DiscreteMeasure(Mat atoms, Vec masses);

  static DiscreteMeasure uniform(Mat atoms);
  // Rescales masses to sum to one.
  static DiscreteMeasure normalized(Mat atoms, Vec masses);

  int dim() const { return static_cast<int>(atoms_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(atoms_.cols()); }
  const Mat& atoms() const { return atoms_; }
  const Vec& masses() const { return masses_; }
  Vec atom(std::size_t i) const { return atoms_.col(static_cast<Eigen::Index>(i)); }
  double mass(std::size_t i) const { return masses_(static_cast<Eigen::Index>(i)); }
  double total_mass() const { return masses_.sum(); }
  bool is_probability(double tol = 1e-12) const { return std::abs(total_mass() - 1.0) <= tol; }

  // Second moment sum m_i |x_i|^2.
  double second_moment() const;

 private:
  Mat atoms_;
  Vec masses_;
};

using MeasurePtr = std::shared_ptr<const DiscreteMeasure>;

inline MeasurePtr share(DiscreteMeasure m) { return std::make_shared<const DiscreteMeasure>(std::move(m)); }

// Largest coordinate or mass difference between two measures with the same
// atom count and dimension; infinity otherwise.
double measure_deviation(const DiscreteMeasure& a, const DiscreteMeasure& b);

struct PushForward {
  DiscreteMeasure measure;
  std::vector<std::size_t> atom_of;  // source atom -> merged image atom
};

// Maps every atom and merges coincident images (tolerance kMergeTolerance).
// Merged atoms are ordered by first occurrence.
PushForward push_forward(const DiscreteMeasure& mu, const std::function<Vec(const Vec&)>& map);

// CSV: id, x0..x{d-1}, mass.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu);
DiscreteMeasure read_measure_csv(std::istream& in);

}  // namespace smot
