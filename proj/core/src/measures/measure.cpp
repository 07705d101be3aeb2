#include "smot/measures/measure.hpp"

#include "csv_util.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>
#include <string>

namespace smot {

DiscreteMeasure::DiscreteMeasure(Mat atoms, Vec masses) : atoms_(std::move(atoms)), masses_(std::move(masses)) {
  if (atoms_.cols() != masses_.size()) throw Error("DiscreteMeasure: atom and mass counts differ");
  if (!atoms_.allFinite()) throw Error("DiscreteMeasure: atoms must be finite");
  for (Eigen::Index i = 0; i < masses_.size(); ++i) {
    if (!(masses_(i) > 0.0) || !std::isfinite(masses_(i))) {
      throw Error("DiscreteMeasure: mass of atom " + std::to_string(i) + " is not positive");
    }
  }
}

DiscreteMeasure DiscreteMeasure::uniform(Mat atoms) {
  const Eigen::Index n = atoms.cols();
  if (n == 0) throw Error("DiscreteMeasure::uniform: no atoms");
  return DiscreteMeasure(std::move(atoms), Vec::Constant(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::normalized(Mat atoms, Vec masses) {
  const double total = masses.sum();
  if (!(total > 0)) throw Error("DiscreteMeasure::normalized: total mass must be positive");
  return DiscreteMeasure(std::move(atoms), masses / total);
}

double DiscreteMeasure::second_moment() const {
  return masses_.dot(atoms_.colwise().squaredNorm().transpose());
}

double measure_deviation(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  const double atoms = (a.atoms() - b.atoms()).cwiseAbs().maxCoeff();
  const double masses = (a.masses() - b.masses()).cwiseAbs().maxCoeff();
  return std::max(atoms, masses);
}

PushForward push_forward(const DiscreteMeasure& mu, const std::function<Vec(const Vec&)>& map) {
  const std::size_t n = mu.size();
  if (n == 0) return {};
  std::vector<Vec> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    images[i] = map(mu.atom(i));
    if (images[i].size() != images[0].size()) throw Error("push_forward: map returned inconsistent dimensions");
  }

  // Sweep in order of the first coordinate; a match must lie within the
  // tolerance in that coordinate, so only a window of representatives is scanned.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return images[a](0) < images[b](0); });
  std::vector<std::size_t> rep_of(n);
  std::vector<std::size_t> reps;  // representatives in sweep order
  std::size_t window = 0;
  for (std::size_t idx : order) {
    const Vec& x = images[idx];
    while (window < reps.size() && images[reps[window]](0) < x(0) - kMergeTolerance) ++window;
    std::size_t found = n;
    for (std::size_t r = window; r < reps.size(); ++r) {
      if ((images[reps[r]] - x).cwiseAbs().maxCoeff() <= kMergeTolerance) {
        found = reps[r];
        break;
      }
    }
    if (found == n) {
      reps.push_back(idx);
      found = idx;
    }
    rep_of[idx] = found;
  }

  // Renumber merged atoms by first occurrence in the original order.
  std::vector<std::size_t> slot(n, n);
  PushForward out;
  out.atom_of.resize(n);
  std::vector<std::size_t> first;
  std::vector<double> mass;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = rep_of[i];
    if (slot[r] == n) {
      slot[r] = first.size();
      first.push_back(r);
      mass.push_back(0.0);
    }
    out.atom_of[i] = slot[r];
    mass[slot[r]] += mu.mass(i);
  }
  Mat atoms(images[0].size(), static_cast<Eigen::Index>(first.size()));
  for (std::size_t k = 0; k < first.size(); ++k) atoms.col(static_cast<Eigen::Index>(k)) = images[first[k]];
  out.measure = DiscreteMeasure(std::move(atoms), Eigen::Map<const Vec>(mass.data(), static_cast<Eigen::Index>(mass.size())));
  return out;
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu) {
  out << "id";
  for (int k = 0; k < mu.dim(); ++k) out << ",x" << k;
  out << ",mass\n" << std::setprecision(17);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out << i;
    for (int k = 0; k < mu.dim(); ++k) out << "," << mu.atoms()(k, static_cast<Eigen::Index>(i));
    out << "," << mu.mass(i) << "\n";
  }
}

DiscreteMeasure read_measure_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("measure CSV: missing header");
  const auto header = detail::split_csv(line);
  if (header.size() < 3 || header.front() != "id" || header.back() != "mass") {
    throw Error("measure CSV: header must be id,x0..,mass");
  }
  const std::size_t d = header.size() - 2;
  std::vector<std::vector<double>> cols;
  std::vector<double> masses;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size()) throw Error("line " + std::to_string(lineno) + ": wrong number of columns");
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = detail::parse_number(cells[k + 1], lineno);
    cols.push_back(std::move(x));
    masses.push_back(detail::parse_number(cells.back(), lineno));
  }
  Mat atoms(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) atoms(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = cols[i][k];
  }
  return DiscreteMeasure(std::move(atoms), Eigen::Map<const Vec>(masses.data(), static_cast<Eigen::Index>(masses.size())));
}

}  // namespace smot
