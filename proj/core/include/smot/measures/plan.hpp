#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "smot/measures/measure.hpp"

namespace smot {

// Marginal tolerance for plan validation.
inline constexpr double kMarginalTolerance = 1e-10;

struct PlanEntry {
  std::size_t src;
  std::size_t dst;
  double mass;
};

// Sparse coupling between two discrete measures.
class TransferencePlan {
 public:
  TransferencePlan() = default;
  // Validates indices, positive masses and both marginals.
  TransferencePlan(MeasurePtr source, MeasurePtr target, std::vector<PlanEntry> support);

  const DiscreteMeasure& source() const { return *source_; }
  const DiscreteMeasure& target() const { return *target_; }
  const MeasurePtr& source_ptr() const { return source_; }
  const MeasurePtr& target_ptr() const { return target_; }
  const std::vector<PlanEntry>& support() const { return support_; }

  Vec row_sums() const;
  Vec column_sums() const;
  // Largest deviation of either marginal from its measure.
  double marginal_error() const;
  // Dense mass matrix (only for small instances).
  Mat dense() const;

 private:
  MeasurePtr source_;
  MeasurePtr target_;
  std::vector<PlanEntry> support_;
};

struct TripleEntry {
  std::size_t i;
  std::size_t j;
  std::size_t k;
  double mass;
};

// Coupling of three measures; its pairwise marginals are transference plans.
class TripleCoupling {
 public:
  TripleCoupling(MeasurePtr first, MeasurePtr second, MeasurePtr third, std::vector<TripleEntry> support);

  const std::vector<TripleEntry>& support() const { return support_; }
  // Projection onto factors (a, b) with a < b, both in {0, 1, 2}.
  TransferencePlan marginal(int a, int b) const;

 private:
  MeasurePtr measures_[3];
  std::vector<TripleEntry> support_;
};

// Coupling x -> x of a measure with itself.
TransferencePlan identity_plan(const MeasurePtr& mu);

// Coupling (Id x F)_# mu; the target is the merged push-forward.
TransferencePlan map_plan(const MeasurePtr& mu, const std::function<Vec(const Vec&)>& map);

// Sum of mass * |x - y|^2 over the support.
double plan_cost(const TransferencePlan& rho);

enum class MonotonicityMode {
  Exhaustive,  // every cycle up to max_cycle_len, plus random longer cycles
  Exact,       // negative-cycle search over all cycle lengths
  Sampled,     // random cycles only
};

struct MonotonicityOptions {
  MonotonicityMode mode = MonotonicityMode::Exhaustive;
  int max_cycle_len = 6;
  double tol = 1e-9;
  long long random_cycles = 10000;
  std::uint64_t seed = 0;
};

struct MonotonicityResult {
  bool monotone = true;
  std::vector<std::size_t> cycle;  // support entries; entry t is re-paired with entry t+1
  double original_cost = 0.0;
  double permuted_cost = 0.0;
  long long cycles_examined = 0;
};

// Checks that no cyclic reshuffling of support pairs lowers the quadratic
// cost by more than tol. Plans with at most 8 atoms on each side are searched
// over all cycle lengths in exhaustive mode. Exhaustive mode throws when the
// support is too large; use Exact or Sampled mode there.
MonotonicityResult is_cyclically_monotone(const TransferencePlan& rho, const MonotonicityOptions& options = {});

// Conditionally independent gluing over the shared middle measure:
// mass(i, j, k) = rho12(i, j) rho23(j, k) / mu2(j). Throws with the largest
// deviation when rho12's target and rho23's source differ.
TripleCoupling glue(const TransferencePlan& rho12, const TransferencePlan& rho23);

// Marginal on the outer factors.
TransferencePlan compose(const TripleCoupling& gamma);

// True iff every source atom occurs in the support.
bool support_lemma_check(const TransferencePlan& rho);

// North-west corner rule on randomly permuted rows and columns.
TransferencePlan random_feasible_plan(const MeasurePtr& mu, const MeasurePtr& nu, std::mt19937_64& rng);

// CSV: src_id, dst_id, mass.
void write_plan_csv(std::ostream& out, const TransferencePlan& rho);
TransferencePlan read_plan_csv(std::istream& in, MeasurePtr source, MeasurePtr target);

}  // namespace smot
