#include "smot/measures/plan.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "csv_util.hpp"

namespace smot {
namespace {

void check_marginals(const TransferencePlan& rho, const char* who) {
  const double err = rho.marginal_error();
  if (!(err <= kMarginalTolerance)) {
    std::ostringstream os;
    os << who << ": marginals deviate from the measures by " << err;
    throw Error(os.str());
  }
}

}  // namespace

TransferencePlan::TransferencePlan(MeasurePtr source, MeasurePtr target, std::vector<PlanEntry> support)
    : source_(std::move(source)), target_(std::move(target)), support_(std::move(support)) {
  if (!source_ || !target_) throw Error("TransferencePlan: null measure");
  for (const PlanEntry& e : support_) {
    if (e.src >= source_->size() || e.dst >= target_->size()) throw Error("TransferencePlan: atom id out of range");
    if (!(e.mass > 0.0) || !std::isfinite(e.mass)) throw Error("TransferencePlan: support masses must be positive");
  }
  check_marginals(*this, "TransferencePlan");
}

Vec TransferencePlan::row_sums() const {
  Vec r = Vec::Zero(static_cast<Eigen::Index>(source_->size()));
  for (const PlanEntry& e : support_) r(static_cast<Eigen::Index>(e.src)) += e.mass;
  return r;
}

Vec TransferencePlan::column_sums() const {
  Vec c = Vec::Zero(static_cast<Eigen::Index>(target_->size()));
  for (const PlanEntry& e : support_) c(static_cast<Eigen::Index>(e.dst)) += e.mass;
  return c;
}

double TransferencePlan::marginal_error() const {
  double err = 0.0;
  if (source_->size() > 0) err = (row_sums() - source_->masses()).cwiseAbs().maxCoeff();
  if (target_->size() > 0) err = std::max(err, (column_sums() - target_->masses()).cwiseAbs().maxCoeff());
  return err;
}

Mat TransferencePlan::dense() const {
  if (source_->size() * target_->size() > 1000000) throw Error("TransferencePlan::dense: instance too large");
  Mat m = Mat::Zero(static_cast<Eigen::Index>(source_->size()), static_cast<Eigen::Index>(target_->size()));
  for (const PlanEntry& e : support_) m(static_cast<Eigen::Index>(e.src), static_cast<Eigen::Index>(e.dst)) += e.mass;
  return m;
}

TripleCoupling::TripleCoupling(MeasurePtr first, MeasurePtr second, MeasurePtr third, std::vector<TripleEntry> support)
    : measures_{std::move(first), std::move(second), std::move(third)}, support_(std::move(support)) {
  for (const MeasurePtr& m : measures_) {
    if (!m) throw Error("TripleCoupling: null measure");
  }
  for (const TripleEntry& e : support_) {
    if (e.i >= measures_[0]->size() || e.j >= measures_[1]->size() || e.k >= measures_[2]->size()) {
      throw Error("TripleCoupling: atom id out of range");
    }
    if (!(e.mass > 0.0)) throw Error("TripleCoupling: support masses must be positive");
  }
  (void)marginal(0, 1);
  (void)marginal(1, 2);
  (void)marginal(0, 2);
}

TransferencePlan TripleCoupling::marginal(int a, int b) const {
  if (!(0 <= a && a < b && b <= 2)) throw Error("TripleCoupling::marginal: need 0 <= a < b <= 2");
  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (const TripleEntry& e : support_) {
    const std::size_t idx[3] = {e.i, e.j, e.k};
    acc[{idx[a], idx[b]}] += e.mass;
  }
  std::vector<PlanEntry> out;
  out.reserve(acc.size());
  for (const auto& [key, mass] : acc) out.push_back({key.first, key.second, mass});
  return TransferencePlan(measures_[a], measures_[b], std::move(out));
}

TransferencePlan identity_plan(const MeasurePtr& mu) {
  std::vector<PlanEntry> s;
  s.reserve(mu->size());
  for (std::size_t i = 0; i < mu->size(); ++i) s.push_back({i, i, mu->mass(i)});
  return TransferencePlan(mu, mu, std::move(s));
}

TransferencePlan map_plan(const MeasurePtr& mu, const std::function<Vec(const Vec&)>& map) {
  PushForward pf = push_forward(*mu, map);
  std::vector<PlanEntry> s;
  s.reserve(mu->size());
  for (std::size_t i = 0; i < mu->size(); ++i) s.push_back({i, pf.atom_of[i], mu->mass(i)});
  return TransferencePlan(mu, share(std::move(pf.measure)), std::move(s));
}

double plan_cost(const TransferencePlan& rho) {
  const Mat& x = rho.source().atoms();
  const Mat& y = rho.target().atoms();
  if (x.rows() != y.rows()) throw Error("plan_cost: source and target live in different dimensions");
  double cost = 0.0;
  for (const PlanEntry& e : rho.support()) {
    cost += e.mass * (x.col(static_cast<Eigen::Index>(e.src)) - y.col(static_cast<Eigen::Index>(e.dst))).squaredNorm();
  }
  return cost;
}

namespace {

// Pair costs between support entries: c(k, l) = |x_{src_k} - y_{dst_l}|^2.
Mat support_costs(const TransferencePlan& rho) {
  const auto& s = rho.support();
  const Mat& x = rho.source().atoms();
  const Mat& y = rho.target().atoms();
  if (x.rows() != y.rows()) throw Error("is_cyclically_monotone: source and target live in different dimensions");
  const auto n = static_cast<Eigen::Index>(s.size());
  Mat c(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      c(k, l) = (x.col(static_cast<Eigen::Index>(s[static_cast<std::size_t>(k)].src)) -
                 y.col(static_cast<Eigen::Index>(s[static_cast<std::size_t>(l)].dst)))
                    .squaredNorm();
    }
  }
  return c;
}

void record(MonotonicityResult& r, const Mat& c, const std::vector<std::size_t>& cycle) {
  r.monotone = false;
  r.cycle = cycle;
  r.original_cost = 0.0;
  r.permuted_cost = 0.0;
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    const auto k = static_cast<Eigen::Index>(cycle[t]);
    const auto l = static_cast<Eigen::Index>(cycle[(t + 1) % cycle.size()]);
    r.original_cost += c(k, k);
    r.permuted_cost += c(k, l);
  }
}

double cycle_gain(const Mat& w, const std::vector<std::size_t>& cycle) {
  double total = 0.0;
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    total += w(static_cast<Eigen::Index>(cycle[t]), static_cast<Eigen::Index>(cycle[(t + 1) % cycle.size()]));
  }
  return total;
}

// Every cycle with negative total has a rotation whose proper prefix sums are
// all negative, so paths are only extended while the running sum stays below
// a rounding allowance.
struct CycleSearch {
  CycleSearch(const Mat& weights, int len, double tolerance, double prune_at, long long max_nodes)
      : w(weights), max_len(len), tol(tolerance), prune(prune_at), budget(max_nodes) {}

  const Mat& w;
  int max_len;
  double tol;
  double prune;
  long long budget;
  long long budget_used = 0;
  long long examined = 0;
  std::vector<std::size_t> path;
  std::vector<char> used;
  std::vector<std::size_t> found;

  bool dfs(double partial) {
    const auto n = static_cast<std::size_t>(w.rows());
    const std::size_t last = path.back();
    if (path.size() >= 2) {
      ++examined;
      if (partial + w(static_cast<Eigen::Index>(last), static_cast<Eigen::Index>(path.front())) < -tol) {
        found = path;
        return true;
      }
    }
    if (static_cast<int>(path.size()) >= max_len) return false;
    if (++budget_used > budget) throw Error("is_cyclically_monotone: exhaustive search budget exceeded; use Exact mode");
    for (std::size_t l = 0; l < n; ++l) {
      if (used[l]) continue;
      const double next = partial + w(static_cast<Eigen::Index>(last), static_cast<Eigen::Index>(l));
      if (next >= prune) continue;
      used[l] = 1;
      path.push_back(l);
      if (dfs(next)) return true;
      path.pop_back();
      used[l] = 0;
    }
    return false;
  }
};

double falling_factorial_sum(std::size_t s, int max_len) {
  double total = 0.0;
  double term = static_cast<double>(s);
  for (int len = 2; len <= max_len && static_cast<std::size_t>(len) <= s; ++len) {
    term *= static_cast<double>(s - static_cast<std::size_t>(len) + 1);
    total += term;
  }
  return total;
}

bool sample_cycles(const Mat& w, const Mat& c, int min_len, long long count, double tol, std::uint64_t seed,
                   MonotonicityResult& r) {
  const auto n = static_cast<std::size_t>(w.rows());
  if (static_cast<std::size_t>(min_len) > n || count <= 0) return false;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::uniform_int_distribution<std::size_t> len_dist(static_cast<std::size_t>(min_len), n);
  for (long long t = 0; t < count; ++t) {
    const std::size_t len = len_dist(rng);
    for (std::size_t a = 0; a < len; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, n - 1);
      std::swap(pool[a], pool[pick(rng)]);
    }
    std::vector<std::size_t> cycle(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(len));
    ++r.cycles_examined;
    if (cycle_gain(w, cycle) < -tol) {
      record(r, c, cycle);
      return true;
    }
  }
  return false;
}

bool exact_search(const Mat& w, const Mat& c, double tol, MonotonicityResult& r) {
  const auto n = w.rows();
  if (n > 2000) throw Error("is_cyclically_monotone: support too large for Exact mode (over 2000 entries)");
  Mat dist = w;
  dist.diagonal().setZero();
  Eigen::MatrixXi next(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) next(i, j) = static_cast<int>(j);
  }
  // Floyd-Warshall compounds rounding-level negative cycles exponentially, so
  // an update must improve by more than a rounding allowance and diagonal
  // entries above -tol are reset to zero.
  const double improve = 1e-14 * std::max(1.0, w.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dik = dist(i, k);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double via = dik + dist(k, j);
        if (via < dist(i, j) - improve) {
          dist(i, j) = via;
          next(i, j) = next(i, k);
        }
      }
    }
    r.cycles_examined += n;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (dist(i, i) < -tol) {
        // Walk the successor chain from i until a vertex repeats.
        std::vector<std::size_t> walk;
        std::vector<Eigen::Index> seen_at(static_cast<std::size_t>(n), -1);
        Eigen::Index v = i;
        while (seen_at[static_cast<std::size_t>(v)] < 0) {
          seen_at[static_cast<std::size_t>(v)] = static_cast<Eigen::Index>(walk.size());
          walk.push_back(static_cast<std::size_t>(v));
          v = next(v, i);
        }
        std::vector<std::size_t> cycle(walk.begin() + seen_at[static_cast<std::size_t>(v)], walk.end());
        record(r, c, cycle);
        return true;
      }
      if (dist(i, i) < 0.0) dist(i, i) = 0.0;
    }
  }
  return false;
}

}  // namespace

MonotonicityResult is_cyclically_monotone(const TransferencePlan& rho, const MonotonicityOptions& options) {
  if (options.tol < 0) throw Error("is_cyclically_monotone: tol must be nonnegative");
  if (options.max_cycle_len < 2) throw Error("is_cyclically_monotone: max_cycle_len must be at least 2");
  MonotonicityResult r;
  const std::size_t s = rho.support().size();
  if (s < 2) return r;
  const Mat c = support_costs(rho);
  Mat w = c;
  for (Eigen::Index k = 0; k < w.rows(); ++k) w.row(k).array() -= c(k, k);

  switch (options.mode) {
    case MonotonicityMode::Exact:
      exact_search(w, c, options.tol, r);
      return r;
    case MonotonicityMode::Sampled:
      sample_cycles(w, c, 2, options.random_cycles, options.tol, options.seed, r);
      return r;
    case MonotonicityMode::Exhaustive:
      break;
  }

  const bool full = rho.source().size() <= 8 && rho.target().size() <= 8;
  const int max_len = full ? static_cast<int>(s) : std::min<int>(options.max_cycle_len, static_cast<int>(s));
  constexpr double kExhaustiveLimit = 2e9;
  if (!full && falling_factorial_sum(s, max_len) > kExhaustiveLimit) {
    throw Error("is_cyclically_monotone: support of " + std::to_string(s) +
                " entries is too large for Exhaustive mode with cycles up to length " + std::to_string(max_len) +
                "; use Sampled or Exact mode");
  }
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  CycleSearch search(w, max_len, options.tol, 1e-12 * scale, static_cast<long long>(kExhaustiveLimit));
  search.used.assign(s, 0);
  for (std::size_t start = 0; start < s; ++start) {
    search.path = {start};
    search.used[start] = 1;
    const bool hit = search.dfs(0.0);
    search.used[start] = 0;
    if (hit) {
      r.cycles_examined = search.examined;
      record(r, c, search.found);
      return r;
    }
  }
  r.cycles_examined = search.examined;
  if (max_len < static_cast<int>(s)) {
    sample_cycles(w, c, max_len + 1, options.random_cycles, options.tol, options.seed, r);
  }
  return r;
}

TripleCoupling glue(const TransferencePlan& rho12, const TransferencePlan& rho23) {
  if (rho12.target_ptr() != rho23.source_ptr()) {
    const double dev = measure_deviation(rho12.target(), rho23.source());
    if (!(dev <= kMarginalTolerance)) {
      std::ostringstream os;
      os << "glue: middle marginals disagree (max deviation " << dev << ")";
      throw Error(os.str());
    }
  }
  const DiscreteMeasure& middle = rho12.target();
  std::vector<std::vector<std::pair<std::size_t, double>>> by_middle(middle.size());
  for (const PlanEntry& e : rho23.support()) by_middle[e.src].emplace_back(e.dst, e.mass);
  std::vector<TripleEntry> support;
  for (const PlanEntry& e : rho12.support()) {
    const double inv = 1.0 / middle.mass(e.dst);
    for (const auto& [k, mass] : by_middle[e.dst]) support.push_back({e.src, e.dst, k, e.mass * mass * inv});
  }
  return TripleCoupling(rho12.source_ptr(), rho12.target_ptr(), rho23.target_ptr(), std::move(support));
}

TransferencePlan compose(const TripleCoupling& gamma) { return gamma.marginal(0, 2); }

bool support_lemma_check(const TransferencePlan& rho) {
  std::vector<char> seen(rho.source().size(), 0);
  for (const PlanEntry& e : rho.support()) seen[e.src] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char v) { return v != 0; });
}

TransferencePlan random_feasible_plan(const MeasurePtr& mu, const MeasurePtr& nu, std::mt19937_64& rng) {
  if (std::abs(mu->total_mass() - nu->total_mass()) > 1e-12 * std::max(1.0, mu->total_mass())) {
    throw Error("random_feasible_plan: total masses differ");
  }
  std::vector<std::size_t> rows(mu->size());
  std::vector<std::size_t> cols(nu->size());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::vector<PlanEntry> support;
  std::size_t a = 0;
  std::size_t b = 0;
  double r = rows.empty() ? 0.0 : mu->mass(rows[0]);
  double c = cols.empty() ? 0.0 : nu->mass(cols[0]);
  while (a < rows.size() && b < cols.size()) {
    const double m = std::min(r, c);
    if (m > 0) support.push_back({rows[a], cols[b], m});
    r -= m;
    c -= m;
    // The smaller of the two is now exactly zero.
    if (r == 0.0 && ++a < rows.size()) r = mu->mass(rows[a]);
    if (c == 0.0 && ++b < cols.size()) c = nu->mass(cols[b]);
  }
  return TransferencePlan(mu, nu, std::move(support));
}

void write_plan_csv(std::ostream& out, const TransferencePlan& rho) {
  out << "src_id,dst_id,mass\n" << std::setprecision(17);
  for (const PlanEntry& e : rho.support()) out << e.src << "," << e.dst << "," << e.mass << "\n";
}

TransferencePlan read_plan_csv(std::istream& in, MeasurePtr source, MeasurePtr target) {
  std::string line;
  if (!std::getline(in, line) || line != "src_id,dst_id,mass") throw Error("plan CSV: header must be src_id,dst_id,mass");
  std::vector<PlanEntry> support;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 3) throw Error("line " + std::to_string(lineno) + ": expected 3 columns");
    const double src = detail::parse_number(cells[0], lineno);
    const double dst = detail::parse_number(cells[1], lineno);
    if (src < 0 || dst < 0 || src != std::floor(src) || dst != std::floor(dst)) {
      throw Error("line " + std::to_string(lineno) + ": ids must be nonnegative integers");
    }
    support.push_back({static_cast<std::size_t>(src), static_cast<std::size_t>(dst), detail::parse_number(cells[2], lineno)});
  }
  return TransferencePlan(std::move(source), std::move(target), std::move(support));
}

}  // namespace smot
