#include "smot/transport/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smot {
namespace {

enum : signed char { kTree = 0, kLower = 1 };

class Simplex {
 public:
  explicit Simplex(const TransportProblem& p)
      : p_(p), m_(static_cast<std::size_t>(p.supply.size())), n_(static_cast<std::size_t>(p.demand.size())) {
    nodes_ = m_ + n_ + 1;
    root_ = m_ + n_;
    real_arcs_ = m_ * n_;
    const std::size_t arcs = real_arcs_ + m_ + n_;
    flow_.assign(arcs, 0.0);
    state_.assign(arcs, kLower);
    art_cost_ = (std::max(p.max_cost, 0.0) + 1.0) * static_cast<double>(nodes_);
    eps_ = 1e-12 * std::max(1.0, p.max_cost);

    // Artificial arcs: source -> root at cost 0, root -> sink at the big cost.
    for (std::size_t v = 0; v < m_ + n_; ++v) {
      const std::size_t e = real_arcs_ + v;
      state_[e] = kTree;
      flow_[e] = v < m_ ? p.supply(static_cast<Eigen::Index>(v)) : p.demand(static_cast<Eigen::Index>(v - m_));
    }
    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(real_arcs_))));
    rebuild_tree();
  }

  TransportSolution run() {
    TransportSolution out;
    while (true) {
      const std::size_t in = find_entering();
      if (in == kNone) break;
      pivot(in);
      ++out.iterations;
    }
    for (std::size_t e = real_arcs_; e < flow_.size(); ++e) {
      if (flow_[e] > 1e-9 * std::max(1.0, total_supply())) throw Error("network_simplex: infeasible instance");
    }
    finalize_potentials();
    for (std::size_t e = 0; e < real_arcs_; ++e) {
      if (flow_[e] > 0.0) out.flows.push_back({e / n_, e % n_, flow_[e]});
    }
    out.u.resize(static_cast<Eigen::Index>(m_));
    out.v.resize(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < m_; ++i) out.u(static_cast<Eigen::Index>(i)) = -pi_[i];
    for (std::size_t j = 0; j < n_; ++j) out.v(static_cast<Eigen::Index>(j)) = pi_[m_ + j];
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  double total_supply() const { return p_.supply.sum(); }

  std::size_t source(std::size_t e) const {
    if (e < real_arcs_) return e / n_;
    const std::size_t v = e - real_arcs_;
    return v < m_ ? v : root_;
  }
  std::size_t target(std::size_t e) const {
    if (e < real_arcs_) return m_ + e % n_;
    const std::size_t v = e - real_arcs_;
    return v < m_ ? root_ : v;
  }
  double cost(std::size_t e) const {
    if (e < real_arcs_) return p_.cost(e / n_, e % n_);
    return e - real_arcs_ < m_ ? 0.0 : art_cost_;
  }
  double reduced(std::size_t e) const { return cost(e) + pi_[source(e)] - pi_[target(e)]; }

  // Block search over real arcs, resuming where the previous search stopped.
  std::size_t find_entering() {
    std::size_t best = kNone;
    double best_rc = -eps_;
    std::size_t seen = 0;
    for (std::size_t count = 0; count < real_arcs_; ++count) {
      const std::size_t e = (next_arc_ + count) % real_arcs_;
      if (state_[e] == kLower) {
        const double rc = reduced(e);
        if (rc < best_rc || (rc == best_rc && best != kNone && e < best)) {
          best_rc = rc;
          best = e;
        }
      }
      if (++seen == block_) {
        seen = 0;
        if (best != kNone) {
          next_arc_ = (next_arc_ + count + 1) % real_arcs_;
          return best;
        }
      }
    }
    return best;
  }

  void pivot(std::size_t in) {
    const std::size_t first = source(in);
    const std::size_t second = target(in);
    std::size_t a = first;
    std::size_t b = second;
    while (a != b) {
      if (depth_[a] >= depth_[b]) a = parent_[a]; else b = parent_[b];
    }
    const std::size_t join = a;

    // Flow goes join -> ... -> first -> second -> ... -> join. Decreasing arcs
    // bound the step; the `<` / `<=` split keeps the tree strongly feasible.
    double delta = std::numeric_limits<double>::infinity();
    std::size_t out = kNone;
    for (std::size_t u = first; u != join; u = parent_[u]) {
      if (up_[u] && flow_[pred_[u]] < delta) {
        delta = flow_[pred_[u]];
        out = pred_[u];
      }
    }
    for (std::size_t u = second; u != join; u = parent_[u]) {
      if (!up_[u] && flow_[pred_[u]] <= delta) {
        delta = flow_[pred_[u]];
        out = pred_[u];
      }
    }
    if (out == kNone) throw Error("network_simplex: unbounded pivot");

    if (delta > 0.0) {
      flow_[in] += delta;
      for (std::size_t u = first; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? -delta : delta;
      for (std::size_t u = second; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? delta : -delta;
    }
    flow_[out] = 0.0;
    state_[out] = kLower;
    state_[in] = kTree;
    rebuild_tree();
  }

  // Parent pointers, depths and potentials by BFS from the root over tree arcs.
  void rebuild_tree() {
    adj_start_.assign(nodes_ + 1, 0);
    tree_arcs_.clear();
    for (std::size_t e = 0; e < flow_.size(); ++e) {
      if (state_[e] == kTree) tree_arcs_.push_back(e);
    }
    for (std::size_t e : tree_arcs_) {
      ++adj_start_[source(e) + 1];
      ++adj_start_[target(e) + 1];
    }
    for (std::size_t v = 0; v < nodes_; ++v) adj_start_[v + 1] += adj_start_[v];
    adj_.assign(2 * tree_arcs_.size(), 0);
    std::vector<std::size_t> fill(adj_start_.begin(), adj_start_.end() - 1);
    for (std::size_t e : tree_arcs_) {
      adj_[fill[source(e)]++] = e;
      adj_[fill[target(e)]++] = e;
    }
    parent_.assign(nodes_, kNone);
    pred_.assign(nodes_, kNone);
    up_.assign(nodes_, 0);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    std::vector<std::size_t> queue{root_};
    parent_[root_] = root_;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t v = queue[head];
      for (std::size_t k = adj_start_[v]; k < adj_start_[v + 1]; ++k) {
        const std::size_t e = adj_[k];
        const std::size_t w = source(e) == v ? target(e) : source(e);
        if (parent_[w] != kNone) continue;
        parent_[w] = v;
        pred_[w] = e;
        up_[w] = source(e) == w;
        depth_[w] = depth_[v] + 1;
        // Tree arcs have zero reduced cost.
        pi_[w] = up_[w] ? pi_[v] - cost(e) : pi_[v] + cost(e);
        queue.push_back(w);
      }
    }
    if (queue.size() != nodes_) throw Error("network_simplex: basis is not a spanning tree");
  }

  // Recomputes potentials over real tree arcs only so the artificial cost
  // does not pollute them with rounding. Each component hangs off the root by
  // an artificial arc; its base potential follows from that arc.
  void finalize_potentials() {
    std::vector<double> pi(nodes_, 0.0);
    std::vector<char> done(nodes_, 0);
    done[root_] = 1;
    for (std::size_t base = 0; base < m_ + n_; ++base) {
      if (parent_[base] != root_) continue;
      pi[base] = base < m_ ? 0.0 : art_cost_;
      done[base] = 1;
      std::vector<std::size_t> queue{base};
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t v = queue[head];
        for (std::size_t k = adj_start_[v]; k < adj_start_[v + 1]; ++k) {
          const std::size_t e = adj_[k];
          if (e >= real_arcs_) continue;
          const std::size_t w = source(e) == v ? target(e) : source(e);
          if (done[w]) continue;
          done[w] = 1;
          pi[w] = source(e) == w ? pi[v] - cost(e) : pi[v] + cost(e);
          queue.push_back(w);
        }
      }
    }
    // Components attached to the root on the sink side sit art_cost_ higher;
    // shift so the smallest base is zero.
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < m_ + n_; ++v) {
      if (parent_[v] == root_) lo = std::min(lo, pi[v]);
    }
    for (std::size_t v = 0; v < m_ + n_; ++v) pi[v] -= lo;
    pi_ = std::move(pi);
  }

  const TransportProblem& p_;
  std::size_t m_;
  std::size_t n_;
  std::size_t nodes_ = 0;
  std::size_t root_ = 0;
  std::size_t real_arcs_ = 0;
  std::size_t block_ = 0;
  std::size_t next_arc_ = 0;
  double art_cost_ = 0.0;
  double eps_ = 0.0;
  std::vector<double> flow_;
  std::vector<signed char> state_;
  std::vector<std::size_t> tree_arcs_;
  std::vector<std::size_t> adj_start_;
  std::vector<std::size_t> adj_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> pred_;
  std::vector<char> up_;
  std::vector<std::size_t> depth_;
  std::vector<double> pi_;
};

}  // namespace

TransportSolution network_simplex(const TransportProblem& problem) {
  if (problem.supply.size() == 0 || problem.demand.size() == 0) throw Error("network_simplex: empty instance");
  if (!problem.cost) throw Error("network_simplex: cost function is not set");
  Simplex s(problem);
  return s.run();
}

AssignmentSolution hungarian(const Mat& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  if (cost.cols() != cost.rows() || n == 0) throw Error("hungarian: cost matrix must be square and nonempty");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials and matching; column 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> row_of(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  AssignmentSolution out;
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
      ++out.iterations;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  out.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.column_of_row[row_of[j] - 1] = j - 1;
  out.u.resize(static_cast<Eigen::Index>(n));
  out.v.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) out.u(static_cast<Eigen::Index>(i)) = u[i + 1];
  for (std::size_t j = 0; j < n; ++j) out.v(static_cast<Eigen::Index>(j)) = v[j + 1];
  return out;
}

}  // namespace smot
