#pragma once

#include <functional>
#include <vector>

#include "smot/common.hpp"

namespace smot {

// Balanced transportation problem on a complete bipartite graph:
// minimize sum c(i, j) f(i, j) subject to row sums = supply, column sums = demand.
struct TransportProblem {
  Vec supply;
  Vec demand;
  std::function<double(std::size_t, std::size_t)> cost;
  double max_cost = 0.0;  // upper bound on |cost|, used for the artificial arcs
};

struct TransportSolution {
  struct Flow {
    std::size_t i;
    std::size_t j;
    double amount;
  };
  std::vector<Flow> flows;  // positive flows, sorted by (i, j)
  Vec u;                    // row duals
  Vec v;                    // column duals: u_i + v_j <= c(i, j)
  long long iterations = 0;
};

// Primal network simplex with an artificial root, block-search pricing and the
// strongly feasible leaving-arc rule. Ties in pricing go to the lowest index.
TransportSolution network_simplex(const TransportProblem& problem);

// O(n^3) shortest-augmenting-path assignment on a square cost matrix.
// Returns the column matched to each row plus duals u, v with
// u_i + v_j <= c(i, j) and equality on the assignment.
struct AssignmentSolution {
  std::vector<std::size_t> column_of_row;
  Vec u;
  Vec v;
  long long iterations = 0;
};
AssignmentSolution hungarian(const Mat& cost);

}  // namespace smot
