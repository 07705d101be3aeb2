#pragma once

#include <cstdint>

#include "smot/geometry/subspace.hpp"
#include "smot/measures/measure.hpp"

namespace smot {

enum class BallSampling { Grid, MonteCarlo };

// Uniform atoms in the closed unit ball of E, in ambient coordinates.
struct BallTarget {
  Subspace subspace;
  MeasurePtr measure;
  Mat coordinates;  // n x N coordinates in the basis of E
};

// Grid mode picks the lattice spacing so that roughly num_atoms lattice
// points fall in the ball; Monte Carlo mode rejection-samples the cube.
BallTarget ball_target(const Subspace& e, std::size_t num_atoms, BallSampling mode, std::uint64_t seed = 0);

// Lattice h Z^n intersected with the ball.
BallTarget ball_target_grid(const Subspace& e, double spacing);

}  // namespace smot
