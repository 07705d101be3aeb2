#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "smot/geometry/subspace.hpp"

namespace smot {

// Orthonormal basis of a Haar-random n-plane in R^d: QR of a standard
// Gaussian d x n matrix with R's diagonal made positive.
Mat haar_plane_sample(int ambient_dim, int n, std::mt19937_64& rng);
Mat haar_plane_sample(int ambient_dim, int n, std::uint64_t seed);

struct AlphaEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  long long samples = 0;
};

// Samples are drawn in fixed chunks with per-chunk seeds derived from `seed`,
// so the estimate does not depend on how chunks are scheduled.
inline constexpr long long kAlphaChunk = 4096;

// Monte Carlo mean of K_E(F)^(1/n) over Haar-random F in G(n, n+k). The
// reference E defaults to the first n coordinate axes.
AlphaEstimate alpha_constant(int n, int k, long long num_samples, std::uint64_t seed,
                             const std::optional<Subspace>& reference = std::nullopt, int threads = 1);

// alpha_{n,1} as a ratio of two integrals over [0, pi], split at pi/2.
double alpha_n1(int n, int quadrature_order = 256);

// Integral of sin^m over [0, pi], exact recurrence.
double wallis_integral(int m);

// Explicit lower bound cos^(1/n)(pi/2 - 1/n) * (1 - (1/(2n)) / W_{n-1}).
double alpha_n1_lower_bound(int n);

}  // namespace smot
