#include "smot/geometry/grassmannian.hpp"

#include <future>
#include <vector>

#include "smot/geometry/projection.hpp"
#include "smot/geometry/quadrature.hpp"

namespace smot {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

ChunkSums run_chunk(int n, int d, long long count, std::uint64_t seed, const Subspace& e) {
  std::mt19937_64 rng(seed);
  ChunkSums s;
  for (long long i = 0; i < count; ++i) {
    const Mat f = haar_plane_sample(d, n, rng);
    const double v = std::pow(plane_cosine(f, e), 1.0 / n);
    s.sum += v;
    s.sum_sq += v * v;
  }
  return s;
}

}  // namespace

Mat haar_plane_sample(int ambient_dim, int n, std::mt19937_64& rng) {
  if (n < 1 || n > ambient_dim) throw Error("haar_plane_sample: need 1 <= n <= ambient_dim");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(ambient_dim, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < ambient_dim; ++r) g(r, c) = gauss(rng);
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(ambient_dim, n);
  const Mat& r = qr.matrixQR();
  for (int c = 0; c < n; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q;
}

Mat haar_plane_sample(int ambient_dim, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_plane_sample(ambient_dim, n, rng);
}

AlphaEstimate alpha_constant(int n, int k, long long num_samples, std::uint64_t seed,
                             const std::optional<Subspace>& reference, int threads) {
  if (n < 2) throw Error("alpha_constant: n must be at least 2");
  if (k < 0) throw Error("alpha_constant: k must be nonnegative");
  if (num_samples < 1000) throw Error("alpha_constant: need at least 1000 samples");
  const int d = n + k;
  const Subspace e = reference ? *reference : Subspace::coordinate(d, n);
  if (e.ambient_dim() != d || e.dim() != n) throw Error("alpha_constant: reference plane has wrong dimensions");
  if (k == 0) return {1.0, 0.0, num_samples};

  const long long chunks = (num_samples + kAlphaChunk - 1) / kAlphaChunk;
  std::vector<ChunkSums> sums(static_cast<std::size_t>(chunks));
  auto work = [&](long long first, long long stride) {
    for (long long c = first; c < chunks; c += stride) {
      const long long count = std::min(kAlphaChunk, num_samples - c * kAlphaChunk);
      sums[static_cast<std::size_t>(c)] = run_chunk(n, d, count, splitmix64(seed ^ splitmix64(c)), e);
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> jobs;
    for (int t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, work, t, threads));
    for (auto& j : jobs) j.get();
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const ChunkSums& s : sums) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  const double count = static_cast<double>(num_samples);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(var / count), num_samples};
}

double alpha_n1(int n, int quadrature_order) {
  if (n < 2) throw Error("alpha_n1: n must be at least 2");
  const GaussLegendreRule rule = gauss_legendre(quadrature_order);
  const double half_pi = std::numbers::pi / 2.0;
  const double inv_n = 1.0 / n;

  // Near r = pi/2 write u = |r - pi/2| = (pi/2) t^n; then |cos r|^(1/n) = sin(u)^(1/n)
  // is smooth in t and Gauss-Legendre converges spectrally on each half.
  auto half_numerator = [&](double sign) {
    return integrate(rule, [&](double t) {
      if (t <= 0.0) return 0.0;
      const double u = half_pi * std::pow(t, n);
      const double r = half_pi + sign * u;
      const double du_dt = half_pi * n * std::pow(t, n - 1);
      return std::pow(std::abs(std::cos(r)), inv_n) * std::pow(std::sin(r), n - 1) * du_dt;
    }, 0.0, 1.0);
  };
  auto sin_power = [&](double r) { return std::pow(std::sin(r), n - 1); };
  const double numerator = half_numerator(-1.0) + half_numerator(1.0);
  const double denominator = integrate(rule, sin_power, 0.0, half_pi) + integrate(rule, sin_power, half_pi, std::numbers::pi);
  return numerator / denominator;
}

double wallis_integral(int m) {
  if (m < 0) throw Error("wallis_integral: negative exponent");
  double w = (m % 2 == 0) ? std::numbers::pi : 2.0;
  for (int j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2) w *= (j - 1.0) / j;
  return w;
}

double alpha_n1_lower_bound(int n) {
  if (n < 2) throw Error("alpha_n1_lower_bound: n must be at least 2");
  const double w = wallis_integral(n - 1);
  return std::pow(std::cos(std::numbers::pi / 2.0 - 1.0 / n), 1.0 / n) * (1.0 - (0.5 / n) / w);
}

}  // namespace smot
