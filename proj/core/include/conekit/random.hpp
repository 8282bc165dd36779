#pragma once

#include <cstdint>
#include <random>

#include "conekit/types.hpp"

namespace conekit {

/// SplitMix64 finalizer; maps (seed, index) to an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded source of the random ensembles used by samplers and suites.
/// Deterministic for a fixed seed on a given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  int uniform_int(int lo, int hi);  // inclusive bounds
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

  Vector ginibre_vector(int n);
  Matrix ginibre(int rows, int cols);
  Vector unit_vector(int n);
  /// Haar-distributed unitary (QR of a Ginibre matrix, phases fixed).
  Matrix haar_unitary(int n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Unit product vector u (x) v with both factors Haar-random.
CVec random_product_vector(Rng& rng, const BipartiteDims& dims);

/// Unit vector sum_{l<r} x_l (x) y_l with Gaussian factors; SR = r almost surely.
CVec random_vector_with_schmidt_rank(Rng& rng, const BipartiteDims& dims, int r);

/// sum_{l<k} G_l (x) H_l with Ginibre factors; OSR = k almost surely (k <= min(m^2, n^2)).
CMat random_operator_with_osr(Rng& rng, const BipartiteDims& dims, int k);

/// Trace-one Wishart matrix G^* G with G a rank x M Ginibre matrix.
CMat random_wishart(Rng& rng, const BipartiteDims& dims, int rank);

/// Trace-one separable matrix with `terms` weighted product projectors.
CMat random_separable(Rng& rng, const BipartiteDims& dims, int terms);

/// Trace-one PPT matrix: rejection-sampled square Wishart; when no draw is
/// PPT within `max_draws`, the last draw is mixed with the maximally mixed
/// state to a random point inside the PPT region.
CMat random_ppt(Rng& rng, const BipartiteDims& dims, int max_draws = 64);

}  // namespace conekit
