#pragma once

#include <cstdint>

#include "qrelent/linalg.hpp"

namespace qrelent {

/// Counter-based generator: draw k of stream `seed` is splitmix64(seed, k).
///
/// The output sequence depends only on (seed, draw count), never on the
/// standard library, so reports built from it are reproducible bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal by the Box-Muller transform.
  double normal() noexcept;
  Complex complex_normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derive an independent stream key from a parent seed and a label index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// GUE-like Hermitian matrix (entries complex normal, then Hermitian part).
HermitianOperator random_hermitian(CounterRng& rng, Index dim);

/// Density operator with smallest eigenvalue >= min_eigenvalue.
///
/// The spectrum is min_eigenvalue + (1 - dim*min_eigenvalue)*p with p a random
/// probability vector, in a random eigenbasis.
HermitianOperator random_density(CounterRng& rng, Index dim, double min_eigenvalue = 0.0);

/// Density operator whose smallest eigenvalue is exactly min_eigenvalue.
HermitianOperator random_density_with_floor(CounterRng& rng, Index dim, double min_eigenvalue);

/// Haar-like random unitary from the QR factorization of a Ginibre matrix.
Matrix random_unitary(CounterRng& rng, Index dim);

}  // namespace qrelent
