#include "qrelent/random.hpp"

#include <cmath>
#include <numbers>

#include "qrelent/errors.hpp"

namespace qrelent {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return splitmix64(seed_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex CounterRng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + kGolden));
}

HermitianOperator random_hermitian(CounterRng& rng, Index dim) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  return hermitian_part(g);
}

Matrix random_unitary(CounterRng& rng, Index dim) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution does not depend on the QR convention.
  for (Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

HermitianOperator random_density(CounterRng& rng, Index dim, double min_eigenvalue) {
  if (dim < 1) throw ArgumentError("random_density: dim must be positive");
  if (min_eigenvalue < 0.0 || min_eigenvalue * static_cast<double>(dim) >= 1.0) {
    throw ArgumentError("random_density: min_eigenvalue must lie in [0, 1/dim)");
  }
  RealVector p(dim);
  for (Index k = 0; k < dim; ++k) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    p(k) = -std::log(u);  // exponential weights give a flat Dirichlet draw
  }
  p /= p.sum();
  const double free_mass = 1.0 - static_cast<double>(dim) * min_eigenvalue;
  const RealVector spectrum = RealVector::Constant(dim, min_eigenvalue) + free_mass * p;
  const Matrix u = random_unitary(rng, dim);
  return hermitian_part(u * spectrum.cast<Complex>().asDiagonal() * u.adjoint());
}

HermitianOperator random_density_with_floor(CounterRng& rng, Index dim, double min_eigenvalue) {
  if (dim < 2) throw ArgumentError("random_density_with_floor: dim must be at least 2");
  if (min_eigenvalue <= 0.0 || min_eigenvalue * static_cast<double>(dim) >= 1.0) {
    throw ArgumentError("random_density_with_floor: min_eigenvalue must lie in (0, 1/dim)");
  }
  RealVector p = RealVector::Zero(dim);
  for (Index k = 1; k < dim; ++k) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    p(k) = -std::log(u);
  }
  p /= p.sum();
  const double free_mass = 1.0 - static_cast<double>(dim) * min_eigenvalue;
  const RealVector spectrum = RealVector::Constant(dim, min_eigenvalue) + free_mass * p;
  const Matrix u = random_unitary(rng, dim);
  return hermitian_part(u * spectrum.cast<Complex>().asDiagonal() * u.adjoint());
}

}  // namespace qrelent
