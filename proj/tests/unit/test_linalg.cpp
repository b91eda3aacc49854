#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qrelent/errors.hpp"
#include "qrelent/linalg.hpp"
#include "qrelent/random.hpp"

using namespace qrelent;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

HermitianOperator diag2(double a, double b) {
  RealVector v(2);
  v << a, b;
  return HermitianOperator::diagonal(v);
}

}  // namespace

TEST_CASE("HermitianOperator rejects non-Hermitian input and never symmetrizes silently") {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(HermitianOperator{m}, ArgumentError);
  const HermitianOperator h = hermitian_part(m);
  CHECK(h.matrix()(0, 1) == Complex(1.0, 0.0));
  Matrix near = pauli_x();
  near(0, 1) += 1e-13;
  const HermitianOperator kept(near);
  CHECK(kept.matrix()(0, 1) == near(0, 1));
  CHECK(kept.hermiticity_defect() > 0.0);
}

TEST_CASE("eig_hermitian examples") {
  SUBCASE("identity of dimension 3") {
    const auto e = eig_hermitian(HermitianOperator::identity(3));
    for (Index k = 0; k < 3; ++k) CHECK(e.eigenvalues(k) == doctest::Approx(1.0));
  }
  SUBCASE("diag(1,-1) sorted ascending") {
    const auto e = eig_hermitian(diag2(1.0, -1.0));
    CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
  }
  SUBCASE("random seed 7, dimension 8 reconstructs") {
    CounterRng rng(7);
    const HermitianOperator a = random_hermitian(rng, 8);
    const auto e = eig_hermitian(a);
    CHECK(operator_norm(Matrix(e.reconstruct() - a.matrix())) < 1e-12 * operator_norm(a));
  }
}

TEST_CASE("spectral reconstruction and unitarity up to dimension 256") {
  for (Index dim : {1, 2, 5, 17, 64, 256}) {
    CounterRng rng(100 + static_cast<std::uint64_t>(dim));
    const HermitianOperator a = random_hermitian(rng, dim);
    const auto e = eig_hermitian(a);
    const double scale = operator_norm(a);
    CHECK(operator_norm(Matrix(e.reconstruct() - a.matrix())) < 1e-12 * scale);
    const Matrix u = e.eigenvectors;
    CHECK(operator_norm(Matrix(u.adjoint() * u - Matrix::Identity(dim, dim))) < 1e-12);
  }
}

TEST_CASE("matrix_function examples and domain errors") {
  CHECK(operator_norm(matrix_function(HermitianOperator::identity(3), MatrixFunction::Log)) < 1e-15);
  const HermitianOperator e = matrix_function(diag2(0.0, std::log(2.0)), MatrixFunction::Exp);
  CHECK(e.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(e.matrix()(1, 1).real() == doctest::Approx(2.0));
  const HermitianOperator l = matrix_function(diag2(0.3, 0.7), MatrixFunction::Log);
  CHECK(l.matrix()(0, 0).real() == doctest::Approx(std::log(0.3)).epsilon(1e-14));
  CHECK(l.matrix()(1, 1).real() == doctest::Approx(std::log(0.7)).epsilon(1e-14));

  try {
    matrix_function(diag2(1e-14, 0.5), MatrixFunction::Log);
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    CHECK(err.eigenvalue() == doctest::Approx(1e-14));
  }
  CHECK_THROWS_AS(matrix_function(diag2(-0.1, 0.5), MatrixFunction::Sqrt), DomainError);
  CHECK_NOTHROW(matrix_function(diag2(-0.1, 0.5), MatrixFunction::Exp));
}

TEST_CASE("matrix_function agrees with Schur-Pade oracles on random inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed);
    const Index dim = 2 + static_cast<Index>(seed % 7);
    const HermitianOperator x = random_density(rng, dim, 0.01);
    const HermitianOperator h = random_hermitian(rng, dim);
    CHECK(oracle::op_norm(matrix_function(x, MatrixFunction::Log).matrix() - oracle::logm(x.matrix())) < 1e-10);
    CHECK(oracle::op_norm(matrix_function(h, MatrixFunction::Exp).matrix() - oracle::expm(h.matrix())) <
          1e-10 * oracle::op_norm(oracle::expm(h.matrix())));
    const Matrix s = matrix_function(x, MatrixFunction::Sqrt);
    CHECK(oracle::op_norm(s * s - x.matrix()) < 1e-13);
  }
}

TEST_CASE("frechet_log examples") {
  SUBCASE("diag(a,b) with flip direction gives the divided difference") {
    const double a = 0.3, b = 0.7;
    const HermitianOperator dir(pauli_x());
    const HermitianOperator d = frechet_log(diag2(a, b), dir);
    // integral_0^inf ds / ((a+s)(b+s)) = (log a - log b) / (a - b)
    const double expected = (std::log(a) - std::log(b)) / (a - b);
    CHECK(d.matrix()(0, 1).real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(d.matrix()(0, 0)) < 1e-15);
    const HermitianOperator q = frechet_log_quadrature(diag2(a, b), dir, 200);
    CHECK(operator_norm(Matrix(q.matrix() - d.matrix())) < 1e-8);
  }
  SUBCASE("commuting direction gives X^{-1} B") {
    const HermitianOperator x = diag2(0.25, 2.0);
    const HermitianOperator b = diag2(1.5, -0.5);
    const HermitianOperator d = frechet_log(x, b);
    CHECK(d.matrix()(0, 0).real() == doctest::Approx(6.0));
    CHECK(d.matrix()(1, 1).real() == doctest::Approx(-0.25));
  }
  SUBCASE("quadrature at X = 1 returns B") {
    CounterRng rng(4);
    const HermitianOperator b = random_hermitian(rng, 3);
    const HermitianOperator q = frechet_log_quadrature(HermitianOperator::identity(3), b, 8);
    CHECK(operator_norm(Matrix(q.matrix() - b.matrix())) < 1e-12);
  }
  SUBCASE("log divided difference near the diagonal") {
    CHECK(log_divided_difference(0.5, 0.5) == doctest::Approx(2.0));
    const double a = 0.5, b = 0.5 + 1e-9;
    CHECK(log_divided_difference(a, b) == doctest::Approx(1.0 / (0.5 + 5e-10)).epsilon(1e-12));
  }
}

TEST_CASE("frechet_log matches quadrature and finite differences on 50 random seeds") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(1000 + seed);
    const Index dim = 2 + static_cast<Index>(seed % 7);
    const HermitianOperator x = random_density(rng, dim, 0.02);
    const HermitianOperator b = random_hermitian(rng, dim);
    const Matrix d = frechet_log(x, b);
    const Matrix q = frechet_log_quadrature(x, b, 96);
    const Matrix fd = oracle::frechet_log_fd(x.matrix(), b.matrix());
    const double scale = std::max(1.0, oracle::op_norm(d));
    CHECK(oracle::op_norm(d - q) < 1e-8 * scale);
    CHECK(oracle::op_norm(d - fd) < 1e-5 * scale);
  }
}

TEST_CASE("frechet_log_quadrature detects too few nodes") {
  const HermitianOperator x = diag2(1e-4, 1.0);
  const HermitianOperator b(pauli_x());
  CHECK_THROWS_AS(frechet_log_quadrature(x, b, 2), ConvergenceError);
}

TEST_CASE("tr(X D log_X[B]) = tr B") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed);
    const Index dim = 2 + static_cast<Index>(seed % 5);
    const HermitianOperator x = random_density(rng, dim, 0.01);
    const HermitianOperator b = random_hermitian(rng, dim);
    const Complex lhs = (x.matrix() * frechet_log(x, b).matrix()).trace();
    CHECK(std::abs(lhs - b.matrix().trace()) < 1e-10);
  }
}

TEST_CASE("commutator-log identity i[B, log X] = D log_X[i[B, X]]") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(500 + seed);
    const Index dim = 2 + static_cast<Index>(seed % 7);
    const HermitianOperator x = random_density(rng, dim, 0.02);
    const HermitianOperator b = random_hermitian(rng, dim);
    const Complex i(0.0, 1.0);
    const Matrix lhs = i * commutator(b.matrix(), oracle::logm(x.matrix()));
    const HermitianOperator dir = hermitian_part(i * commutator(b.matrix(), x.matrix()));
    CHECK(operator_norm(Matrix(lhs - frechet_log(x, dir).matrix())) < 1e-9);
  }
}

TEST_CASE("commutator examples") {
  CounterRng rng(3);
  const Matrix a = random_hermitian(rng, 4);
  CHECK(operator_norm(commutator(a, a)) == 0.0);
  CHECK(operator_norm(commutator(diag2(1, 2), diag2(3, 4))) == 0.0);
  const Matrix c = commutator(pauli_x(), pauli_z());
  CHECK(operator_norm(Matrix(c - Complex(0, -2) * pauli_y())) < 1e-15);
}

TEST_CASE("Golden-Thompson") {
  SUBCASE("commuting pair and X = Y give equality") {
    const auto c = golden_thompson_check(diag2(0.3, -1.0), diag2(2.0, 0.5));
    CHECK(c.lhs == doctest::Approx(c.rhs).epsilon(1e-14));
    CounterRng rng(8);
    const HermitianOperator x = random_hermitian(rng, 4);
    const auto e = golden_thompson_check(x, x);
    CHECK(e.lhs == doctest::Approx(e.rhs).epsilon(1e-13));
  }
  SUBCASE("strict for random non-commuting pairs, equality iff commuting") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      CounterRng rng(seed);
      const HermitianOperator x = random_hermitian(rng, 4);
      const HermitianOperator y = random_hermitian(rng, 4);
      const auto c = golden_thompson_check(x, y);
      CHECK(c.lhs <= c.rhs + 1e-12 * std::max(1.0, c.rhs));
      CHECK(c.holds());
      const double lhs_oracle = oracle::expm(x.matrix() + y.matrix()).trace().real();
      CHECK(c.lhs == doctest::Approx(lhs_oracle).epsilon(1e-11));
      if (operator_norm(commutator(x, y)) > 1e-12) CHECK(c.margin() > 0.0);
    }
  }
}

TEST_CASE("norms") {
  CHECK(operator_norm(HermitianOperator::identity(5)) == doctest::Approx(1.0));
  CHECK(trace_norm(HermitianOperator::identity(5)) == doctest::Approx(5.0));
  CHECK(operator_norm(diag2(0.3, -0.7)) == doctest::Approx(0.7));
  CHECK(trace_norm(diag2(0.3, -0.7)) == doctest::Approx(1.0));
  CounterRng rng(12);
  Vector v(4);
  for (Index k = 0; k < 4; ++k) v(k) = rng.complex_normal();
  v.normalize();
  const Matrix p = v * v.adjoint();
  CHECK(operator_norm(p) == doctest::Approx(1.0));
  CHECK(trace_norm(p) == doctest::Approx(1.0));
  CHECK(operator_norm(Matrix(p)) == doctest::Approx(1.0));
}

TEST_CASE("kron matches the block formula") {
  CounterRng rng(5);
  const Matrix a = random_hermitian(rng, 2);
  const Matrix b = random_hermitian(rng, 3);
  CHECK(oracle::op_norm(kron(a, b) - oracle::kron(a, b)) == 0.0);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const QuadratureRule r = gauss_legendre_unit(10);
  for (int p = 0; p < 20; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * std::pow(r.nodes[k], p);
    CHECK(acc == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
  }
}
