#include <cmath>

#include "doctest.h"
#include "qrelent/errors.hpp"
#include "qrelent/random.hpp"

using namespace qrelent;

TEST_CASE("counter generator is reproducible and stream-separated") {
  CounterRng a(42), b(42), c(43);
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(a.counter() == 100);
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("uniform and normal draws have the right moments") {
  CounterRng rng(9);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    CHECK_FALSE((u < 0.0 || u >= 1.0));
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("random states and unitaries") {
  CounterRng rng(1);
  for (Index dim : {2, 3, 6}) {
    const Matrix u = random_unitary(rng, dim);
    CHECK((u.adjoint() * u - Matrix::Identity(dim, dim)).norm() < 1e-13);
    const HermitianOperator g = random_density(rng, dim, 0.05);
    CHECK(g.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(eigenvalues_hermitian(g.matrix()).minCoeff() >= 0.05 - 1e-14);
    const HermitianOperator f = random_density_with_floor(rng, dim, 0.1);
    CHECK(eigenvalues_hermitian(f.matrix()).minCoeff() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(f.matrix().trace().real() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(random_density(rng, 2, 0.5), ArgumentError);
  CHECK_THROWS_AS(random_density_with_floor(rng, 3, 0.0), ArgumentError);
}
