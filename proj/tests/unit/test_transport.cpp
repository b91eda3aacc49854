#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qrelent/errors.hpp"
#include "qrelent/random.hpp"
#include "qrelent/transport.hpp"

using namespace qrelent;

namespace {

DiscreteMeasure point_mass(double q, double p) { return DiscreteMeasure{{{q, p}}, {1.0}}; }

DiscreteMeasure random_measure(CounterRng& rng, std::size_t atoms, double spread) {
  DiscreteMeasure mu;
  double total = 0.0;
  for (std::size_t a = 0; a < atoms; ++a) {
    mu.points.push_back({rng.uniform(-spread, spread), rng.uniform(-spread, spread)});
    mu.masses.push_back(rng.uniform(0.05, 1.0));
    total += mu.masses.back();
  }
  for (double& w : mu.masses) w /= total;
  return mu;
}

DiscreteMeasure uniform_measure(CounterRng& rng, std::size_t atoms, double spread) {
  DiscreteMeasure mu = random_measure(rng, atoms, spread);
  for (double& w : mu.masses) w = 1.0 / static_cast<double>(atoms);
  return mu;
}

}  // namespace

TEST_CASE("dist1 examples") {
  CounterRng rng(173);
  const DiscreteMeasure mu = random_measure(rng, 6, 1.0);
  CHECK(dist1(mu, mu) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(dist1(point_mass(0.0, 0.0), point_mass(0.3, 0.0)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(dist1(point_mass(0.0, 0.0), point_mass(3.0, 4.0)) == 1.0);
  CHECK(dist_mk2(point_mass(0.0, 0.0), point_mass(3.0, 4.0)) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("transport agrees with the assignment oracle") {
  CounterRng rng(179);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
    const DiscreteMeasure mu = uniform_measure(rng, n, 1.0);
    const DiscreteMeasure nu = uniform_measure(rng, n, 1.0);
    std::vector<std::vector<double>> c1(n, std::vector<double>(n)), c2 = c1;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const double dq = mu.points[a][0] - nu.points[b][0], dp = mu.points[a][1] - nu.points[b][1];
        const double dist = std::sqrt(dq * dq + dp * dp);
        c1[a][b] = std::min(1.0, dist);
        c2[a][b] = dist * dist;
      }
    }
    CHECK(dist1(mu, nu) == doctest::Approx(oracle::assignment_brute(c1)).epsilon(1e-12));
    CHECK(dist_mk2(mu, nu) == doctest::Approx(std::sqrt(oracle::assignment_brute(c2))).epsilon(1e-12));
  }
}

TEST_CASE("solve_transport returns a feasible plan") {
  CounterRng rng(181);
  const std::vector<double> supply = {0.2, 0.5, 0.3};
  const std::vector<double> demand = {0.6, 0.1, 0.1, 0.2};
  std::vector<std::vector<double>> cost(3, std::vector<double>(4));
  for (auto& row : cost)
    for (double& c : row) c = rng.uniform();
  const TransportResult r = solve_transport(supply, demand, [&](std::size_t i, std::size_t j) { return cost[i][j]; });
  std::vector<double> out(3, 0.0), in(4, 0.0);
  double total = 0.0;
  for (const auto& e : r.plan) {
    CHECK(e.mass >= 0.0);
    out[e.from] += e.mass;
    in[e.to] += e.mass;
    total += e.mass * cost[e.from][e.to];
  }
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(supply[i]).epsilon(1e-12));
  for (std::size_t j = 0; j < 4; ++j) CHECK(in[j] == doctest::Approx(demand[j]).epsilon(1e-12));
  CHECK(total == doctest::Approx(r.cost).epsilon(1e-12));
  CHECK_THROWS_AS(solve_transport({1.0}, {0.5}, [](std::size_t, std::size_t) { return 0.0; }), InfeasibleError);
  CHECK_THROWS_AS(solve_transport({1.0}, {1.0}, [](std::size_t, std::size_t) { return -1.0; }), ArgumentError);
}

TEST_CASE("dist1 is a metric on random triples") {
  CounterRng rng(191);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteMeasure a = random_measure(rng, 5, 1.0);
    const DiscreteMeasure b = random_measure(rng, 6, 1.0);
    const DiscreteMeasure c = random_measure(rng, 4, 1.0);
    const double ab = dist1(a, b), ba = dist1(b, a), bc = dist1(b, c), ac = dist1(a, c);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(ac <= ab + bc + 1e-10);
  }
}

TEST_CASE("dist1 is dominated by total variation and dist_mk2") {
  CounterRng rng(193);
  for (int trial = 0; trial < 20; ++trial) {
    // Shared support so total variation sees more than disjoint atoms.
    DiscreteMeasure mu = random_measure(rng, 6, 0.4);
    DiscreteMeasure nu = mu;
    double total = 0.0;
    for (double& w : nu.masses) {
      w *= rng.uniform(0.2, 2.0);
      total += w;
    }
    for (double& w : nu.masses) w /= total;
    const double d1 = dist1(mu, nu);
    const double tv = total_variation(mu, nu);
    const double mk2 = dist_mk2(mu, nu);
    CHECK(d1 <= tv + 1e-12);
    CHECK(d1 <= mk2 + 1e-12);
    CHECK(d1 <= std::min(tv, mk2) + 1e-12);
  }
  CHECK(total_variation(point_mass(0, 0), point_mass(1, 0)) == 1.0);
}

TEST_CASE("dist_mk2 translation and torus distance") {
  CounterRng rng(197);
  const DiscreteMeasure mu = random_measure(rng, 5, 1.0);
  DiscreteMeasure shifted = mu;
  for (auto& z : shifted.points) z[1] += 0.25;
  CHECK(dist_mk2(mu, shifted) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dist1(point_mass(0.05, 0.0), point_mass(0.95, 0.0), 1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(phase_distance({0.0, 0.0}, {0.3, 0.4}) == doctest::Approx(0.5));
  const DiscreteMeasure bad{{{0.0, 0.0}}, {-1.0}};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}
