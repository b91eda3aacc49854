#pragma once

#include <array>
#include <functional>
#include <vector>

namespace qrelent {

using PhasePoint = std::array<double, 2>;  // (q, p)

/// Finitely supported measure on phase space.
struct DiscreteMeasure {
  std::vector<PhasePoint> points;
  std::vector<double> masses;

  std::size_t size() const noexcept { return points.size(); }
  double total_mass() const;
  /// Throws ArgumentError on size mismatch, negative or non-finite masses.
  void validate() const;
};

/// Euclidean |z - z'| in the (q, p) plane. With q_period > 0 the q-difference
/// is taken modulo q_period (flat torus in q).
double phase_distance(const PhasePoint& a, const PhasePoint& b, double q_period = 0.0);

struct TransportPlanEntry {
  std::size_t from = 0;
  std::size_t to = 0;
  double mass = 0.0;
};

struct TransportResult {
  double cost = 0.0;
  std::vector<TransportPlanEntry> plan;
  long pivots = 0;
};

/// Exact min-cost transport between `supply` and `demand` (equal totals) by
/// the primal network simplex method on the complete bipartite graph.
/// cost(i, j) must be finite and nonnegative.
TransportResult solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                const std::function<double(std::size_t, std::size_t)>& cost);

/// Optimal transport cost with ground cost min(1, |z - z'|).
double dist1(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double q_period = 0.0);
/// Square root of the optimal transport cost with ground cost |z - z'|^2.
double dist_mk2(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double q_period = 0.0);
/// (1/2) sum |mu - nu| over the union of supports (points matched exactly).
double total_variation(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace qrelent
