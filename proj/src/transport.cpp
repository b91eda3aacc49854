#include "qrelent/transport.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <utility>
#include <numeric>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : masses) s += w;
  return s;
}

void DiscreteMeasure::validate() const {
  if (points.size() != masses.size()) throw ArgumentError("DiscreteMeasure: points/masses size mismatch");
  for (double w : masses) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("DiscreteMeasure: masses must be finite and >= 0");
  }
  for (const PhasePoint& z : points) {
    if (!std::isfinite(z[0]) || !std::isfinite(z[1])) throw ArgumentError("DiscreteMeasure: non-finite point");
  }
}

double phase_distance(const PhasePoint& a, const PhasePoint& b, double q_period) {
  double dq = a[0] - b[0];
  if (q_period > 0.0) {
    dq = std::fmod(std::abs(dq), q_period);
    dq = std::min(dq, q_period - dq);
  }
  const double dp = a[1] - b[1];
  return std::hypot(dq, dp);
}

namespace {

// Primal network simplex on a complete bipartite transportation network.
//
// Nodes 0..ns-1 supply, ns..ns+nd-1 demand, root = ns+nd. Arcs 0..ns*nd-1 are
// the real arcs i -> j; then ns artificial arcs i -> root and nd artificial
// arcs root -> j. Every arc is uncapacitated, so non-tree arcs carry no flow.
// Reduced cost of arc a = (u, v): c_a + pi[u] - pi[v].
class NetworkSimplex {
 public:
  NetworkSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                 std::vector<double> cost)
      : ns_(supply.size()), nd_(demand.size()), real_arcs_(ns_ * nd_),
        nodes_(ns_ + nd_ + 1), root_(ns_ + nd_), cost_(std::move(cost)) {
    double max_cost = 0.0;
    for (double c : cost_) max_cost = std::max(max_cost, c);
    art_cost_ = (max_cost + 1.0) * static_cast<double>(nodes_);
    eps_ = 64.0 * DBL_EPSILON * art_cost_;
    const std::size_t arcs = real_arcs_ + ns_ + nd_;
    flow_.assign(arcs, 0.0);
    in_tree_.assign(arcs, false);
    for (std::size_t i = 0; i < ns_; ++i) {
      const std::size_t a = real_arcs_ + i;
      flow_[a] = supply[i];
      in_tree_[a] = true;
      tree_arcs_.push_back(a);
    }
    for (std::size_t j = 0; j < nd_; ++j) {
      const std::size_t a = real_arcs_ + ns_ + j;
      flow_[a] = demand[j];
      in_tree_[a] = true;
      tree_arcs_.push_back(a);
    }
    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs))));
    rebuild_tree();
  }

  long run() {
    long pivots = 0;
    const long limit = 50L * static_cast<long>(flow_.size()) + 1000L;
    std::size_t entering = 0;
    while (find_entering(entering)) {
      pivot(entering);
      if (++pivots > limit) throw ConvergenceError("network simplex: pivot limit reached", 0.0);
    }
    return pivots;
  }

  double flow(std::size_t a) const { return flow_[a]; }
  std::size_t real_arcs() const { return real_arcs_; }
  double artificial_flow() const {
    double s = 0.0;
    for (std::size_t a = real_arcs_; a < flow_.size(); ++a) s += flow_[a];
    return s;
  }

 private:
  std::size_t src(std::size_t a) const {
    if (a < real_arcs_) return a / nd_;
    if (a < real_arcs_ + ns_) return a - real_arcs_;
    return root_;
  }
  std::size_t dst(std::size_t a) const {
    if (a < real_arcs_) return ns_ + a % nd_;
    if (a < real_arcs_ + ns_) return root_;
    return ns_ + (a - real_arcs_ - ns_);
  }
  double cost(std::size_t a) const { return a < real_arcs_ ? cost_[a] : art_cost_; }
  double reduced_cost(std::size_t a) const { return cost(a) + pi_[src(a)] - pi_[dst(a)]; }

  // Parent pointers, depths and potentials from the current tree arc set.
  void rebuild_tree() {
    std::vector<std::vector<std::size_t>> adj(nodes_);
    for (std::size_t a : tree_arcs_) {
      adj[src(a)].push_back(a);
      adj[dst(a)].push_back(a);
    }
    parent_.assign(nodes_, nodes_);
    pred_.assign(nodes_, 0);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    std::vector<bool> seen(nodes_, false);
    std::vector<std::size_t> queue{root_};
    seen[root_] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t x = queue[head];
      for (std::size_t a : adj[x]) {
        const std::size_t y = src(a) == x ? dst(a) : src(a);
        if (seen[y]) continue;
        seen[y] = true;
        parent_[y] = x;
        pred_[y] = a;
        depth_[y] = depth_[x] + 1;
        // Tree arcs have zero reduced cost.
        pi_[y] = src(a) == y ? pi_[x] - cost(a) : pi_[x] + cost(a);
        queue.push_back(y);
      }
    }
    if (queue.size() != nodes_) throw ConsistencyError("network simplex: basis is not a spanning tree");
  }

  bool find_entering(std::size_t& entering) {
    const std::size_t arcs = flow_.size();
    std::size_t scanned = 0;
    while (scanned < arcs) {
      double best = -eps_;
      bool found = false;
      const std::size_t stop = std::min(arcs, scanned + block_);
      for (; scanned < stop; ++scanned) {
        const std::size_t a = next_arc_;
        next_arc_ = (next_arc_ + 1) % arcs;
        if (in_tree_[a]) continue;
        const double rc = reduced_cost(a);
        if (rc < best) {
          best = rc;
          entering = a;
          found = true;
        }
      }
      if (found) return true;
    }
    return false;
  }

  void pivot(std::size_t e) {
    const std::size_t first = src(e);
    const std::size_t second = dst(e);
    // Join node of the cycle.
    std::size_t u = first;
    std::size_t v = second;
    while (u != v) {
      if (depth_[u] >= depth_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    const std::size_t join = u;

    // The cycle is oriented join -> first -> second -> join. On the first
    // side an arc pointing up (child -> parent) is traversed backwards; on
    // the second side an arc pointing down is. Backward arcs lose flow.
    double delta = std::numeric_limits<double>::infinity();
    std::size_t leaving = e;
    for (std::size_t x = first; x != join; x = parent_[x]) {
      const std::size_t a = pred_[x];
      if (src(a) == x && flow_[a] < delta) {
        delta = flow_[a];
        leaving = a;
      }
    }
    for (std::size_t x = second; x != join; x = parent_[x]) {
      const std::size_t a = pred_[x];
      if (dst(a) == x && flow_[a] <= delta) {
        delta = flow_[a];
        leaving = a;
      }
    }
    if (leaving == e) throw ConsistencyError("network simplex: unbounded cycle");

    flow_[e] += delta;
    for (std::size_t x = first; x != join; x = parent_[x]) {
      const std::size_t a = pred_[x];
      flow_[a] += (src(a) == x) ? -delta : delta;
    }
    for (std::size_t x = second; x != join; x = parent_[x]) {
      const std::size_t a = pred_[x];
      flow_[a] += (dst(a) == x) ? -delta : delta;
    }
    flow_[leaving] = 0.0;
    in_tree_[leaving] = false;
    in_tree_[e] = true;
    std::replace(tree_arcs_.begin(), tree_arcs_.end(), leaving, e);
    rebuild_tree();
  }

  std::size_t ns_;
  std::size_t nd_;
  std::size_t real_arcs_;
  std::size_t nodes_;
  std::size_t root_;
  std::vector<double> cost_;
  double art_cost_ = 0.0;
  double eps_ = 0.0;
  std::vector<double> flow_;
  std::vector<bool> in_tree_;
  std::vector<std::size_t> tree_arcs_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> pred_;
  std::vector<std::size_t> depth_;
  std::vector<double> pi_;
  std::size_t block_ = 10;
  std::size_t next_arc_ = 0;
};

}  // namespace

TransportResult solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                const std::function<double(std::size_t, std::size_t)>& cost) {
  double total_s = 0.0;
  double total_d = 0.0;
  for (double w : supply) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("solve_transport: supplies must be >= 0");
    total_s += w;
  }
  for (double w : demand) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("solve_transport: demands must be >= 0");
    total_d += w;
  }
  const double scale = std::max({1.0, total_s, total_d});
  if (std::abs(total_s - total_d) > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "solve_transport: total masses differ (" << total_s << " vs " << total_d << ")";
    throw InfeasibleError(msg.str());
  }

  // Drop empty support points; they never carry flow.
  std::vector<std::size_t> si;
  std::vector<std::size_t> di;
  std::vector<double> s;
  std::vector<double> d;
  for (std::size_t i = 0; i < supply.size(); ++i) {
    if (supply[i] > 0.0) {
      si.push_back(i);
      s.push_back(supply[i]);
    }
  }
  for (std::size_t j = 0; j < demand.size(); ++j) {
    if (demand[j] > 0.0) {
      di.push_back(j);
      d.push_back(demand[j]);
    }
  }
  TransportResult out;
  if (s.empty() || d.empty()) return out;
  // Absorb the admissible rounding mismatch in the largest demand.
  const double mismatch = std::accumulate(s.begin(), s.end(), 0.0) - std::accumulate(d.begin(), d.end(), 0.0);
  *std::max_element(d.begin(), d.end()) += mismatch;

  std::vector<double> c(s.size() * d.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double v = cost(si[i], di[j]);
      if (!std::isfinite(v) || v < 0.0) throw ArgumentError("solve_transport: costs must be finite and >= 0");
      c[i * d.size() + j] = v;
    }
  }
  NetworkSimplex simplex(s, d, c);
  out.pivots = simplex.run();
  if (simplex.artificial_flow() > 1e-12 * scale) {
    throw InfeasibleError("solve_transport: artificial arcs carry flow at optimum");
  }
  for (std::size_t a = 0; a < simplex.real_arcs(); ++a) {
    const double f = simplex.flow(a);
    if (f <= 0.0) continue;
    const std::size_t i = a / d.size();
    const std::size_t j = a % d.size();
    out.cost += f * c[a];
    out.plan.push_back({si[i], di[j], f});
  }
  return out;
}

namespace {

void check_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  mu.validate();
  nu.validate();
}

// Both orders of the arguments are solved as the same linear program, so the
// distances are symmetric bit for bit.
std::pair<const DiscreteMeasure*, const DiscreteMeasure*> canonical(const DiscreteMeasure& mu,
                                                                    const DiscreteMeasure& nu) {
  if (std::tie(nu.points, nu.masses) < std::tie(mu.points, mu.masses)) return {&nu, &mu};
  return {&mu, &nu};
}

}  // namespace

double dist1(const DiscreteMeasure& mu_in, const DiscreteMeasure& nu_in, double q_period) {
  check_pair(mu_in, nu_in);
  const auto [a, b] = canonical(mu_in, nu_in);
  const DiscreteMeasure& mu = *a;
  const DiscreteMeasure& nu = *b;
  return solve_transport(mu.masses, nu.masses,
                         [&](std::size_t i, std::size_t j) {
                           return std::min(1.0, phase_distance(mu.points[i], nu.points[j], q_period));
                         })
      .cost;
}

double dist_mk2(const DiscreteMeasure& mu_in, const DiscreteMeasure& nu_in, double q_period) {
  check_pair(mu_in, nu_in);
  const auto [a, b] = canonical(mu_in, nu_in);
  const DiscreteMeasure& mu = *a;
  const DiscreteMeasure& nu = *b;
  const double c = solve_transport(mu.masses, nu.masses,
                                   [&](std::size_t i, std::size_t j) {
                                     const double r = phase_distance(mu.points[i], nu.points[j], q_period);
                                     return r * r;
                                   })
                       .cost;
  return std::sqrt(std::max(c, 0.0));
}

double total_variation(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  check_pair(mu, nu);
  std::map<PhasePoint, double> diff;
  for (std::size_t i = 0; i < mu.size(); ++i) diff[mu.points[i]] += mu.masses[i];
  for (std::size_t j = 0; j < nu.size(); ++j) diff[nu.points[j]] -= nu.masses[j];
  double s = 0.0;
  for (const auto& [z, w] : diff) s += std::abs(w);
  return 0.5 * s;
}

}  // namespace qrelent
