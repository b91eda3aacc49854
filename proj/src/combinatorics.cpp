#include "qrelent/combinatorics.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {
namespace {

using BigRational = boost::multiprecision::cpp_rational;

struct Enumerator {
  int m;
  int n;
  int slots;
  bool collect;
  std::vector<int> labels;  // label per slot, order i_1 j_1 i_2 j_2 ...
  std::vector<int> uses;    // occurrences per label
  int singletons = 0;
  int used_labels = 0;
  BigInt count = 0;
  std::vector<IndexPattern> patterns;
  std::vector<BigInt> weights;  // falling factorial by label count

  Enumerator(int m_, int n_, bool collect_)
      : m(m_), n(n_), slots(2 * m_), collect(collect_), labels(2 * m_, -1), uses(2 * m_ + 1, 0) {
    for (int k = 0; k <= slots; ++k) weights.push_back(falling_factorial(n, k));
  }

  void expand(std::vector<int>& assignment, std::vector<bool>& taken, int label) {
    if (label == used_labels) {
      std::vector<int> i(static_cast<std::size_t>(m));
      std::vector<int> j(static_cast<std::size_t>(m));
      for (int nu = 0; nu < m; ++nu) {
        i[static_cast<std::size_t>(nu)] = assignment[static_cast<std::size_t>(labels[2 * nu])];
        j[static_cast<std::size_t>(nu)] = assignment[static_cast<std::size_t>(labels[2 * nu + 1])];
      }
      patterns.emplace_back(std::move(i), std::move(j));
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (taken[static_cast<std::size_t>(v)]) continue;
      taken[static_cast<std::size_t>(v)] = true;
      assignment[static_cast<std::size_t>(label)] = v;
      expand(assignment, taken, label + 1);
      taken[static_cast<std::size_t>(v)] = false;
    }
  }

  void run(int pos) {
    if (singletons > slots - pos) return;  // not enough slots left to pair up
    if (pos == slots) {
      if (singletons != 0 || used_labels > n) return;
      count += weights[static_cast<std::size_t>(used_labels)];
      if (collect) {
        std::vector<int> assignment(static_cast<std::size_t>(used_labels), 0);
        std::vector<bool> taken(static_cast<std::size_t>(n) + 1, false);
        expand(assignment, taken, 0);
      }
      return;
    }
    const int limit = std::min(used_labels + 1, n);
    for (int label = 0; label < limit; ++label) {
      if (pos % 2 == 1 && labels[static_cast<std::size_t>(pos - 1)] == label) continue;  // i_nu != j_nu
      const bool fresh = label == used_labels;
      labels[static_cast<std::size_t>(pos)] = label;
      int& u = uses[static_cast<std::size_t>(label)];
      const int singleton_delta = (u == 0) ? 1 : (u == 1 ? -1 : 0);
      ++u;
      singletons += singleton_delta;
      if (fresh) ++used_labels;
      run(pos + 1);
      if (fresh) --used_labels;
      singletons -= singleton_delta;
      --u;
    }
    labels[static_cast<std::size_t>(pos)] = -1;
  }
};

}  // namespace

BigInt factorial(int n) {
  if (n < 0) throw ArgumentError("factorial: negative argument");
  BigInt out = 1;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

BigInt falling_factorial(int n, int k) {
  if (n < 0 || k < 0) throw ArgumentError("falling_factorial: negative argument");
  if (k > n) return 0;
  BigInt out = 1;
  for (int r = 0; r < k; ++r) out *= (n - r);
  return out;
}

BigInt big_pow(const BigInt& base, int exponent) {
  if (exponent < 0) throw ArgumentError("big_pow: negative exponent");
  BigInt out = 1;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

EnumerationResult enumerate_I(int m, int n, bool collect_patterns, std::uint64_t cap) {
  if (m < 1 || n < 1) throw ArgumentError("enumerate_I: m and N must be positive");
  const BigInt space = big_pow(BigInt(n), 2 * m);
  if (space > BigInt(cap)) {
    std::ostringstream msg;
    msg << "enumerate_I: search space N^{2m} = " << space << " exceeds cap " << cap;
    throw CapacityError(msg.str());
  }
  Enumerator e(m, n, collect_patterns);
  e.run(0);
  EnumerationResult out;
  out.count = e.count;
  out.patterns = std::move(e.patterns);
  return out;
}

StirlingTable::StirlingTable(int max_n) : max_n_(max_n) {
  if (max_n < 0) throw ArgumentError("StirlingTable: max_n must be >= 0");
  rows_.assign(static_cast<std::size_t>(max_n) + 1,
               std::vector<BigInt>(static_cast<std::size_t>(max_n) / 2 + 2, 0));
  rows_[0][0] = 1;
  // S2(n+1, k) = k S2(n, k) + n S2(n-1, k-1)
  for (int nn = 0; nn < max_n; ++nn) {
    for (int k = 1; k < static_cast<int>(rows_[0].size()); ++k) {
      BigInt v = BigInt(k) * rows_[static_cast<std::size_t>(nn)][static_cast<std::size_t>(k)];
      if (nn >= 1) v += BigInt(nn) * rows_[static_cast<std::size_t>(nn - 1)][static_cast<std::size_t>(k - 1)];
      rows_[static_cast<std::size_t>(nn + 1)][static_cast<std::size_t>(k)] = v;
    }
  }
}

const BigInt& StirlingTable::operator()(int n, int k) const {
  static const BigInt zero = 0;
  if (n < 0 || k < 0) throw ArgumentError("StirlingTable: negative index");
  if (n > max_n_) throw ArgumentError("StirlingTable: row beyond table");
  if (k >= static_cast<int>(rows_[0].size())) return zero;
  return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

BigInt stirling2_assoc(int n, int k) {
  if (n < 0 || k < 0) throw ArgumentError("stirling2_assoc: negative index");
  return StirlingTable(n)(n, k);
}

std::string CombinatoricsBound::to_string() const {
  std::ostringstream os;
  os << "m=" << m << " N=" << n << " exact=" << exact;
  if (case_small_m) {
    os << " stirling=" << stirling_sum << " (8N)^m m!=" << c0_bound;
  } else {
    os << " N^2m=" << power_bound << " (eN)^m m!~" << e_bound;
  }
  return os.str();
}

CombinatoricsBound bound_check(int m, int n, std::uint64_t cap) {
  CombinatoricsBound out;
  out.m = m;
  out.n = n;
  out.exact = enumerate_I(m, n, false, cap).count;
  const StirlingTable table(2 * m);
  out.stirling_sum = 0;
  for (int k = 1; k <= m; ++k) out.stirling_sum += falling_factorial(n, k) * table(2 * m, k);
  out.c0_bound = big_pow(BigInt(8 * n), m) * factorial(m);
  out.power_bound = big_pow(BigInt(n), 2 * m);
  out.e_bound = std::pow(std::numbers::e * n, m) * std::tgamma(m + 1.0);
  out.case_small_m = m <= n;
  if (out.case_small_m) {
    out.chain_holds = out.exact <= out.stirling_sum && out.stirling_sum <= out.c0_bound;
  } else {
    // e > 2718281828 / 10^9, so this rational bound is below (eN)^m m!.
    const BigRational e_low(BigInt(2718281828LL), BigInt(1000000000LL));
    BigRational rhs = 1;
    for (int k = 0; k < m; ++k) rhs *= e_low * n;
    rhs *= BigRational(factorial(m));
    out.chain_holds = out.exact <= out.power_bound && BigRational(out.power_bound) <= rhs;
  }
  return out;
}

double partition_series(double c_norm, double lambda, double c0) {
  if (!(c_norm > 0.0) || !(lambda > 0.0) || !(c0 > 0.0)) {
    throw ArgumentError("partition_series: arguments must be positive");
  }
  const double ratio = 2.0 * c0 * c_norm * lambda;
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 - ratio);
}

double series_log2_check(double c_norm, double c0) {
  return partition_series(c_norm, 1.0 / (4.0 * c0 * c_norm), c0);
}

}  // namespace qrelent
