#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qrelent/fluctuation.hpp"

namespace qrelent {

using BigInt = boost::multiprecision::cpp_int;

/// Largest N^{2m} the exhaustive enumeration accepts by default.
inline constexpr std::uint64_t kEnumerationCap = 100'000'000ULL;

struct EnumerationResult {
  BigInt count;
  /// Filled only when requested.
  std::vector<IndexPattern> patterns;
};

/// Patterns (I, J) in {1..N}^{2m} with i_nu != j_nu in which every value that
/// occurs at all occurs at least twice.
///
/// Backtracks over label assignments in first-occurrence order, pruning
/// branches where the open singletons exceed the remaining slots; each
/// canonical labelling stands for N!/(N-k)! patterns with k labels.
EnumerationResult enumerate_I(int m, int n, bool collect_patterns = false,
                              std::uint64_t cap = kEnumerationCap);

/// 2-associated Stirling numbers of the second kind up to row max_n.
class StirlingTable {
 public:
  explicit StirlingTable(int max_n);
  /// Partitions of an n-set into k blocks of size >= 2.
  const BigInt& operator()(int n, int k) const;
  int max_n() const noexcept { return max_n_; }

 private:
  int max_n_;
  std::vector<std::vector<BigInt>> rows_;
};

BigInt stirling2_assoc(int n, int k);

BigInt factorial(int n);
/// N!/(N-k)!, zero for k > N.
BigInt falling_factorial(int n, int k);
BigInt big_pow(const BigInt& base, int exponent);

struct CombinatoricsBound {
  int m = 0;
  int n = 0;
  BigInt exact;
  BigInt stirling_sum;  // sum_{k=1}^m N!/(N-k)! S2(2m, k)
  BigInt c0_bound;      // (8N)^m m!
  BigInt power_bound;   // N^{2m}
  double e_bound = 0.0; // (eN)^m m!, for display
  bool case_small_m = true;  // m <= N
  bool chain_holds = false;
  std::string to_string() const;
};

/// Exact check of the counting chain for |I_{m,N}|.
///
/// For m <= N: exact <= stirling_sum <= (8N)^m m!. For m > N: exact <= N^{2m}
/// <= (eN)^m m!, where the last step is certified with a rational lower bound
/// for e.
CombinatoricsBound bound_check(int m, int n, std::uint64_t cap = kEnumerationCap);

/// sum_m (2 C0 c lambda)^m, or +infinity once the ratio reaches 1.
double partition_series(double c_norm, double lambda, double c0 = 8.0);

/// The series at lambda = (4 C0 c)^{-1}; equals 2.
double series_log2_check(double c_norm, double c0 = 8.0);

}  // namespace qrelent
