#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qrelent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative Hermiticity tolerance: ||A - A*||_op <= tol * ||A||_op.
inline constexpr double kHermiticityTol = 1e-10;
/// Spectrum at or below this value is outside the domain of log and sqrt.
inline constexpr double kEigenvalueFloor = 1e-13;

/// Dense matrix that is Hermitian within a relative tolerance.
///
/// Construction measures the defect ||A - A*||_op and rejects the matrix if it
/// exceeds the tolerance. The stored matrix is kept as given; nothing is
/// symmetrized behind the caller's back (use hermitian_part() to opt in).
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(Matrix m, double rel_tol = kHermiticityTol);

  static HermitianOperator identity(Index dim);
  static HermitianOperator zero(Index dim);
  static HermitianOperator diagonal(const RealVector& diag);

  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }  // NOLINT
  Index dim() const noexcept { return m_.rows(); }
  double hermiticity_defect() const noexcept { return defect_; }

 private:
  struct Unchecked {};
  HermitianOperator(Matrix m, double defect, Unchecked)
      : m_(std::move(m)), defect_(defect) {}
  friend HermitianOperator hermitian_part(const Matrix& a);

  Matrix m_;
  double defect_ = 0.0;
};

/// (A + A*) / 2, the explicit opt-in symmetrization.
HermitianOperator hermitian_part(const Matrix& a);

/// ||A - A*||_op (Frobenius upper bound above dimension 256).
double hermiticity_defect(const Matrix& a);

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns

  Matrix reconstruct() const;
  /// U diag(f(lambda)) U*
  Matrix apply(const std::function<double(double)>& f) const;
};

SpectralDecomposition eig_hermitian(const HermitianOperator& a);
RealVector eigenvalues_hermitian(const Matrix& a);

enum class MatrixFunction { Log, Exp, Sqrt };

HermitianOperator matrix_function(const HermitianOperator& a, MatrixFunction f,
                                  double eigenvalue_floor = kEigenvalueFloor);

/// Frechet derivative of the matrix logarithm at X in direction B, computed
/// with first divided differences of log in the eigenbasis of X.
HermitianOperator frechet_log(const HermitianOperator& x, const HermitianOperator& b,
                              double eigenvalue_floor = kEigenvalueFloor);

/// Same derivative from the resolvent integral
///   int_0^inf (X + s)^-1 B (X + s)^-1 ds
/// mapped to u in (0,1) by s = u / (1 - u) and integrated with Gauss-Legendre.
/// The rule is accepted only if doubling the node count changes the result by
/// less than rel_tol (relative to max(1, ||result||)).
HermitianOperator frechet_log_quadrature(const HermitianOperator& x,
                                         const HermitianOperator& b, int nodes,
                                         double rel_tol = 1e-10);

/// (log a - log b) / (a - b), with limit 1/a on the diagonal.
double log_divided_difference(double a, double b);

Matrix commutator(const Matrix& a, const Matrix& b);

/// lhs <= rhs + slack, with margin = rhs - lhs.
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;

  bool holds() const noexcept { return lhs <= rhs + slack; }
  double margin() const noexcept { return rhs - lhs; }
};

/// tr e^{X+Y} <= tr(e^X e^Y).
InequalityCheck golden_thompson_check(const HermitianOperator& x,
                                      const HermitianOperator& y);

double operator_norm(const Matrix& a);
double operator_norm(const HermitianOperator& a);
double trace_norm(const Matrix& a);
double trace_norm(const HermitianOperator& a);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Gauss-Legendre nodes and weights on (0, 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre_unit(int n);

}  // namespace qrelent
