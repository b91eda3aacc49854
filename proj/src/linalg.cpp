#include "qrelent/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {
namespace {

constexpr Index kExactNormDim = 256;

double hermitian_norm_estimate(const Matrix& a) {
  const Matrix h = 0.5 * (a + a.adjoint());
  if (h.rows() <= kExactNormDim) {
    return eigenvalues_hermitian(h).cwiseAbs().maxCoeff();
  }
  // ||H||_op >= ||H||_F / sqrt(n): a conservative (small) estimate.
  return h.norm() / std::sqrt(static_cast<double>(h.rows()));
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix m, double rel_tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw ArgumentError("HermitianOperator: matrix is not square");
  }
  if (!m_.allFinite()) {
    throw ArgumentError("HermitianOperator: non-finite entries");
  }
  defect_ = qrelent::hermiticity_defect(m_);
  if (m_.size() == 0 || defect_ == 0.0) return;
  const double scale = hermitian_norm_estimate(m_);
  if (defect_ > rel_tol * scale) {
    std::ostringstream msg;
    msg << "HermitianOperator: hermiticity defect " << defect_ << " exceeds "
        << rel_tol << " * " << scale;
    throw ArgumentError(msg.str());
  }
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim), 0.0, Unchecked{});
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(Matrix::Zero(dim, dim), 0.0, Unchecked{});
}

HermitianOperator HermitianOperator::diagonal(const RealVector& diag) {
  return HermitianOperator(diag.cast<Complex>().asDiagonal().toDenseMatrix(), 0.0,
                           Unchecked{});
}

HermitianOperator hermitian_part(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ArgumentError("hermitian_part: matrix is not square");
  }
  return HermitianOperator(0.5 * (a + a.adjoint()), 0.0, HermitianOperator::Unchecked{});
}

double hermiticity_defect(const Matrix& a) {
  const Matrix anti = a - a.adjoint();
  if (anti.rows() <= kExactNormDim) {
    // i(A - A*) is Hermitian, so its operator norm is the largest |eigenvalue|.
    const Matrix h = Complex(0.0, 1.0) * anti;
    return eigenvalues_hermitian(h).cwiseAbs().maxCoeff();
  }
  return anti.norm();
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix SpectralDecomposition::apply(const std::function<double(double)>& f) const {
  RealVector fl(eigenvalues.size());
  for (Index k = 0; k < eigenvalues.size(); ++k) fl(k) = f(eigenvalues(k));
  return eigenvectors * fl.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eig_hermitian: eigensolver did not converge",
                           std::numeric_limits<double>::infinity());
  }
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  const double residual = (out.reconstruct() - a.matrix()).norm();
  // Generous acceptance bound; the documented accuracy is checked in tests.
  if (!(residual <= 1e-8 * scale * std::sqrt(static_cast<double>(a.dim()) + 1.0))) {
    throw ConvergenceError("eig_hermitian: reconstruction residual too large", residual);
  }
  return out;
}

RealVector eigenvalues_hermitian(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalues_hermitian: eigensolver did not converge",
                           std::numeric_limits<double>::infinity());
  }
  return solver.eigenvalues();
}

namespace {

void require_above_floor(const RealVector& eigenvalues, double floor, const char* who) {
  const double lowest = eigenvalues.minCoeff();
  if (!(lowest > floor)) {
    std::ostringstream msg;
    msg << who << ": eigenvalue " << lowest << " at or below floor " << floor;
    throw DomainError(msg.str(), lowest);
  }
}

}  // namespace

HermitianOperator matrix_function(const HermitianOperator& a, MatrixFunction f,
                                  double eigenvalue_floor) {
  const SpectralDecomposition eig = eig_hermitian(a);
  switch (f) {
    case MatrixFunction::Log:
      require_above_floor(eig.eigenvalues, eigenvalue_floor, "matrix_function(log)");
      return hermitian_part(eig.apply([](double x) { return std::log(x); }));
    case MatrixFunction::Sqrt:
      require_above_floor(eig.eigenvalues, eigenvalue_floor, "matrix_function(sqrt)");
      return hermitian_part(eig.apply([](double x) { return std::sqrt(x); }));
    case MatrixFunction::Exp:
      return hermitian_part(eig.apply([](double x) { return std::exp(x); }));
  }
  throw ArgumentError("matrix_function: unknown function tag");
}

double log_divided_difference(double a, double b) {
  if (a == b) return 1.0 / a;
  const double r = (a - b) / b;
  if (std::abs(r) < 0.5) return std::log1p(r) / (a - b);
  return (std::log(a) - std::log(b)) / (a - b);
}

HermitianOperator frechet_log(const HermitianOperator& x, const HermitianOperator& b,
                              double eigenvalue_floor) {
  if (x.dim() != b.dim()) throw ArgumentError("frechet_log: dimension mismatch");
  const SpectralDecomposition eig = eig_hermitian(x);
  require_above_floor(eig.eigenvalues, eigenvalue_floor, "frechet_log");
  const Matrix& u = eig.eigenvectors;
  Matrix bt = u.adjoint() * b.matrix() * u;
  const Index n = x.dim();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      bt(i, j) *= log_divided_difference(eig.eigenvalues(i), eig.eigenvalues(j));
    }
  }
  return hermitian_part(u * bt * u.adjoint());
}

QuadratureRule gauss_legendre_unit(int n) {
  if (n < 1) throw ArgumentError("gauss_legendre_unit: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] -> (0, 1).
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

namespace {

Matrix resolvent_quadrature(const Matrix& x, const Matrix& b, int nodes) {
  const QuadratureRule rule = gauss_legendre_unit(nodes);
  const Index n = x.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const double u = rule.nodes[k];
    const double s = u / (1.0 - u);
    const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    Matrix shifted = x;
    shifted.diagonal().array() += s;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
      throw DomainError("frechet_log_quadrature: X + s is not positive definite", -s);
    }
    const Matrix rb = llt.solve(b);                            // R B
    const Matrix rbr = llt.solve(rb.adjoint()).adjoint();      // R B R (R Hermitian)
    acc += (rule.weights[k] * jac) * rbr;
  }
  return acc;
}

}  // namespace

HermitianOperator frechet_log_quadrature(const HermitianOperator& x,
                                         const HermitianOperator& b, int nodes,
                                         double rel_tol) {
  if (x.dim() != b.dim()) throw ArgumentError("frechet_log_quadrature: dimension mismatch");
  if (nodes < 1) throw ArgumentError("frechet_log_quadrature: nodes must be positive");
  const Matrix coarse = resolvent_quadrature(x.matrix(), b.matrix(), nodes);
  const Matrix fine = resolvent_quadrature(x.matrix(), b.matrix(), 2 * nodes);
  const double change = operator_norm(Matrix(fine - coarse));
  const double scale = std::max(1.0, operator_norm(fine));
  if (change > rel_tol * scale) {
    std::ostringstream msg;
    msg << "frechet_log_quadrature: " << nodes << " nodes not converged (doubling changed "
        << "the result by " << change << ")";
    throw ConvergenceError(msg.str(), change);
  }
  return hermitian_part(coarse);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw ArgumentError("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

InequalityCheck golden_thompson_check(const HermitianOperator& x,
                                      const HermitianOperator& y) {
  if (x.dim() != y.dim()) throw ArgumentError("golden_thompson_check: dimension mismatch");
  const HermitianOperator sum = hermitian_part(x.matrix() + y.matrix());
  const double lhs = matrix_function(sum, MatrixFunction::Exp).matrix().trace().real();
  const Matrix ex = matrix_function(x, MatrixFunction::Exp);
  const Matrix ey = matrix_function(y, MatrixFunction::Exp);
  const double rhs = (ex * ey).trace().real();
  return {lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))};
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double operator_norm(const HermitianOperator& a) {
  if (a.dim() == 0) return 0.0;
  return eigenvalues_hermitian(a.matrix()).cwiseAbs().maxCoeff();
}

double trace_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double trace_norm(const HermitianOperator& a) {
  if (a.dim() == 0) return 0.0;
  return eigenvalues_hermitian(a.matrix()).cwiseAbs().sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace qrelent
