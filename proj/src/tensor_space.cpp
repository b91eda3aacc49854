#include "qrelent/tensor_space.hpp"

#include <algorithm>
#include <sstream>

#include "qrelent/errors.hpp"

namespace qrelent {
namespace {

Index checked_power(Index d, int n, Index cap) {
  Index total = 1;
  for (int k = 0; k < n; ++k) {
    if (total > cap / d) {
      std::ostringstream msg;
      msg << "dimension " << d << "^" << n << " exceeds cap " << cap;
      throw CapacityError(msg.str());
    }
    total *= d;
  }
  if (total > cap) {
    std::ostringstream msg;
    msg << "dimension " << total << " exceeds cap " << cap;
    throw CapacityError(msg.str());
  }
  return total;
}

void check_leg(int leg, const ManyBodySpace& space, const char* who) {
  if (leg < 1 || leg > space.legs()) {
    std::ostringstream msg;
    msg << who << ": leg " << leg << " outside 1.." << space.legs();
    throw ArgumentError(msg.str());
  }
}

// Index map f with (U_pi A U_pi^*)_{x,x'} = A_{f(x), f(x')}.
std::vector<Index> permutation_map(const Permutation& pi, const ManyBodySpace& space) {
  if (pi.size() != space.legs()) {
    throw ArgumentError("permutation size does not match the number of legs");
  }
  std::vector<Index> f(static_cast<std::size_t>(space.total_dim()));
  for (Index x = 0; x < space.total_dim(); ++x) {
    Index y = 0;
    for (int k = 1; k <= space.legs(); ++k) {
      y += space.digit(x, pi(k)) * space.stride(k);
    }
    f[static_cast<std::size_t>(x)] = y;
  }
  return f;
}

}  // namespace

ManyBodySpace::ManyBodySpace(Index site_dim, int legs, Index cap)
    : d_(site_dim), n_(legs), total_(0), cap_(cap) {
  if (site_dim < 1) throw ArgumentError("ManyBodySpace: site dimension must be positive");
  if (legs < 1) throw ArgumentError("ManyBodySpace: number of legs must be positive");
  total_ = checked_power(site_dim, legs, cap);
  strides_.resize(static_cast<std::size_t>(legs));
  Index s = 1;
  for (int k = legs; k >= 1; --k) {
    strides_[static_cast<std::size_t>(k - 1)] = s;
    s *= site_dim;
  }
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 1 || v > static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v - 1)]) {
      throw ArgumentError("Permutation: images are not a bijection of 1..N");
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) images[static_cast<std::size_t>(k)] = k + 1;
  return Permutation(std::move(images));
}

Permutation Permutation::transposition(int n, int a, int b) {
  std::vector<int> images = identity(n).images();
  if (a < 1 || a > n || b < 1 || b > n) throw ArgumentError("transposition: leg out of range");
  std::swap(images[static_cast<std::size_t>(a - 1)], images[static_cast<std::size_t>(b - 1)]);
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t k = 0; k < images_.size(); ++k) {
    inv[static_cast<std::size_t>(images_[k] - 1)] = static_cast<int>(k) + 1;
  }
  return Permutation(std::move(inv));
}

Matrix embed_one_body(const Matrix& a, int j, const ManyBodySpace& space) {
  const Index d = space.site_dim();
  if (a.rows() != d || a.cols() != d) throw ArgumentError("embed_one_body: dimension mismatch");
  check_leg(j, space, "embed_one_body");
  const Index D = space.total_dim();
  const Index s = space.stride(j);
  Matrix out = Matrix::Zero(D, D);
  for (Index x = 0; x < D; ++x) {
    const Index a_row = (x / s) % d;
    const Index base = x - a_row * s;
    for (Index b = 0; b < d; ++b) out(x, base + b * s) = a(a_row, b);
  }
  return out;
}

HermitianOperator embed_one_body(const HermitianOperator& a, int j, const ManyBodySpace& space) {
  return hermitian_part(embed_one_body(a.matrix(), j, space));
}

Matrix embed_two_body(const Matrix& w, int i, int j, const ManyBodySpace& space) {
  const Index d = space.site_dim();
  if (w.rows() != d * d || w.cols() != d * d) {
    throw ArgumentError("embed_two_body: dimension mismatch");
  }
  check_leg(i, space, "embed_two_body");
  check_leg(j, space, "embed_two_body");
  if (i == j) throw ArgumentError("embed_two_body: legs must differ");
  const Index D = space.total_dim();
  const Index si = space.stride(i);
  const Index sj = space.stride(j);
  Matrix out = Matrix::Zero(D, D);
  for (Index x = 0; x < D; ++x) {
    const Index a = (x / si) % d;
    const Index b = (x / sj) % d;
    const Index base = x - a * si - b * sj;
    const Index row = a * d + b;
    for (Index a2 = 0; a2 < d; ++a2) {
      for (Index b2 = 0; b2 < d; ++b2) {
        out(x, base + a2 * si + b2 * sj) = w(row, a2 * d + b2);
      }
    }
  }
  return out;
}

HermitianOperator embed_two_body(const HermitianOperator& w, int i, int j,
                                 const ManyBodySpace& space) {
  return hermitian_part(embed_two_body(w.matrix(), i, j, space));
}

Matrix apply_two_body_left(const Matrix& w, int i, int j, const Matrix& m,
                           const ManyBodySpace& space) {
  const Index d = space.site_dim();
  const Index D = space.total_dim();
  if (w.rows() != d * d || m.rows() != D) throw ArgumentError("apply_two_body_left: dimension mismatch");
  if (i == j) throw ArgumentError("apply_two_body_left: legs must differ");
  const Index si = space.stride(i);
  const Index sj = space.stride(j);
  Matrix out = Matrix::Zero(D, m.cols());
  for (Index x = 0; x < D; ++x) {
    const Index a = (x / si) % d;
    const Index b = (x / sj) % d;
    const Index base = x - a * si - b * sj;
    const Index row = a * d + b;
    for (Index a2 = 0; a2 < d; ++a2) {
      for (Index b2 = 0; b2 < d; ++b2) {
        const Complex c = w(row, a2 * d + b2);
        if (c == Complex(0.0, 0.0)) continue;
        out.row(x) += c * m.row(base + a2 * si + b2 * sj);
      }
    }
  }
  return out;
}

Matrix apply_two_body_right(const Matrix& m, const Matrix& w, int i, int j,
                            const ManyBodySpace& space) {
  const Index d = space.site_dim();
  const Index D = space.total_dim();
  if (w.rows() != d * d || m.cols() != D) throw ArgumentError("apply_two_body_right: dimension mismatch");
  if (i == j) throw ArgumentError("apply_two_body_right: legs must differ");
  const Index si = space.stride(i);
  const Index sj = space.stride(j);
  Matrix out = Matrix::Zero(m.rows(), D);
  // (M W_ij)_{:,y} = sum_x M_{:,x} (W_ij)_{x,y}.
  for (Index y = 0; y < D; ++y) {
    const Index a = (y / si) % d;
    const Index b = (y / sj) % d;
    const Index base = y - a * si - b * sj;
    const Index col = a * d + b;
    for (Index a2 = 0; a2 < d; ++a2) {
      for (Index b2 = 0; b2 < d; ++b2) {
        const Complex c = w(a2 * d + b2, col);
        if (c == Complex(0.0, 0.0)) continue;
        out.col(y) += c * m.col(base + a2 * si + b2 * sj);
      }
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& gamma, std::vector<int> keep, const ManyBodySpace& space) {
  if (gamma.rows() != space.total_dim() || gamma.cols() != space.total_dim()) {
    throw ArgumentError("partial_trace: dimension mismatch");
  }
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw ArgumentError("partial_trace: repeated leg in keep set");
  }
  for (int leg : keep) check_leg(leg, space, "partial_trace");

  std::vector<int> traced;
  for (int k = 1; k <= space.legs(); ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  const Index d = space.site_dim();
  Index dk = 1;
  for (std::size_t k = 0; k < keep.size(); ++k) dk *= d;
  const Index dt = space.total_dim() / dk;

  // Flat offsets of every kept / traced multi-index.
  auto offsets = [&](const std::vector<int>& legs, Index count) {
    std::vector<Index> off(static_cast<std::size_t>(count), 0);
    for (Index r = 0; r < count; ++r) {
      Index rem = r;
      Index value = 0;
      for (std::size_t k = legs.size(); k-- > 0;) {
        value += (rem % d) * space.stride(legs[k]);
        rem /= d;
      }
      off[static_cast<std::size_t>(r)] = value;
    }
    return off;
  };
  const std::vector<Index> kept_off = offsets(keep, dk);
  const std::vector<Index> traced_off = offsets(traced, dt);

  Matrix out = Matrix::Zero(dk, dk);
  for (Index c = 0; c < dk; ++c) {
    for (Index r = 0; r < dk; ++r) {
      Complex acc(0.0, 0.0);
      const Index xr = kept_off[static_cast<std::size_t>(r)];
      const Index xc = kept_off[static_cast<std::size_t>(c)];
      for (Index t = 0; t < dt; ++t) {
        const Index o = traced_off[static_cast<std::size_t>(t)];
        acc += gamma(xr + o, xc + o);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& gamma, std::vector<int> keep,
                                const ManyBodySpace& space) {
  return hermitian_part(partial_trace(gamma.matrix(), std::move(keep), space));
}

Matrix tensor_power(const Matrix& gamma, int n, Index cap) {
  if (n < 1) throw ArgumentError("tensor_power: power must be positive");
  if (gamma.rows() != gamma.cols()) throw ArgumentError("tensor_power: matrix is not square");
  checked_power(gamma.rows(), n, cap);
  Matrix out = gamma;
  for (int k = 1; k < n; ++k) out = kron(out, gamma);
  return out;
}

HermitianOperator tensor_power(const HermitianOperator& gamma, int n, Index cap) {
  return hermitian_part(tensor_power(gamma.matrix(), n, cap));
}

Matrix permutation_unitary(const Permutation& pi, const ManyBodySpace& space) {
  const std::vector<Index> f = permutation_map(pi, space);
  const Index D = space.total_dim();
  Matrix u = Matrix::Zero(D, D);
  for (Index x = 0; x < D; ++x) u(x, f[static_cast<std::size_t>(x)]) = 1.0;
  return u;
}

Matrix conjugate_by_permutation(const Matrix& a, const Permutation& pi,
                                const ManyBodySpace& space) {
  if (a.rows() != space.total_dim() || a.cols() != space.total_dim()) {
    throw ArgumentError("conjugate_by_permutation: dimension mismatch");
  }
  const std::vector<Index> f = permutation_map(pi, space);
  const Index D = space.total_dim();
  Matrix out(D, D);
  for (Index c = 0; c < D; ++c) {
    for (Index r = 0; r < D; ++r) {
      out(r, c) = a(f[static_cast<std::size_t>(r)], f[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

Matrix swap_operator(Index d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) s(a * d + b, b * d + a) = 1.0;
  }
  return s;
}

double flip_symmetry_defect(const Matrix& w) {
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(w.rows()))));
  if (d * d != w.rows() || w.rows() != w.cols()) {
    throw ArgumentError("flip_symmetry_defect: W must act on C^d (x) C^d");
  }
  const Matrix s = swap_operator(d);
  return operator_norm(Matrix(s * w * s - w));
}

double symmetry_defect(const Matrix& gamma, const ManyBodySpace& space) {
  double worst = 0.0;
  for (int a = 1; a <= space.legs(); ++a) {
    for (int b = a + 1; b <= space.legs(); ++b) {
      const Permutation tau = Permutation::transposition(space.legs(), a, b);
      const Matrix diff = conjugate_by_permutation(gamma, tau, space) - gamma;
      const double norm = operator_norm(diff);
      worst = std::max(worst, norm);
    }
  }
  return worst;
}

bool is_symmetric_state(const Matrix& gamma, const ManyBodySpace& space, double tol) {
  return symmetry_defect(gamma, space) <= tol;
}

}  // namespace qrelent
