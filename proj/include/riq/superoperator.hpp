#pragma once

#include "riq/complex_matrix.hpp"
#include "riq/expm.hpp"

namespace riq {

/// Linear map on D x D matrices, stored as its D^2 x D^2 matrix in the
/// column-stacking convention vec(A X B) = (B^T (x) A) vec(X).
struct SuperOperator {
  std::size_t dim = 0;    // D
  ComplexMatrix matrix;   // D^2 x D^2

  SuperOperator() = default;
  SuperOperator(std::size_t d, ComplexMatrix m) : dim(d), matrix(std::move(m)) {
    if (matrix.rows() != d * d || matrix.cols() != d * d)
      throw std::invalid_argument("SuperOperator: matrix must be D^2 x D^2");
  }

  static SuperOperator identity(std::size_t d) {
    return SuperOperator(d, ComplexMatrix::identity(d * d));
  }

  static SuperOperator zero(std::size_t d) {
    return SuperOperator(d, ComplexMatrix(d * d, d * d));
  }

  /// Matrix of B |-> L B R.
  static SuperOperator left_right(const ComplexMatrix& l, const ComplexMatrix& r) {
    if (!l.square() || !r.square() || l.rows() != r.rows())
      throw std::invalid_argument("SuperOperator::left_right: need square L, R of equal size");
    return SuperOperator(l.rows(), kron(r.transpose(), l));
  }

  /// Matrix of B |-> U B U^dagger.
  static SuperOperator conjugation(const ComplexMatrix& u) {
    return left_right(u, u.adjoint());
  }

  ComplexMatrix apply(const ComplexMatrix& b) const {
    if (b.rows() != dim || b.cols() != dim)
      throw std::invalid_argument("SuperOperator::apply: operand must be D x D");
    const std::vector<cplx> vb = vec(b);
    std::vector<cplx> out(vb.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < matrix.rows(); ++i)
      for (std::size_t j = 0; j < matrix.cols(); ++j) out[i] += matrix(i, j) * vb[j];
    return unvec(out);
  }

  /// Adjoint with respect to <A|B> = tr(A^dagger B): the Schrodinger-picture
  /// map paired with this Heisenberg-picture map (and vice versa).
  SuperOperator dual() const { return SuperOperator(dim, matrix.adjoint()); }

  SuperOperator compose(const SuperOperator& inner) const {
    check_dim(inner);
    return SuperOperator(dim, matrix * inner.matrix);
  }

  SuperOperator power(std::uint64_t k) const {
    SuperOperator acc = identity(dim);
    SuperOperator base = *this;
    while (k > 0) {
      if (k & 1) acc = acc.compose(base);
      base = base.compose(base);
      k >>= 1;
    }
    return acc;
  }

  SuperOperator& operator+=(const SuperOperator& o) {
    check_dim(o);
    matrix += o.matrix;
    return *this;
  }
  SuperOperator& operator-=(const SuperOperator& o) {
    check_dim(o);
    matrix -= o.matrix;
    return *this;
  }
  SuperOperator& operator*=(cplx s) {
    matrix *= s;
    return *this;
  }
  friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { a += b; return a; }
  friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { a -= b; return a; }
  friend SuperOperator operator*(cplx s, SuperOperator a) { a *= s; return a; }

  double unitality_defect() const {
    return (apply(ComplexMatrix::identity(dim)) - ComplexMatrix::identity(dim))
        .frobenius_norm();
  }

 private:
  void check_dim(const SuperOperator& o) const {
    if (dim != o.dim) throw std::invalid_argument("SuperOperator: dimension mismatch");
  }
};

inline SuperOperator expm(const SuperOperator& s) {
  return SuperOperator(s.dim, expm(s.matrix));
}

}  // namespace riq
