#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace riq {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Small sizes only (the largest object in
/// this library is the full-chain unitary, capped at 4096^2 entries).
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged initializer");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
  }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) {
    a *= s;
    return a;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) {
    a *= s;
    return a;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product: inner dimensions " +
                                  std::to_string(a.cols_) + " vs " +
                                  std::to_string(b.rows_));
    ComplexMatrix c(a.rows_, b.cols_);
    // ikj loop order keeps the inner loop contiguous for both b and c.
    for (std::size_t i = 0; i < a.rows_; ++i) {
      const cplx* arow = &a.a_[i * a.cols_];
      cplx* crow = &c.a_[i * c.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = arow[k];
        if (aik == cplx(0.0, 0.0)) continue;
        const cplx* brow = &b.a_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  ComplexMatrix conj() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
    return m;
  }

  cplx trace() const {
    if (!square()) throw std::invalid_argument("trace of non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_hermitian(double tol) const {
    if (!square()) return false;
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        d += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    return std::sqrt(2.0 * d) <= tol;
  }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t h,
                      std::size_t w) const {
    if (r0 + h > rows_ || c0 + w > cols_)
      throw std::invalid_argument("block exceeds matrix bounds");
    ComplexMatrix m(h, w);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& m) {
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_)
      throw std::invalid_argument("set_block exceeds matrix bounds");
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) (*this)(r0 + i, c0 + j) = m(i, j);
  }

 private:
  void check_same_shape(const ComplexMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                  std::to_string(rows_) + "x" + std::to_string(cols_) +
                                  " vs " + std::to_string(o.rows_) + "x" +
                                  std::to_string(o.cols_));
  }

  std::size_t rows_, cols_;
  std::vector<cplx> a_;
};

inline ComplexMatrix matrix_power(const ComplexMatrix& a, std::uint64_t k) {
  if (!a.square()) throw std::invalid_argument("matrix_power: non-square input");
  ComplexMatrix acc = ComplexMatrix::identity(a.rows());
  ComplexMatrix base = a;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

/// kron(A,B)[(iA*rB+iB),(jA*cB+jB)] = A(iA,jA)*B(iB,jB).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const cplx v = a(ia, ja);
      if (v == cplx(0.0, 0.0)) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          m(ia * b.rows() + ib, ja * b.cols() + jb) = v * b(ib, jb);
    }
  return m;
}

/// Weighted partial trace over the last tensor factor: M acts on C^p (x) C^q,
/// index convention (i,s) -> i*q+s; out(i,j) = sum_s w_s M((i,s),(j,s)).
/// Plain partial trace is weights = (1,...,1).
inline ComplexMatrix partial_trace_last(const ComplexMatrix& m,
                                        const std::vector<double>& weights) {
  if (!m.square()) throw std::invalid_argument("partial_trace_last: non-square input");
  const std::size_t q = weights.size();
  if (q == 0 || m.rows() % q != 0)
    throw std::invalid_argument("partial_trace_last: dimension " +
                                std::to_string(m.rows()) +
                                " not divisible by factor size " + std::to_string(q));
  const std::size_t p = m.rows() / q;
  ComplexMatrix out(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      cplx acc = 0.0;
      for (std::size_t s = 0; s < q; ++s) acc += weights[s] * m(i * q + s, j * q + s);
      out(i, j) = acc;
    }
  return out;
}

/// Column-stacking vectorization: vec(M)[j*rows+i] = M(i,j).
inline std::vector<cplx> vec(const ComplexMatrix& m) {
  std::vector<cplx> v(m.rows() * m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v[j * m.rows() + i] = m(i, j);
  return v;
}

inline ComplexMatrix unvec(const std::vector<cplx>& v) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(v.size()))));
  if (d * d != v.size())
    throw std::invalid_argument("unvec: length " + std::to_string(v.size()) +
                                " is not a perfect square");
  ComplexMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) m(i, j) = v[j * d + i];
  return m;
}

}  // namespace riq
