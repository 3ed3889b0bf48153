#pragma once

#include <cmath>

#include "riq/complex_matrix.hpp"

namespace riq {

/// Matrix exponential by scaling-and-squaring around a truncated Taylor core.
/// Works for any square complex matrix; accuracy ~1e-13 relative for the
/// well-conditioned inputs this library produces. Hermitian generators also
/// have the independent eigendecomposition route (hermitian_propagator).
inline ComplexMatrix expm(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("expm: non-square input");
  const std::size_t n = m.rows();
  if (n == 0) return m;

  // Scale so the Taylor series converges fast: ||M/2^s||_F <= 0.5.
  const double norm = m.frobenius_norm();
  int s = 0;
  if (norm > 0.5) {
    s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    if (s < 0) s = 0;
    if (s > 60) throw std::invalid_argument("expm: input norm too large");
  }
  const double scale = std::ldexp(1.0, -s);  // 2^-s
  ComplexMatrix a = m;
  a *= scale;

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * a;
    term *= cplx(1.0 / double(k), 0.0);
    result += term;
    if (term.frobenius_norm() <= 1e-18 * std::max(result.frobenius_norm(), 1.0)) break;
  }
  for (int k = 0; k < s; ++k) result = result * result;
  return result;
}

}  // namespace riq
