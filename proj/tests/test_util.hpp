#pragma once

#include <riq.hpp>

// Entrywise distance; use riq::op_norm for operator-norm comparisons.
inline double gap(const riq::ComplexMatrix& a, const riq::ComplexMatrix& b) {
  return (a - b).max_abs();
}

inline riq::ComplexMatrix identity_matrix(std::size_t n) {
  riq::ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}
