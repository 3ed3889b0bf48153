#pragma once

#include <cstdint>
#include <random>

#include "riq/complex_matrix.hpp"

namespace riq {

/// Deterministic random source. Raw mt19937_64 output is specified by the
/// standard, and the transforms below are explicit, so a given seed produces
/// the same stream on every platform (std::*_distribution would not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0,1)
    return double(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {  // Box-Muller
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  cplx complex_gaussian() {
    // Independent re/im, each variance 1/2 -> E|z|^2 = 1.
    const double r = std::sqrt(0.5);
    return cplx(r * gaussian(), r * gaussian());
  }

  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                   double scale = 1.0) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * rng.complex_gaussian();
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n, double scale = 1.0) {
  ComplexMatrix m = random_matrix(rng, n, n, scale);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

}  // namespace riq
