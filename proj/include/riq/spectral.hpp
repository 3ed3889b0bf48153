#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "riq/complex_matrix.hpp"

namespace riq {

/// Raw eigendecomposition of a Hermitian matrix: columns of `vectors` are the
/// eigenvectors, `values` sorted ascending.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

/// Eigenvalues grouped into clusters (consecutive gaps <= clusterTolerance),
/// one orthogonal projector per cluster.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;          // one representative per cluster
  std::vector<ComplexMatrix> projectors;    // same length
  double clusterTolerance = 1e-9;
};

namespace detail {

inline double offdiag_frobenius(const ComplexMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

// One cyclic-Jacobi sweep target: zero A(p,q) with a complex rotation,
// updating A in place and accumulating the rotation into V.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p,
                          std::size_t q) {
  const cplx apq = a(p, q);
  const double abs_apq = std::abs(apq);
  if (abs_apq == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const cplx phase = apq / abs_apq;  // apq = |apq| e^{i phi}
  const double theta = (app - aqq) / (2.0 * abs_apq);
  const double sgn = theta >= 0.0 ? 1.0 : -1.0;
  const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx sp = s * phase;  // rotation G = [[c, -s e^{i phi}],[s e^{-i phi}, c]]

  const std::size_t n = a.rows();
  // A <- G^dagger A G: first the column update A G, then rows (G^dagger A).
  for (std::size_t i = 0; i < n; ++i) {
    const cplx aip = a(i, p), aiq = a(i, q);
    a(i, p) = c * aip + std::conj(sp) * aiq;
    a(i, q) = -sp * aip + c * aiq;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const cplx apj = a(p, j), aqj = a(q, j);
    a(p, j) = c * apj + sp * aqj;
    a(q, j) = -std::conj(sp) * apj + c * aqj;
  }
  // Clean the pivot pair explicitly; diagonal stays real.
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = cplx(a(p, p).real(), 0.0);
  a(q, q) = cplx(a(q, q).real(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx vip = v(i, p), viq = v(i, q);
    v(i, p) = c * vip + std::conj(sp) * viq;
    v(i, q) = -sp * vip + c * viq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition for Hermitian input. Sweeps until the
/// off-diagonal Frobenius mass drops below 1e-13 * ||M||_F.
inline HermitianEigen hermitian_eigen_raw(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("hermitian_eigen_raw: non-square input");
  const double scale = m.frobenius_norm();
  if (!m.is_hermitian(1e-12 * std::max(scale, 1.0)))
    throw std::invalid_argument("hermitian_eigen_raw: input is not Hermitian within tolerance");
  const std::size_t n = m.rows();

  // Work on the Hermitian average so roundoff in the input cannot drift the
  // iteration; the check above already bounds the asymmetry.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double target = 1e-13 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (detail::offdiag_frobenius(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  HermitianEigen eig;
  eig.values.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  eig.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    eig.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = v(i, order[k]);
  }
  return eig;
}

/// Clustered spectral decomposition: eigenvalues whose consecutive sorted gaps
/// are <= clusterTol share one projector.
inline SpectralDecomposition hermitian_eig(const ComplexMatrix& m,
                                           double clusterTol = 1e-9) {
  const HermitianEigen eig = hermitian_eigen_raw(m);
  const std::size_t n = eig.values.size();
  SpectralDecomposition sd;
  sd.clusterTolerance = clusterTol;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && eig.values[end] - eig.values[end - 1] <= clusterTol) ++end;
    ComplexMatrix proj(n, n);
    double mean = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      mean += eig.values[k];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          proj(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    sd.eigenvalues.push_back(mean / double(end - start));
    sd.projectors.push_back(std::move(proj));
    start = end;
  }
  return sd;
}

/// V f(diag) V^dagger for Hermitian input.
inline ComplexMatrix apply_spectral(const ComplexMatrix& m,
                                    const std::function<cplx(double)>& f) {
  const HermitianEigen eig = hermitian_eigen_raw(m);
  const std::size_t n = eig.values.size();
  ComplexMatrix fd(n, n);
  for (std::size_t k = 0; k < n; ++k) fd(k, k) = f(eig.values[k]);
  return eig.vectors * fd * eig.vectors.adjoint();
}

/// e^{-i t H} for Hermitian H through the eigendecomposition route. This is
/// deliberately a separate code path from expm() so the two can cross-check.
inline ComplexMatrix hermitian_propagator(const ComplexMatrix& h, double t) {
  return apply_spectral(h, [t](double e) {
    return std::exp(cplx(0.0, -t * e));
  });
}

/// Largest singular value. Exact (Jacobi on M^dagger M) for small matrices,
/// power iteration above the cutoff.
inline double op_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  ComplexMatrix g = m.adjoint() * m;
  const std::size_t n = g.rows();
  if (n <= 64) {
    const HermitianEigen eig = hermitian_eigen_raw(g);
    return std::sqrt(std::max(0.0, eig.values.back()));
  }
  // Power iteration on the Gram matrix; deterministic start vector.
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = cplx(1.0 + 0.37 * std::cos(double(i)), 0.11 * std::sin(double(i) * 1.7));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::vector<cplx> y(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += g(i, j) * x[j];
    double ny = 0.0;
    for (const auto& v : y) ny += std::norm(v);
    ny = std::sqrt(ny);
    if (ny == 0.0) return 0.0;
    for (auto& v : y) v /= ny;
    const double prev = lambda;
    lambda = ny;
    x.swap(y);
    if (it > 4 && std::abs(lambda - prev) <= 1e-12 * std::max(lambda, 1.0)) break;
  }
  return std::sqrt(lambda);
}

}  // namespace riq
