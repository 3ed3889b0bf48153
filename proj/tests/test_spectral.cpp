#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using riq::ComplexMatrix;
using riq::cplx;

namespace {

// Diagonal conjugated by an explicit product of complex Givens rotations:
// eigenvalues are known exactly, independent of the solver under test.
ComplexMatrix planted_hermitian(const std::vector<double>& evals, std::uint64_t seed) {
  const std::size_t n = evals.size();
  riq::Rng rng(seed);
  ComplexMatrix u = identity_matrix(n);
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const double th = rng.uniform(0.0, 3.0);
      const double ph = rng.uniform(0.0, 6.28);
      ComplexMatrix g = identity_matrix(n);
      g(p, p) = std::cos(th);
      g(q, q) = std::cos(th);
      g(p, q) = -std::sin(th) * std::exp(cplx(0, ph));
      g(q, p) = std::sin(th) * std::exp(cplx(0, -ph));
      u = u * g;
    }
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = evals[i];
  return u * d * u.adjoint();
}

}  // namespace

TEST_CASE("2x2 eigenvalues by hand", "[spectral]") {
  // [[1, i], [-i, 1]] has eigenvalues 1 -+ 1 = {0, 2}.
  const ComplexMatrix m{{cplx(1, 0), cplx(0, 1)}, {cplx(0, -1), cplx(1, 0)}};
  const riq::HermitianEigen eig = riq::hermitian_eigen_raw(m);
  REQUIRE(eig.values.size() == 2);
  CHECK(std::abs(eig.values[0] - 0.0) < 1e-13);
  CHECK(std::abs(eig.values[1] - 2.0) < 1e-13);
  // Columns are eigenvectors.
  for (int j = 0; j < 2; ++j) {
    ComplexMatrix v(2, 1);
    v(0, 0) = eig.vectors(0, std::size_t(j));
    v(1, 0) = eig.vectors(1, std::size_t(j));
    CHECK(riq::op_norm(m * v - cplx(eig.values[std::size_t(j)], 0) * v) < 1e-13);
  }
}

TEST_CASE("planted spectra are recovered", "[spectral]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const std::vector<double> evals = {-2.5, -0.25, 0.0, 1.0, 4.75};
    const ComplexMatrix m = planted_hermitian(evals, seed);
    const riq::HermitianEigen eig = riq::hermitian_eigen_raw(m);
    REQUIRE(eig.values.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(eig.values[i] - evals[i]) < 1e-11);
    // Unitarity of the eigenvector matrix.
    CHECK(gap(eig.vectors.adjoint() * eig.vectors, identity_matrix(5)) < 1e-12);
  }
}

TEST_CASE("eigenprojectors are a complete orthogonal family", "[spectral]") {
  for (std::uint64_t seed : {4u, 5u, 6u, 7u}) {
    riq::Rng rng(seed);
    const std::size_t n = 2 + seed % 5;
    const ComplexMatrix m = riq::random_hermitian(rng, n, 1.0);
    const riq::SpectralDecomposition sd = riq::hermitian_eig(m);
    ComplexMatrix sum(n, n);
    ComplexMatrix rebuilt(n, n);
    for (std::size_t j = 0; j < sd.projectors.size(); ++j) {
      const ComplexMatrix& p = sd.projectors[j];
      CHECK(p.is_hermitian(1e-12));
      CHECK(gap(p * p, p) < 1e-12);
      for (std::size_t k = j + 1; k < sd.projectors.size(); ++k)
        CHECK(riq::op_norm(p * sd.projectors[k]) < 1e-12);
      sum += p;
      rebuilt += cplx(sd.eigenvalues[j], 0) * p;
    }
    CHECK(gap(sum, identity_matrix(n)) < 1e-12);
    CHECK(riq::op_norm(rebuilt - m) < 1e-11);
  }
}

TEST_CASE("near-degenerate eigenvalues cluster", "[spectral]") {
  ComplexMatrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0 + 1e-12;
  d(2, 2) = 3.0;
  const riq::SpectralDecomposition sd = riq::hermitian_eig(d, 1e-9);
  REQUIRE(sd.projectors.size() == 2);
  CHECK(std::abs(sd.projectors[0].trace() - cplx(2, 0)) < 1e-12); // rank 2 cluster
  CHECK(std::abs(sd.projectors[1].trace() - cplx(1, 0)) < 1e-12);

  const riq::SpectralDecomposition fine = riq::hermitian_eig(d, 1e-14);
  CHECK(fine.projectors.size() == 3);
}

TEST_CASE("apply_spectral computes matrix functions", "[spectral]") {
  const ComplexMatrix m = planted_hermitian({-1.0, 0.5, 2.0}, 8);
  const ComplexMatrix sq = riq::apply_spectral(m, [](double e) { return cplx(e * e, 0); });
  CHECK(riq::op_norm(sq - m * m) < 1e-12);
  const ComplexMatrix idm = riq::apply_spectral(m, [](double e) { return cplx(e, 0); });
  CHECK(riq::op_norm(idm - m) < 1e-12);
}

TEST_CASE("hermitian_propagator agrees with the generic exponential", "[spectral]") {
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    riq::Rng rng(seed);
    const ComplexMatrix h = riq::random_hermitian(rng, 4, 1.0);
    for (double t : {0.3, 1.0, -2.0}) {
      const ComplexMatrix viaEig = riq::hermitian_propagator(h, t);
      const ComplexMatrix viaSeries = riq::expm(cplx(0, -t) * h);
      CHECK(riq::op_norm(viaEig - viaSeries) < 1e-12);
      // Unitarity.
      CHECK(gap(viaEig.adjoint() * viaEig, identity_matrix(4)) < 1e-13);
    }
  }
}

TEST_CASE("operator norm on frozen cases", "[spectral]") {
  const ComplexMatrix shift{{cplx(0, 0), cplx(2, 0)}, {cplx(0, 0), cplx(0, 0)}};
  CHECK(std::abs(riq::op_norm(shift) - 2.0) < 1e-12);
  CHECK(std::abs(riq::op_norm(identity_matrix(5)) - 1.0) < 1e-12);

  // ||m||^2 = largest eigenvalue of m^+ m, checked against the eigensolver.
  riq::Rng rng(13);
  const ComplexMatrix m = riq::random_matrix(rng, 6, 6);
  const riq::HermitianEigen gram = riq::hermitian_eigen_raw(m.adjoint() * m);
  CHECK(std::abs(riq::op_norm(m) - std::sqrt(gram.values.back())) < 1e-11);
}

TEST_CASE("non-hermitian input is rejected", "[spectral]") {
  const ComplexMatrix bad{{cplx(0, 0), cplx(1, 0)}, {cplx(0, 0), cplx(0, 0)}};
  CHECK_THROWS_AS(riq::hermitian_eigen_raw(bad), std::invalid_argument);
  ComplexMatrix rect(2, 3);
  CHECK_THROWS_AS(riq::hermitian_eig(rect), std::invalid_argument);
}
