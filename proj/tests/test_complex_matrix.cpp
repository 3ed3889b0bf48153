#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using riq::ComplexMatrix;
using riq::cplx;

TEST_CASE("arithmetic and adjoint on frozen matrices", "[densela]") {
  const ComplexMatrix a{{cplx(1, 2), cplx(0, -1)}, {cplx(3, 0), cplx(-2, 1)}};
  const ComplexMatrix b{{cplx(0, 1), cplx(2, 0)}, {cplx(1, 1), cplx(0, 0)}};

  // (a*b)(0,0) = (1+2i)(i) + (-i)(1+i) = (-2+i) + (1-i) = -1. By hand.
  const ComplexMatrix ab = a * b;
  CHECK(std::abs(ab(0, 0) - cplx(-1, 0)) < 1e-15);
  // (a*b)(1,0) = 3i + (-2+i)(1+i) = 3i + (-3-i) = -3+2i.
  CHECK(std::abs(ab(1, 0) - cplx(-3, 2)) < 1e-15);

  CHECK(std::abs(a.trace() - cplx(-1, 3)) < 1e-15);
  CHECK(gap(a.adjoint().adjoint(), a) == 0.0);
  CHECK(gap((a * b).adjoint(), b.adjoint() * a.adjoint()) < 1e-15);
  CHECK(gap(a.transpose().conj(), a.adjoint()) == 0.0);

  // Frobenius^2 = sum |entries|^2 = 5 + 1 + 9 + 5 = 20.
  CHECK(std::abs(a.frobenius_norm() - std::sqrt(20.0)) < 1e-14);
  CHECK(a.max_abs() == std::abs(cplx(3, 0)));
  CHECK_FALSE(a.is_hermitian(1e-12));
  const ComplexMatrix h{{cplx(2, 0), cplx(0, 1)}, {cplx(0, -1), cplx(5, 0)}};
  CHECK(h.is_hermitian(1e-12));
}

TEST_CASE("block extraction round-trips", "[densela]") {
  riq::Rng rng(42);
  const ComplexMatrix m = riq::random_matrix(rng, 5, 5);
  const ComplexMatrix blk = m.block(1, 2, 3, 2);
  CHECK(blk(0, 0) == m(1, 2));
  CHECK(blk(2, 1) == m(3, 3));
  ComplexMatrix copy = m;
  copy.set_block(1, 2, blk);
  CHECK(gap(copy, m) == 0.0);
}

TEST_CASE("kron against hand-computed entries", "[densela]") {
  const ComplexMatrix a{{cplx(1, 0), cplx(2, 0)}, {cplx(3, 0), cplx(4, 0)}};
  const ComplexMatrix b{{cplx(0, 0), cplx(0, 1)}, {cplx(0, -1), cplx(0, 0)}};
  const ComplexMatrix k = riq::kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == cplx(0, 1));
  CHECK(k(0, 3) == cplx(0, 2));
  CHECK(k(3, 0) == cplx(0, -3));
  CHECK(k(2, 3) == cplx(0, 4)); // row 2 = (iA=1,iB=0), col 3 = (jA=1,jB=1)
  CHECK(k(0, 0) == cplx(0, 0));

  // Mixed-product identity on random input.
  riq::Rng rng(7);
  const ComplexMatrix p = riq::random_matrix(rng, 3, 3);
  const ComplexMatrix q = riq::random_matrix(rng, 2, 2);
  const ComplexMatrix r = riq::random_matrix(rng, 3, 3);
  const ComplexMatrix s = riq::random_matrix(rng, 2, 2);
  CHECK(gap(riq::kron(p * r, q * s), riq::kron(p, q) * riq::kron(r, s)) < 1e-13);
}

TEST_CASE("column-stacking vectorization convention", "[densela]") {
  // vec stacks columns: vec(X) = (x00, x10, x01, x11).
  const ComplexMatrix x{{cplx(1, 0), cplx(3, 0)}, {cplx(2, 0), cplx(4, 0)}};
  const auto v = riq::vec(x);
  REQUIRE(v.size() == 4);
  CHECK(v[0] == cplx(1, 0));
  CHECK(v[1] == cplx(2, 0));
  CHECK(v[2] == cplx(3, 0));
  CHECK(v[3] == cplx(4, 0));
  CHECK(gap(riq::unvec(v), x) == 0.0);

  // vec(A X B) = (B^T kron A) vec(X) -- the convention every superoperator
  // matrix in the library is built on.
  riq::Rng rng(11);
  const ComplexMatrix a = riq::random_matrix(rng, 3, 3);
  const ComplexMatrix xx = riq::random_matrix(rng, 3, 3);
  const ComplexMatrix b = riq::random_matrix(rng, 3, 3);
  const auto lhs = riq::vec(a * xx * b);
  const ComplexMatrix big = riq::kron(b.transpose(), a);
  const auto vx = riq::vec(xx);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < vx.size(); ++j) acc += big(i, j) * vx[j];
    worst = std::max(worst, std::abs(acc - lhs[i]));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("matrix_power matches repeated multiplication", "[densela]") {
  riq::Rng rng(3);
  const ComplexMatrix m = riq::random_matrix(rng, 4, 4);
  CHECK(gap(riq::matrix_power(m, 0), identity_matrix(4)) == 0.0);
  ComplexMatrix acc = m;
  for (int k = 2; k <= 9; ++k) {
    acc = acc * m;
    CHECK(gap(riq::matrix_power(m, std::uint64_t(k)), acc) < 1e-11 * acc.max_abs());
  }
}

TEST_CASE("commutator identities", "[densela]") {
  riq::Rng rng(5);
  const ComplexMatrix a = riq::random_matrix(rng, 3, 3);
  const ComplexMatrix b = riq::random_matrix(rng, 3, 3);
  CHECK(gap(riq::commutator(a, b), cplx(-1, 0) * riq::commutator(b, a)) < 1e-14);
  CHECK(gap(riq::anticommutator(a, b), a * b + b * a) == 0.0);
  CHECK(std::abs(riq::commutator(a, b).trace()) < 1e-13);
}

TEST_CASE("weighted partial trace over the last factor", "[densela]") {
  const ComplexMatrix a{{cplx(1, 1), cplx(2, 0)}, {cplx(0, 3), cplx(4, 0)}};
  const ComplexMatrix b{{cplx(5, 0), cplx(1, 0)}, {cplx(0, 0), cplx(7, 0)}};
  // Second kron factor is the fast index, so tracing it gives A * tr(B).
  CHECK(gap(riq::partial_trace_last(riq::kron(a, b), {1.0, 1.0}), cplx(12, 0) * a) < 1e-14);
  // Weighted version picks w0*B(0,0) + w1*B(1,1).
  CHECK(gap(riq::partial_trace_last(riq::kron(a, b), {0.25, 0.5}),
            cplx(0.25 * 5 + 0.5 * 7, 0) * a) < 1e-14);
  CHECK_THROWS_AS(riq::partial_trace_last(riq::kron(a, b), {1.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("matrix exponential on frozen cases", "[densela]") {
  CHECK(gap(riq::expm(ComplexMatrix(3, 3)), identity_matrix(3)) < 1e-15);

  // Nilpotent: exp([[0,1],[0,0]]) = I + N exactly.
  const ComplexMatrix n{{cplx(0, 0), cplx(1, 0)}, {cplx(0, 0), cplx(0, 0)}};
  const ComplexMatrix en = riq::expm(n);
  CHECK(std::abs(en(0, 0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(en(0, 1) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(en(1, 0)) < 1e-15);

  // Real rotation generator: exp([[0,-t],[t,0]]) = [[cos t, -sin t],[sin t, cos t]].
  const double t = 0.81;
  const ComplexMatrix g{{cplx(0, 0), cplx(-t, 0)}, {cplx(t, 0), cplx(0, 0)}};
  const ComplexMatrix eg = riq::expm(g);
  CHECK(std::abs(eg(0, 0) - std::cos(t)) < 1e-14);
  CHECK(std::abs(eg(1, 0) - std::sin(t)) < 1e-14);

  // Group law for commuting exponents.
  riq::Rng rng(9);
  const ComplexMatrix m = riq::random_matrix(rng, 4, 4);
  CHECK(gap(riq::expm(m) * riq::expm(m), riq::expm(cplx(2, 0) * m)) < 1e-11);
}

TEST_CASE("seeded rng is reproducible and gaussian-shaped", "[densela]") {
  riq::Rng r1(123), r2(123);
  for (int i = 0; i < 16; ++i) CHECK(r1.gaussian() == r2.gaussian());

  riq::Rng r3(77);
  const ComplexMatrix h = riq::random_hermitian(r3, 5, 1.0);
  CHECK(h.is_hermitian(1e-15));
  riq::Rng r4(77);
  CHECK(gap(riq::random_hermitian(r4, 5, 1.0), h) == 0.0);
}
