#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using riq::ComplexMatrix;
using riq::cplx;

namespace {

riq::InteractionModel two_level_model(double eps, double delta, const ComplexMatrix& v,
                                      double beta) {
  riq::InteractionModel m;
  m.d = 1;
  m.n = 1;
  m.h0 = ComplexMatrix{{cplx(-eps, 0), cplx(0, 0)}, {cplx(0, 0), cplx(eps, 0)}};
  m.delta = {delta};
  m.V = {v};
  m.beta = beta;
  return m;
}

}  // namespace

TEST_CASE("one-site layout: chain level outer, system level inner", "[model]") {
  riq::InteractionModel m;
  m.d = 2;
  m.n = 2;
  m.h0 = ComplexMatrix(3, 3);
  m.h0(0, 0) = 0.1;
  m.h0(1, 1) = 0.2;
  m.h0(2, 2) = 0.7;
  m.delta = {1.5, 2.25};
  riq::Rng rng(1);
  m.V = {riq::random_matrix(rng, 3, 3), riq::random_matrix(rng, 3, 3)};
  m.beta = 0.5;
  m.check();

  const riq::OneSiteOperators ops = riq::build_one_site(m);
  REQUIRE(ops.H0.rows() == 9);
  // H0 index (system i, chain m) = m*(d+1)+i carries energy E_i + delta_m.
  const double evals[3] = {0.1, 0.2, 0.7};
  const double dl[3] = {0.0, 1.5, 2.25};
  for (std::size_t mm = 0; mm < 3; ++mm)
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(std::abs(ops.H0(mm * 3 + i, mm * 3 + i) - cplx(evals[i] + dl[mm], 0)) < 1e-15);

  // Coupling blocks: W_{m,0} = V_m, W_{0,m} = V_m^+, all else zero.
  const riq::BlockDecomposition wb = riq::BlockDecomposition::split(ops.W, 3);
  CHECK(gap(wb.blocks[1][0], m.V[0]) == 0.0);
  CHECK(gap(wb.blocks[2][0], m.V[1]) == 0.0);
  CHECK(gap(wb.blocks[0][1], m.V[0].adjoint()) == 0.0);
  CHECK(gap(wb.blocks[0][2], m.V[1].adjoint()) == 0.0);
  CHECK(ops.W.block(3, 3, 6, 6).max_abs() == 0.0);
  CHECK(riq::op_norm(wb.blocks[0][0]) == 0.0);
  CHECK(ops.W.is_hermitian(1e-15));
}

TEST_CASE("4x4 coupled hamiltonian written out", "[model]") {
  const double eps = 0.65, delta = 1.1, lambda = 0.3;
  const cplx a(0.2, 0.4), b(-0.5, 0.1), c(0.7, -0.3), d(0.05, 0.6);
  const riq::InteractionModel m =
      two_level_model(eps, delta, ComplexMatrix{{a, b}, {c, d}}, 1.0);
  m.check();
  const riq::OneSiteOperators ops = riq::build_one_site(m);
  ComplexMatrix h = ops.H0;
  h += cplx(lambda, 0) * ops.W;

  // Basis (system, chain) = (0,0),(1,0),(0,1),(1,1):
  //   [ -eps      0          l conj(a)  l conj(c) ]
  //   [  0        eps        l conj(b)  l conj(d) ]
  //   [  l a      l b        delta-eps  0         ]
  //   [  l c      l d        0          delta+eps ]
  const cplx l(lambda, 0);
  CHECK(std::abs(h(0, 0) - cplx(-eps, 0)) < 1e-15);
  CHECK(std::abs(h(1, 1) - cplx(eps, 0)) < 1e-15);
  CHECK(std::abs(h(2, 2) - cplx(delta - eps, 0)) < 1e-15);
  CHECK(std::abs(h(3, 3) - cplx(delta + eps, 0)) < 1e-15);
  CHECK(std::abs(h(0, 2) - l * std::conj(a)) < 1e-15);
  CHECK(std::abs(h(0, 3) - l * std::conj(c)) < 1e-15);
  CHECK(std::abs(h(1, 2) - l * std::conj(b)) < 1e-15);
  CHECK(std::abs(h(1, 3) - l * std::conj(d)) < 1e-15);
  CHECK(std::abs(h(2, 0) - l * a) < 1e-15);
  CHECK(std::abs(h(2, 1) - l * b) < 1e-15);
  CHECK(std::abs(h(3, 0) - l * c) < 1e-15);
  CHECK(std::abs(h(3, 1) - l * d) < 1e-15);
  CHECK(std::abs(h(0, 1)) + std::abs(h(1, 0)) + std::abs(h(2, 3)) + std::abs(h(3, 2)) == 0.0);
}

TEST_CASE("gibbs weights on frozen temperatures", "[model]") {
  // beta = ln 2, one excited level at delta = 1: p = (2/3, 1/3), Z = 3/2.
  const riq::GibbsWeights w = riq::gibbs_weights(std::log(2.0), {1.0});
  REQUIRE(w.p.size() == 2);
  CHECK(std::abs(w.Z - 1.5) < 1e-15);
  CHECK(std::abs(w.p[0] - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(w.p[1] - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(w.ratio(1) - 0.5) < 1e-15);

  // beta = 0: uniform.
  const riq::GibbsWeights w0 = riq::gibbs_weights(0.0, {1.0, 2.0});
  for (double p : w0.p) CHECK(std::abs(p - 1.0 / 3.0) < 1e-15);

  // beta = +inf: ground state only.
  const riq::GibbsWeights wi =
      riq::gibbs_weights(std::numeric_limits<double>::infinity(), {1.0, 2.0});
  CHECK(wi.Z == 1.0);
  CHECK(wi.p[0] == 1.0);
  CHECK(wi.p[1] == 0.0);
  CHECK(wi.p[2] == 0.0);

  const double s = w.p[0] + w.p[1];
  CHECK(std::abs(s - 1.0) < 1e-15);
}

TEST_CASE("model validation rejects malformed input", "[model]") {
  riq::InteractionModel m = two_level_model(1.0, 1.0, identity_matrix(2), 1.0);
  m.check(); // baseline is fine

  riq::InteractionModel bad = m;
  bad.V = {ComplexMatrix(3, 3)};
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);

  bad = m;
  bad.delta = {1.0, 2.0};
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);

  bad = m;
  bad.h0(0, 1) = cplx(0.3, 0); // breaks hermiticity against the zero below it
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);

  bad = m;
  bad.d = 0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);

  bad = m;
  bad.beta = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

TEST_CASE("one-step unitary is unitary and reduces correctly at lambda=0", "[model]") {
  const riq::InteractionModel m = riq::random_model(21);
  for (double lambda : {0.0, 0.4, 1.0}) {
    const ComplexMatrix u = riq::one_step_unitary(m, lambda, 0.8);
    CHECK(gap(u.adjoint() * u, identity_matrix(u.rows())) < 1e-13);
  }
  // Uncoupled step factorizes over the blocks; the ground block is e^{-i tau h0}.
  const ComplexMatrix u0 = riq::one_step_unitary(m, 0.0, 0.8);
  CHECK(riq::op_norm(riq::schrodinger_block(u0, 2) - riq::hermitian_propagator(m.h0, 0.8)) <
        1e-13);
}

TEST_CASE("seeded models are reproducible", "[model]") {
  const riq::InteractionModel a = riq::random_model(5);
  const riq::InteractionModel b = riq::random_model(5);
  CHECK(gap(a.h0, b.h0) == 0.0);
  CHECK(gap(a.V[0], b.V[0]) == 0.0);
  CHECK(a.delta == b.delta);
  const riq::InteractionModel c = riq::random_model(6);
  CHECK(gap(a.h0, c.h0) > 0.0);

  const riq::InteractionModel big = riq::random_model(5, 2, 3, 0.7);
  CHECK(big.d == 2);
  CHECK(big.n == 3);
  CHECK(big.V.size() == 3);
  big.check();
}
