#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using riq::ComplexMatrix;
using riq::cplx;

TEST_CASE("jump-list dissipator reproduces the thermal dissipator", "[lindblad]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const riq::InteractionModel m = riq::random_model(seed, 1, 2, 0.8);
    const riq::LindbladGenerator gen = riq::build_lindblad(m);
    CHECK(riq::op_norm(gen.dissipator.matrix - riq::gamma_beta(m).matrix) < 1e-12);
    CHECK(gen.reconstruction_defect() < 1e-11);
    CHECK(riq::op_norm(gen.hamiltonianPart.matrix -
                       riq::hamiltonian_superoperator(m.h0).matrix) < 1e-14);
  }

  // Zero temperature: only the V^+ . V jumps survive.
  riq::InteractionModel cold = riq::random_model(4);
  cold.beta = std::numeric_limits<double>::infinity();
  const riq::LindbladGenerator gen = riq::build_lindblad(cold);
  CHECK(riq::op_norm(gen.dissipator.matrix - riq::gamma_beta(cold).matrix) < 1e-12);
  CHECK(riq::op_norm(gen.jumpOperators[0]) < 1e-14);            // thermal weight e^{-beta delta} = 0
  CHECK(gap(gen.jumpOperators[1], cold.V[0].adjoint()) < 1e-14); // vacuum weight 1
}

TEST_CASE("infinite-temperature jump weights are both 1/sqrt(2)", "[lindblad]") {
  riq::InteractionModel m = riq::random_model(5);
  m.beta = 0.0; // Z = 2, both weights e^{0}/Z = 1/2 under the square root
  const riq::LindbladGenerator gen = riq::build_lindblad(m);
  REQUIRE(gen.jumpOperators.size() == 2);
  const double w = 1.0 / std::sqrt(2.0);
  CHECK(gap(gen.jumpOperators[0], cplx(w, 0) * m.V[0]) < 1e-14);
  CHECK(gap(gen.jumpOperators[1], cplx(w, 0) * m.V[0].adjoint()) < 1e-14);
}

TEST_CASE("semigroup is unital, CP, and obeys the group law", "[lindblad]") {
  const riq::InteractionModel m = riq::random_model(6, 2, 1, 1.1);
  const riq::LindbladGenerator gen = riq::build_lindblad(m);

  for (double t : {0.1, 1.0}) {
    const riq::SuperOperator e = riq::semigroup(gen, t);
    CHECK(e.unitality_defect() < 1e-9);
    CHECK(riq::choi_min_eigenvalue(e.dual()) > -1e-9);
    // Dual preserves the trace of states.
    riq::Rng rng(60);
    const ComplexMatrix rho = riq::random_matrix(rng, 3, 3);
    CHECK(std::abs(e.dual().apply(rho).trace() - rho.trace()) < 1e-9);
  }

  const riq::SuperOperator a = riq::semigroup(gen, 0.4);
  const riq::SuperOperator b = riq::semigroup(gen, 0.6);
  const riq::SuperOperator c = riq::semigroup(gen, 1.0);
  CHECK(riq::op_norm(a.compose(b).matrix - c.matrix) < 1e-9);
  CHECK(riq::op_norm(riq::semigroup(gen, 0.0).matrix -
                     riq::SuperOperator::identity(3).matrix) < 1e-13);
  CHECK_THROWS_AS(riq::semigroup(gen, -0.5), std::invalid_argument);
}

TEST_CASE("choi matrix separates CP from positivity-only", "[lindblad]") {
  // Identity map: Choi = sum_ij E_ij (x) E_ij, rank one with eigenvalue d.
  const riq::SuperOperator idm = riq::SuperOperator::identity(2);
  const riq::HermitianEigen idEig = riq::hermitian_eigen_raw(riq::choi(idm));
  CHECK(std::abs(idEig.values.back() - 2.0) < 1e-12);
  CHECK(std::abs(idEig.values.front()) < 1e-12);

  // Transposition is positive but not completely positive: its Choi matrix is
  // the swap, eigenvalues +-1.
  ComplexMatrix swapLike(4, 4);
  // matrix of X -> X^T in the column-stacking convention: vec(X^T)[i+2j] = X(j,i)
  swapLike(0, 0) = 1.0;
  swapLike(1, 2) = 1.0;
  swapLike(2, 1) = 1.0;
  swapLike(3, 3) = 1.0;
  const riq::SuperOperator transp(2, swapLike);
  riq::Rng rng(61);
  const ComplexMatrix x = riq::random_matrix(rng, 2, 2);
  REQUIRE(gap(transp.apply(x), x.transpose()) < 1e-14);
  CHECK(std::abs(riq::choi_min_eigenvalue(transp) + 1.0) < 1e-12);
}

TEST_CASE("arbitrary jump lists round-trip through a chain model", "[lindblad]") {
  riq::Rng rng(62);
  const ComplexMatrix h0 = riq::random_hermitian(rng, 3, 1.0);
  const std::vector<ComplexMatrix> jumps = {riq::random_matrix(rng, 3, 3),
                                            riq::random_matrix(rng, 3, 3)};
  const riq::InteractionModel m = riq::model_from_jumps(h0, jumps);
  const riq::LindbladGenerator gen = riq::build_lindblad(m);
  CHECK(riq::op_norm(gen.dissipator.matrix -
                     riq::dissipator_from_jumps(jumps, 3).matrix) < 1e-10);
  CHECK(riq::op_norm(gen.hamiltonianPart.matrix -
                     riq::hamiltonian_superoperator(h0).matrix) < 1e-14);
  // The reconstructed jumps match the input up to the trivial weight 1.
  REQUIRE(gen.jumpOperators.size() == 4); // two thermal slots are empty at beta = inf
  CHECK(gap(gen.jumpOperators[2], jumps[0]) < 1e-13);
  CHECK(gap(gen.jumpOperators[3], jumps[1]) < 1e-13);

  CHECK_THROWS_AS(riq::model_from_jumps(h0, {}), std::invalid_argument);
}

TEST_CASE("dissipator definition matches its formula", "[lindblad]") {
  riq::Rng rng(63);
  const std::vector<ComplexMatrix> ls = {riq::random_matrix(rng, 2, 2)};
  const riq::SuperOperator d = riq::dissipator_from_jumps(ls, 2);
  const ComplexMatrix b = riq::random_matrix(rng, 2, 2);
  const ComplexMatrix& l = ls[0];
  const ComplexMatrix expect =
      l * b * l.adjoint() - cplx(0.5, 0) * riq::anticommutator(l * l.adjoint(), b);
  CHECK(gap(d.apply(b), expect) < 1e-13);
}
