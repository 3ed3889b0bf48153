#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "riq/model.hpp"
#include "riq/perturb.hpp"
#include "riq/superoperator.hpp"

namespace riq {

/// Matrix of the derivation B |-> i [h, B].
inline SuperOperator hamiltonian_superoperator(const ComplexMatrix& h) {
  const ComplexMatrix id = ComplexMatrix::identity(h.rows());
  SuperOperator s = SuperOperator::left_right(h, id);
  s -= SuperOperator::left_right(id, h);
  s *= cplx(0.0, 1.0);
  return s;
}

/// Heisenberg-form dissipator of a jump list:
///   B |-> sum_j [ L_j B L_j^+ - 1/2 {L_j L_j^+, B} ].
inline SuperOperator dissipator_from_jumps(const std::vector<ComplexMatrix>& jumps,
                                           std::size_t dim) {
  const ComplexMatrix id = ComplexMatrix::identity(dim);
  SuperOperator s = SuperOperator::zero(dim);
  for (const auto& l : jumps) {
    if (l.rows() != dim || l.cols() != dim)
      throw std::invalid_argument("dissipator_from_jumps: jump size mismatch");
    s += SuperOperator::left_right(l, l.adjoint());
    const ComplexMatrix lld = l * l.adjoint();
    SuperOperator anti = SuperOperator::left_right(lld, id);
    anti += SuperOperator::left_right(id, lld);
    anti *= cplx(-0.5, 0.0);
    s += anti;
  }
  return s;
}

/// The critical-regime effective generator i[h0,.] + dissipator, carried with
/// the weighted jump operators that reconstruct the dissipative part.
struct LindbladGenerator {
  SuperOperator hamiltonianPart; // i [h0, .]
  SuperOperator dissipator;      // thermal quadratic dissipator
  std::vector<ComplexMatrix> jumpOperators;

  SuperOperator full() const {
    SuperOperator s = hamiltonianPart;
    s += dissipator;
    return s;
  }

  /// || dissipator - (reconstruction from jumpOperators) ||, a structural
  /// self-check that the jump list and the assembled dissipator agree.
  double reconstruction_defect() const {
    const SuperOperator rec = dissipator_from_jumps(jumpOperators, dissipator.dim);
    return (dissipator.matrix - rec.matrix).frobenius_norm();
  }
};

/// Weighted jumps of the thermal dissipator:
///   L_j     = e^{-beta delta_j / 2} Z(beta)^{-1/2} V_j   (j = 1..n),
///   L_{n+j} =                       Z(beta)^{-1/2} V_j^+ (j = 1..n).
/// The Heisenberg-form dissipator they generate is exactly gamma_beta.
inline LindbladGenerator build_lindblad(const InteractionModel& model) {
  const GibbsWeights w = gibbs_weights(model.beta, model.delta);
  const double zroot = 1.0 / std::sqrt(w.Z);
  LindbladGenerator gen{hamiltonian_superoperator(model.h0), gamma_beta(model), {}};
  gen.jumpOperators.reserve(2 * std::size_t(model.n));
  for (int j = 0; j < model.n; ++j) {
    ComplexMatrix l = model.V[std::size_t(j)];
    l *= cplx(std::sqrt(w.ratio(std::size_t(j) + 1)) * zroot, 0.0);
    gen.jumpOperators.push_back(std::move(l));
  }
  for (int j = 0; j < model.n; ++j) {
    ComplexMatrix l = model.V[std::size_t(j)].adjoint();
    l *= cplx(zroot, 0.0);
    gen.jumpOperators.push_back(std::move(l));
  }
  return gen;
}

/// e^{t (i[h0,.] + dissipator)} on observables. Unital; its dual is a
/// trace-preserving completely positive map on states.
inline SuperOperator semigroup(const LindbladGenerator& gen, double t) {
  if (t < 0.0) throw std::invalid_argument("semigroup: t must be >= 0");
  SuperOperator g = gen.full();
  g *= cplx(t, 0.0);
  return expm(g);
}

/// Choi matrix C = sum_{ij} E_ij (x) map(E_ij); the map is completely
/// positive iff C is positive semidefinite.
inline ComplexMatrix choi(const SuperOperator& s) {
  const std::size_t d = s.dim;
  ComplexMatrix c(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix eij(d, d);
      eij(i, j) = 1.0;
      c.set_block(i * d, j * d, s.apply(eij));
    }
  return c;
}

/// Smallest eigenvalue of the (Hermitian) Choi matrix -- the complete
/// positivity certificate; >= -tol means CP within tolerance.
inline double choi_min_eigenvalue(const SuperOperator& s) {
  const HermitianEigen eig = hermitian_eigen_raw(choi(s));
  return eig.values.front();
}

/// Model whose dissipator reproduces an arbitrary Heisenberg-form jump list:
/// beta = +inf kills the V . V^+ terms and Z = 1, so choosing V_j = K_j^+
/// makes gamma_beta(B) = sum_j K_j B K_j^+ - 1/2 {K_j K_j^+, B} exactly.
inline InteractionModel model_from_jumps(const ComplexMatrix& h0,
                                         const std::vector<ComplexMatrix>& jumps) {
  if (jumps.empty()) throw std::invalid_argument("model_from_jumps: empty jump list");
  InteractionModel m;
  m.d = int(h0.rows()) - 1;
  m.n = int(jumps.size());
  m.h0 = h0;
  m.beta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m.n; ++j) {
    m.delta.push_back(double(j + 1)); // any distinct positive levels work
    m.V.push_back(jumps[std::size_t(j)].adjoint());
  }
  m.check();
  return m;
}

}  // namespace riq
