#pragma once

#include <cstdint>
#include <utility>

#include "riq/expm.hpp"
#include "riq/model.hpp"
#include "riq/superoperator.hpp"

namespace riq {

/// Chain-level block view of a one-site operator: blocks[l][m] is the
/// (d+1)x(d+1) system matrix sitting at block row l, block column m.
struct BlockDecomposition {
  std::vector<std::vector<ComplexMatrix>> blocks;

  static BlockDecomposition split(const ComplexMatrix& m, std::size_t sys_dim) {
    if (!m.square() || sys_dim == 0 || m.rows() % sys_dim != 0)
      throw std::invalid_argument("BlockDecomposition: incompatible dimensions");
    const std::size_t nb = m.rows() / sys_dim;
    BlockDecomposition bd;
    bd.blocks.resize(nb);
    for (std::size_t l = 0; l < nb; ++l) {
      bd.blocks[l].reserve(nb);
      for (std::size_t c = 0; c < nb; ++c)
        bd.blocks[l].push_back(m.block(l * sys_dim, c * sys_dim, sys_dim, sys_dim));
    }
    return bd;
  }

  ComplexMatrix reassemble() const {
    const std::size_t nb = blocks.size();
    const std::size_t sd = blocks[0][0].rows();
    ComplexMatrix m(nb * sd, nb * sd);
    for (std::size_t l = 0; l < nb; ++l)
      for (std::size_t c = 0; c < nb; ++c) m.set_block(l * sd, c * sd, blocks[l][c]);
    return m;
  }
};

/// Ground-chain compression of a one-site step: the matrix A with
/// P U P = A on H0. Powers of A give the reduced Schrodinger dynamics.
inline ComplexMatrix schrodinger_block(const ComplexMatrix& u, std::size_t sys_dim) {
  if (!u.square() || u.rows() % sys_dim != 0)
    throw std::invalid_argument("schrodinger_block: incompatible dimensions");
  return u.block(0, 0, sys_dim, sys_dim);
}

/// One-step Heisenberg map on system observables,
///   B |-> sum_m p_m sum_l (U_{l,m})^dagger B U_{l,m},
/// with p the per-site thermal weights (p_m = e^{-beta delta_m}/Z). Unital by
/// construction since sum_l (U_{l,m})^dagger U_{l,m} = I for unitary U.
inline SuperOperator heisenberg_map(const ComplexMatrix& u, const GibbsWeights& weights) {
  const std::size_t nb = weights.p.size();
  if (!u.square() || u.rows() % nb != 0)
    throw std::invalid_argument("heisenberg_map: unitary size incompatible with weights");
  const std::size_t sd = u.rows() / nb;
  SuperOperator s = SuperOperator::zero(sd);
  for (std::size_t m = 0; m < nb; ++m) {
    if (weights.p[m] == 0.0) continue;
    for (std::size_t l = 0; l < nb; ++l) {
      const ComplexMatrix ulm = u.block(l * sd, m * sd, sd, sd);
      SuperOperator term = SuperOperator::left_right(ulm.adjoint(), ulm);
      term *= cplx(weights.p[m], 0.0);
      s += term;
    }
  }
  return s;
}

struct FullChainResult {
  ComplexMatrix schrodinger;  // P U(k,0) P restricted to H0
  ComplexMatrix heisenberg;   // weighted chain trace of U(k,0)^dagger (B (x) I) U(k,0)
};

namespace detail {

// Full-space layout: index = i * (n+1)^k + sum_s m_s (n+1)^{s-1}; the system
// index is the outer (slowest) factor, site 1 the innermost chain digit.
inline std::size_t swap_chain_digits(std::size_t idx, std::size_t site_dim,
                                     std::size_t chain_size, int j) {
  const std::size_t sys = idx / chain_size;
  std::size_t chain = idx % chain_size;
  std::size_t pw = 1;
  for (int s = 1; s < j; ++s) pw *= site_dim;
  const std::size_t d1 = chain % site_dim;
  const std::size_t dj = (chain / pw) % site_dim;
  chain = chain - d1 - dj * pw + dj + d1 * pw;  // digit1 <- dj, digitj <- d1
  return sys * chain_size + chain;
}

}  // namespace detail

/// Exact finite-chain reference dynamics. Builds the step-1 unitary by
/// embedding the one-site generator into the full tensor space and
/// exponentiating the full matrix (free phases of idle sites ride along
/// automatically); the step-j unitary is its exact conjugation by the
/// site-(1<->j) swap. Guarded to (d+1)(n+1)^k <= 4096.
inline FullChainResult full_chain_oracle(const InteractionModel& model, double lambda,
                                         double tau, int k, const ComplexMatrix& B) {
  model.check();
  if (k < 1) throw std::invalid_argument("full_chain_oracle: k must be >= 1");
  const std::size_t sd = std::size_t(model.sys_dim());
  const std::size_t cd = std::size_t(model.site_dim());
  if (B.rows() != sd || B.cols() != sd)
    throw std::invalid_argument("full_chain_oracle: observable must be (d+1)x(d+1)");
  double dims = double(sd);
  for (int s = 0; s < k; ++s) dims *= double(cd);
  if (dims > 4096.0)
    throw std::invalid_argument("full_chain_oracle: (d+1)(n+1)^k exceeds 4096");

  std::size_t chain_size = 1;
  for (int s = 0; s < k; ++s) chain_size *= cd;
  const std::size_t D = sd * chain_size;

  const OneSiteOperators ops = build_one_site(model);
  ComplexMatrix h_one = ops.H0;
  {
    ComplexMatrix w = ops.W;
    w *= cplx(lambda, 0.0);
    h_one += w;
  }

  // Step-1 Hamiltonian on the full space: one-site part on (system, site 1)
  // plus the free energies of the idle sites 2..k.
  ComplexMatrix h1(D, D);
  for (std::size_t b = 0; b < D; ++b) {
    const std::size_t i = b / chain_size;
    const std::size_t chain = b % chain_size;
    const std::size_t m1 = chain % cd;
    const std::size_t rest = chain - m1;
    for (std::size_t ip = 0; ip < sd; ++ip)
      for (std::size_t m1p = 0; m1p < cd; ++m1p) {
        const cplx v = h_one(m1p * sd + ip, m1 * sd + i);
        if (v == cplx(0.0, 0.0)) continue;
        h1(ip * chain_size + rest + m1p, b) += v;
      }
    double idle = 0.0;
    std::size_t digits = chain / cd;
    for (int s = 2; s <= k; ++s) {
      const std::size_t ms = digits % cd;
      if (ms > 0) idle += model.delta[ms - 1];
      digits /= cd;
    }
    h1(b, b) += idle;
  }

  ComplexMatrix minus_i_tau_h = h1;
  minus_i_tau_h *= cplx(0.0, -tau);
  const ComplexMatrix u1 = expm(minus_i_tau_h);

  ComplexMatrix u = u1;
  for (int j = 2; j <= k; ++j) {
    ComplexMatrix uj(D, D);
    for (std::size_t a = 0; a < D; ++a) {
      const std::size_t pa = detail::swap_chain_digits(a, cd, chain_size, j);
      for (std::size_t b = 0; b < D; ++b)
        uj(a, b) = u1(pa, detail::swap_chain_digits(b, cd, chain_size, j));
    }
    u = uj * u;
  }

  FullChainResult res;
  res.schrodinger = ComplexMatrix(sd, sd);
  for (std::size_t i = 0; i < sd; ++i)
    for (std::size_t j = 0; j < sd; ++j)
      res.schrodinger(i, j) = u(i * chain_size, j * chain_size);

  const GibbsWeights g = gibbs_weights(model.beta, model.delta);
  std::vector<double> w(chain_size, 1.0);
  for (std::size_t c = 0; c < chain_size; ++c) {
    std::size_t digits = c;
    for (int s = 1; s <= k; ++s) {
      w[c] *= g.p[digits % cd];
      digits /= cd;
    }
  }
  const ComplexMatrix m = u.adjoint() * kron(B, ComplexMatrix::identity(chain_size)) * u;
  res.heisenberg = partial_trace_last(m, w);
  return res;
}

}  // namespace riq
