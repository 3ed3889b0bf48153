#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "riq/complex_matrix.hpp"
#include "riq/rng.hpp"
#include "riq/spectral.hpp"

namespace riq {

/// A small (d+1)-level system coupled to a chain of identical (n+1)-level
/// sites. delta[m-1] is the energy of excited chain level m (ground level 0
/// has energy 0); V[m-1] is the coupling matrix attached to level m.
/// beta = +inf is a legal value (vacuum-only weights).
struct InteractionModel {
  int d = 1;
  int n = 1;
  ComplexMatrix h0;                // (d+1)x(d+1) Hermitian
  std::vector<double> delta;       // n entries
  std::vector<ComplexMatrix> V;    // n entries, each (d+1)x(d+1)
  double beta = 0.0;

  int sys_dim() const { return d + 1; }
  int site_dim() const { return n + 1; }
  int one_site_dim() const { return (d + 1) * (n + 1); }

  void check() const {
    if (d < 1) throw std::invalid_argument("model: d must be >= 1");
    if (n < 1) throw std::invalid_argument("model: n must be >= 1");
    const std::size_t sd = std::size_t(d + 1);
    if (h0.rows() != sd || h0.cols() != sd)
      throw std::invalid_argument("model: h0 must be (d+1)x(d+1)");
    if (!h0.is_hermitian(1e-12 * std::max(1.0, h0.frobenius_norm())))
      throw std::invalid_argument("model: h0 is not Hermitian within tolerance");
    if (delta.size() != std::size_t(n))
      throw std::invalid_argument("model: delta must have n entries");
    if (V.size() != std::size_t(n))
      throw std::invalid_argument("model: V must have n entries");
    for (const auto& v : V)
      if (v.rows() != sd || v.cols() != sd)
        throw std::invalid_argument("model: every V[m] must be (d+1)x(d+1)");
    if (std::isnan(beta)) throw std::invalid_argument("model: beta is NaN");
  }
};

/// Free one-site operators in the fixed basis ordering: index (system level i,
/// chain level m) flattens to m*(d+1)+i, so the space is chain (x) system and
/// chain-level blocks are contiguous (ground block first).
struct OneSiteOperators {
  ComplexMatrix H0;  // h0 + chain free energy, block-diagonal
  ComplexMatrix W;   // coupling: block (m,0) = V_m, block (0,m) = V_m^dagger
};

struct GibbsWeights {
  std::vector<double> p;  // n+1 entries, p[0] = vacuum weight
  double Z = 1.0;         // 1 + sum_m e^{-beta delta_m}

  /// e^{-beta delta_m} = p[m]/p[0]; finite even at beta = +inf.
  double ratio(std::size_t m) const { return p[m] / p[0]; }
};

/// Thermal weights of one chain site. beta = +inf selects the vacuum,
/// p = (1,0,...,0), by convention (branching avoids inf*0 = NaN for
/// delta_m = 0 and keeps negative delta from overflowing).
inline GibbsWeights gibbs_weights(double beta, const std::vector<double>& delta) {
  GibbsWeights g;
  g.p.assign(delta.size() + 1, 0.0);
  if (std::isinf(beta)) {
    g.p[0] = 1.0;
    g.Z = 1.0;
    return g;
  }
  double z = 1.0;
  for (double dm : delta) z += std::exp(-beta * dm);
  g.Z = z;
  g.p[0] = 1.0 / z;
  for (std::size_t m = 0; m < delta.size(); ++m) g.p[m + 1] = std::exp(-beta * delta[m]) / z;
  return g;
}

inline OneSiteOperators build_one_site(const InteractionModel& model) {
  model.check();
  const std::size_t sd = std::size_t(model.d + 1);
  const std::size_t cd = std::size_t(model.n + 1);

  ComplexMatrix chain_energy(cd, cd);
  for (std::size_t m = 1; m < cd; ++m) chain_energy(m, m) = model.delta[m - 1];

  OneSiteOperators ops;
  ops.H0 = kron(ComplexMatrix::identity(cd), model.h0) +
           kron(chain_energy, ComplexMatrix::identity(sd));

  ops.W = ComplexMatrix(sd * cd, sd * cd);
  for (std::size_t m = 1; m < cd; ++m) {
    ComplexMatrix raise(cd, cd), lower(cd, cd);
    raise(m, 0) = 1.0;  // |x_m><omega|
    lower(0, m) = 1.0;
    ops.W += kron(raise, model.V[m - 1]) + kron(lower, model.V[m - 1].adjoint());
  }
  return ops;
}

/// One interaction step: U = e^{-i tau (H0 + lambda W)} via the Hermitian
/// eigendecomposition route (unitary to eigensolver accuracy).
inline ComplexMatrix one_step_unitary(const InteractionModel& model, double lambda,
                                      double tau) {
  const OneSiteOperators ops = build_one_site(model);
  ComplexMatrix h = ops.H0;
  ComplexMatrix w = ops.W;
  w *= cplx(lambda, 0.0);
  h += w;
  return hermitian_propagator(h, tau);
}

/// Seeded generic model: nondegenerate h0, distinct positive chain energies,
/// O(1) couplings. Every acceptance run derives its models from this.
inline InteractionModel random_model(std::uint64_t seed, int d = 1, int n = 1,
                                     double beta = 1.0, double coupling_scale = 0.7) {
  Rng rng(seed);
  InteractionModel m;
  m.d = d;
  m.n = n;
  m.beta = beta;
  m.h0 = random_hermitian(rng, std::size_t(d + 1), 1.0);
  m.delta.resize(std::size_t(n));
  for (auto& dm : m.delta) dm = rng.uniform(0.4, 2.1);
  m.V.resize(std::size_t(n));
  for (auto& v : m.V) v = random_matrix(rng, std::size_t(d + 1), std::size_t(d + 1),
                                        coupling_scale);
  return m;
}

inline ComplexMatrix random_observable(std::uint64_t seed, int d) {
  Rng rng(seed);
  return random_hermitian(rng, std::size_t(d + 1), 1.0);
}

}  // namespace riq
