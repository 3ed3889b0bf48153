#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "riq/complex_matrix.hpp"
#include "riq/model.hpp"
#include "riq/perturb.hpp"
#include "riq/reduced.hpp"
#include "riq/superoperator.hpp"

namespace riq {

/// Two-level system coupled to two-level chain sites:
///   h0 = epsilon sigma_z = diag(-epsilon, +epsilon) in the {ground, excited}
///   basis, one chain excitation energy delta, V = [[a, b], [c, d]].
struct QubitModel {
  double epsilon = 1.0;
  double delta = 1.0;
  cplx a, b, c, d;
  double beta = 0.0;
};

inline ComplexMatrix pauli_z() { return {{-1.0, 0.0}, {0.0, 1.0}}; }
inline ComplexMatrix pauli_plus() { return {{0.0, 0.0}, {1.0, 0.0}}; }   // |excited><ground|
inline ComplexMatrix pauli_minus() { return {{0.0, 1.0}, {0.0, 0.0}}; }  // |ground><excited|

inline InteractionModel to_interaction_model(const QubitModel& q) {
  InteractionModel m;
  m.d = 1;
  m.n = 1;
  m.h0 = ComplexMatrix{{-q.epsilon, 0.0}, {0.0, q.epsilon}};
  m.delta = {q.delta};
  m.V = {ComplexMatrix{{q.a, q.b}, {q.c, q.d}}};
  m.beta = q.beta;
  m.check();
  return m;
}

/// Closed-form phase degeneracy gate: the free phases e^{+-2 i tau epsilon}
/// separate from 1 exactly when epsilon*tau avoids integer multiples of pi.
inline void require_generic_phase(const QubitModel& q, double tau) {
  if (std::abs(std::sin(q.epsilon * tau)) <= 1e-9)
    throw std::domain_error(
        "qubit: epsilon*tau is an integer multiple of pi; free phases collapse");
}

namespace detail {

inline double gibbs_ratio(const QubitModel& q) {
  return std::isinf(q.beta) ? 0.0 : std::exp(-q.beta * q.delta);
}

}  // namespace detail

/// First-order block coupling the ground chain sector into the excited one,
/// entrywise: row r carries e^{-i tau (E_r + delta)}, each entry one
/// oscillatory integral at the matching energy gap.
inline ComplexMatrix f10_closed(const QubitModel& q, double tau) {
  const double e = q.epsilon, dl = q.delta;
  const cplx mi(0.0, -1.0);
  const cplx row0 = std::exp(cplx(0.0, tau * (e - dl)));   // e^{-i tau (-eps+delta)}
  const cplx row1 = std::exp(cplx(0.0, -tau * (e + dl)));  // e^{-i tau (+eps+delta)}
  ComplexMatrix f(2, 2);
  f(0, 0) = mi * q.a * row0 * detail::osc1(dl, tau);
  f(0, 1) = mi * q.b * row0 * detail::osc1(dl - 2.0 * e, tau);
  f(1, 0) = mi * q.c * row1 * detail::osc1(dl + 2.0 * e, tau);
  f(1, 1) = mi * q.d * row1 * detail::osc1(dl, tau);
  return f;
}

/// Companion block (excited -> ground); equals the adjoint of the first-order
/// block taken at -tau.
inline ComplexMatrix f01_closed(const QubitModel& q, double tau) {
  const double e = q.epsilon, dl = q.delta;
  const cplx mi(0.0, -1.0);
  const cplx row0 = std::exp(cplx(0.0, tau * e));
  const cplx row1 = std::exp(cplx(0.0, -tau * e));
  ComplexMatrix f(2, 2);
  f(0, 0) = mi * std::conj(q.a) * row0 * detail::osc1(-dl, tau);
  f(0, 1) = mi * std::conj(q.c) * row0 * detail::osc1(-dl - 2.0 * e, tau);
  f(1, 0) = mi * std::conj(q.b) * row1 * detail::osc1(2.0 * e - dl, tau);
  f(1, 1) = mi * std::conj(q.d) * row1 * detail::osc1(-dl, tau);
  return f;
}

namespace detail {

/// Diagonal entries of the second-order block on the ground chain sector.
inline std::array<cplx, 2> g00_diagonal(const QubitModel& q, double tau) {
  const double e = q.epsilon, dl = q.delta;
  const double na = std::norm(q.a), nb = std::norm(q.b), nc = std::norm(q.c),
               nd = std::norm(q.d);
  std::array<cplx, 2> g;
  g[0] = -std::exp(cplx(0.0, tau * e)) *
         (na * osc2(-dl, dl, tau) + nc * osc2(-dl - 2.0 * e, dl + 2.0 * e, tau));
  g[1] = -std::exp(cplx(0.0, -tau * e)) *
         (nb * osc2(2.0 * e - dl, dl - 2.0 * e, tau) + nd * osc2(-dl, dl, tau));
  return g;
}

/// Diagonal entries of the second-order block on the excited chain sector.
inline std::array<cplx, 2> g11_diagonal(const QubitModel& q, double tau) {
  const double e = q.epsilon, dl = q.delta;
  const double na = std::norm(q.a), nb = std::norm(q.b), nc = std::norm(q.c),
               nd = std::norm(q.d);
  std::array<cplx, 2> g;
  g[0] = -std::exp(cplx(0.0, -tau * (dl - e))) *
         (na * osc2(dl, -dl, tau) + nb * osc2(dl - 2.0 * e, 2.0 * e - dl, tau));
  g[1] = -std::exp(cplx(0.0, -tau * (dl + e))) *
         (nc * osc2(dl + 2.0 * e, -dl - 2.0 * e, tau) + nd * osc2(dl, -dl, tau));
  return g;
}

}  // namespace detail

/// Tr(sigma- T_beta(sigma+)): Z times the lambda^2 coefficient of the raising
/// branch of the one-step Heisenberg map, assembled from the closed-form
/// first- and second-order blocks.
inline cplx tbeta_raising_trace(const QubitModel& q, double tau) {
  const ComplexMatrix f10 = f10_closed(q, tau);
  const ComplexMatrix f01 = f01_closed(q, tau);
  const auto g00 = detail::g00_diagonal(q, tau);
  const auto g11 = detail::g11_diagonal(q, tau);
  const double r = detail::gibbs_ratio(q);
  const cplx pe = std::exp(cplx(0.0, tau * q.epsilon));
  const cplx pd = std::exp(cplx(0.0, tau * q.delta));
  cplx val = f10(0, 0) * std::conj(f10(1, 1)) + pe * (g00[0] + std::conj(g00[1]));
  val += r * (f01(0, 0) * std::conj(f01(1, 1)) +
              pe * (pd * g11[0] + std::conj(pd) * std::conj(g11[1])));
  return val;
}

/// One-step lambda^2 coefficient restricted to span{I/sqrt2, sigma_z/sqrt2}:
/// upper triangular with zero first column (the map kills the identity), the
/// (2,2) entry real and nonpositive.
inline ComplexMatrix tbeta_restricted(const QubitModel& q, double tau) {
  const ComplexMatrix f10 = f10_closed(q, tau);
  const double od21 = std::norm(f10(1, 0));
  const double od12 = std::norm(f10(0, 1));
  const double r = detail::gibbs_ratio(q);
  ComplexMatrix t(2, 2);
  t(0, 1) = (od21 - od12) * (1.0 - r);
  t(1, 1) = -(od12 + od21) * (1.0 + r);
  return t;
}

namespace detail {

/// B |-> <in, B>_HS out as a superoperator matrix (rank one).
inline SuperOperator hs_rank_one(const ComplexMatrix& out, const ComplexMatrix& in) {
  const std::vector<cplx> vo = vec(out), vi = vec(in);
  SuperOperator s = SuperOperator::zero(out.rows());
  for (std::size_t i = 0; i < vo.size(); ++i)
    for (std::size_t j = 0; j < vi.size(); ++j) s.matrix(i, j) = vo[i] * std::conj(vi[j]);
  return s;
}

inline cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

}  // namespace detail

/// Spectrum of the free one-step conjugation B |-> e^{i tau h0} B e^{-i tau h0}:
/// eigenvalue 1 twice (identity and sigma_z directions) and e^{-+2 i tau eps}
/// on the lowering/raising directions, with orthogonal rank-one projectors.
struct UZeroSpectrum {
  std::array<cplx, 4> eigenvalues;
  std::array<SuperOperator, 4> projectors;  // order: I, sigma_z, sigma-, sigma+
};

inline UZeroSpectrum uzero_spectrum(const QubitModel& q, double tau) {
  require_generic_phase(q, tau);
  const double is2 = 1.0 / std::sqrt(2.0);
  const ComplexMatrix ihat = ComplexMatrix::identity(2) * cplx(is2, 0.0);
  const ComplexMatrix zhat = pauli_z() * cplx(is2, 0.0);
  UZeroSpectrum s;
  s.eigenvalues = {cplx(1.0), cplx(1.0), std::exp(cplx(0.0, -2.0 * tau * q.epsilon)),
                   std::exp(cplx(0.0, 2.0 * tau * q.epsilon))};
  s.projectors = {detail::hs_rank_one(ihat, ihat), detail::hs_rank_one(zhat, zhat),
                  detail::hs_rank_one(pauli_minus(), pauli_minus()),
                  detail::hs_rank_one(pauli_plus(), pauli_plus())};
  return s;
}

namespace detail {

struct SmallEigen {
  std::array<cplx, 4> values;
  std::array<ComplexMatrix, 4> projectors;
};

/// Eigen-decomposition of a (generically diagonalizable) 4x4: characteristic
/// polynomial by the Faddeev-LeVerrier recursion, roots by Durand-Kerner,
/// spectral projectors as Lagrange polynomials in the matrix.
inline SmallEigen eigen4(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw std::invalid_argument("eigen4: need 4x4");
  const ComplexMatrix id = ComplexMatrix::identity(4);

  // p(x) = x^4 + a[3] x^3 + a[2] x^2 + a[1] x + a[0]
  std::array<cplx, 4> a{};
  ComplexMatrix mk = m;
  cplx ck = mk.trace();
  a[3] = -ck;
  for (int k = 2; k <= 4; ++k) {
    mk = m * (mk + id * a[std::size_t(5 - k)]);
    ck = mk.trace() / double(k);
    a[std::size_t(4 - k)] = -ck;
  }

  auto poly = [&a](cplx z) { return (((z + a[3]) * z + a[2]) * z + a[1]) * z + a[0]; };

  std::array<cplx, 4> z;
  const cplx w(0.4, 0.9);
  z[0] = 1.0;
  for (int j = 1; j < 4; ++j) z[std::size_t(j)] = z[std::size_t(j) - 1] * w;
  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0.0;
    for (int j = 0; j < 4; ++j) {
      cplx den = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != j) den *= z[std::size_t(j)] - z[std::size_t(k)];
      if (std::abs(den) < 1e-30) {
        z[std::size_t(j)] += cplx(1e-8, 1e-8);
        shift = 1.0;
        continue;
      }
      const cplx dz = poly(z[std::size_t(j)]) / den;
      z[std::size_t(j)] -= dz;
      shift = std::max(shift, std::abs(dz));
    }
    if (shift < 1e-15) break;
  }

  SmallEigen out;
  out.values = z;
  for (int i = 0; i < 4; ++i) {
    ComplexMatrix p = id;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      const cplx gap = z[std::size_t(i)] - z[std::size_t(j)];
      if (std::abs(gap) < 1e-10)
        throw std::domain_error("eigen4: eigenvalues too close for spectral projectors");
      p = (m - id * z[std::size_t(j)]) * p;
      p *= 1.0 / gap;
    }
    out.projectors[std::size_t(i)] = std::move(p);
  }
  return out;
}

/// Assign each eigenbranch to a zeroth-order direction by maximizing the
/// total projector overlap |tr(P_branch P0_direction)| over all pairings.
inline std::array<int, 4> best_pairing(const SmallEigen& eig, const UZeroSpectrum& u0,
                                       double* defect_out = nullptr) {
  double score[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      score[i][j] = std::abs(trace_product(eig.projectors[std::size_t(i)],
                                           u0.projectors[std::size_t(j)].matrix));
  std::array<int, 4> perm{0, 1, 2, 3}, best{0, 1, 2, 3};
  double bestScore = -1.0;
  std::array<int, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end());
  do {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += score[i][idx[std::size_t(i)]];
    if (s > bestScore) {
      bestScore = s;
      best = idx;
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  perm = best;
  if (defect_out) {
    double defect = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double target = (perm[std::size_t(i)] == j) ? 1.0 : 0.0;
        defect = std::max(defect, std::abs(score[i][j] - target));
      }
    *defect_out = defect;
  }
  return perm;
}

/// Polynomial extrapolation of samples (x_i, y_i) to x = 0 (Neville tableau).
inline cplx neville_to_zero(std::vector<double> x, std::vector<cplx> y) {
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
  return y[0];
}

}  // namespace detail

/// Branch-resolved lambda^2 coefficients of the one-step Heisenberg map,
/// extracted numerically (quartic eigensolve per lambda, projector-overlap
/// branch tracking, Richardson extrapolation in lambda^2) and compared with
/// the closed forms. Indices follow {I, sigma_z, sigma-, sigma+}.
struct PerturbedEigensystem {
  std::array<cplx, 4> fitted;
  std::array<cplx, 4> reference;
  std::array<double, 4> residual;  // relative where the reference is nonzero
  double pairingDefect = 0.0;      // worst overlap mismatch at the smallest lambda
  std::vector<std::string> notes;
};

inline PerturbedEigensystem perturbed_eigensystem(const QubitModel& q, double tau,
                                                  const std::vector<double>& lambdas = {
                                                      0.1, 0.05, 0.025}) {
  require_generic_phase(q, tau);
  if (lambdas.size() < 2)
    throw std::invalid_argument("perturbed_eigensystem: need at least two lambdas");
  const UZeroSpectrum u0 = uzero_spectrum(q, tau);
  const InteractionModel model = to_interaction_model(q);
  const GibbsWeights w = gibbs_weights(model.beta, model.delta);

  std::vector<double> nodes;
  std::array<std::vector<cplx>, 4> coeff;
  PerturbedEigensystem out;
  double lamMin = lambdas.front();
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw std::invalid_argument("perturbed_eigensystem: lambda must be > 0");
    const SuperOperator um = heisenberg_map(one_step_unitary(model, lam, tau), w);
    const detail::SmallEigen eig = detail::eigen4(um.matrix);
    double defect = 0.0;
    const std::array<int, 4> perm = detail::best_pairing(eig, u0, &defect);
    for (int i = 0; i < 4; ++i) {
      const int zdir = perm[std::size_t(i)];
      coeff[std::size_t(zdir)].push_back(
          (eig.values[std::size_t(i)] - u0.eigenvalues[std::size_t(zdir)]) / (lam * lam));
    }
    nodes.push_back(lam * lam);
    if (lam <= lamMin) {
      lamMin = lam;
      out.pairingDefect = defect;
    }
  }

  const ComplexMatrix t = tbeta_restricted(q, tau);
  const double z = 1.0 + detail::gibbs_ratio(q);
  const cplx c3 = tbeta_raising_trace(q, tau) / z;
  out.reference = {cplx(0.0), t(1, 1) / z, std::conj(c3), c3};
  for (int i = 0; i < 4; ++i) {
    out.fitted[std::size_t(i)] = detail::neville_to_zero(nodes, coeff[std::size_t(i)]);
    const double refMag = std::abs(out.reference[std::size_t(i)]);
    const double diff = std::abs(out.fitted[std::size_t(i)] - out.reference[std::size_t(i)]);
    out.residual[std::size_t(i)] = refMag > 1e-12 ? diff / refMag : diff;
  }
  return out;
}

/// Spectral form of the weak-coupling Heisenberg generator for the qubit:
///   (nu/Z) P2 + e^{-2 i tau eps} c3 Pplus + e^{+2 i tau eps} conj(c3) Pminus,
/// where P2(B) = tr(sigma_z B)/2 ((mu/nu) I + sigma_z) is the oblique
/// projector of the split 1-eigenvalue pair and Pplus/Pminus are the
/// orthogonal raising/lowering projectors. The identity direction is killed.
inline SuperOperator qubit_gamma_w_beta(const QubitModel& q, double tau) {
  require_generic_phase(q, tau);
  const ComplexMatrix t = tbeta_restricted(q, tau);
  const cplx mu = t(0, 1), nu = t(1, 1);
  if (std::abs(nu) < 1e-12)
    throw std::domain_error(
        "qubit: degenerate coupling (no off-diagonal first-order block); the split "
        "1-eigenvalue pair has no spectral form");
  const double z = 1.0 + detail::gibbs_ratio(q);
  const cplx c3 = tbeta_raising_trace(q, tau) / z;
  const cplx phase = std::exp(cplx(0.0, -2.0 * tau * q.epsilon));

  const ComplexMatrix dir = ComplexMatrix::identity(2) * (mu / nu) + pauli_z();
  SuperOperator s = detail::hs_rank_one(dir, pauli_z());
  s *= (nu / z) * cplx(0.5, 0.0);
  SuperOperator sp = detail::hs_rank_one(pauli_plus(), pauli_plus());
  sp *= phase * c3;
  SuperOperator sm = detail::hs_rank_one(pauli_minus(), pauli_minus());
  sm *= std::conj(phase) * std::conj(c3);
  s += sp;
  s += sm;
  return s;
}

/// Seeded qubit model with the generic-phase and non-degenerate-coupling
/// margins enforced by resampling (margins are evaluated at the given tau).
inline QubitModel random_qubit_model(std::uint64_t seed, double tau = 1.0)
{
  Rng rng(seed);
  for (int tries = 0; tries < 1000; ++tries) {
    QubitModel q;
    q.epsilon = 0.3 + 1.2 * rng.uniform();
    q.delta = 0.4 + 1.7 * rng.uniform();
    q.a = 0.7 * rng.complex_gaussian();
    q.b = 0.7 * rng.complex_gaussian();
    q.c = 0.7 * rng.complex_gaussian();
    q.d = 0.7 * rng.complex_gaussian();
    q.beta = 0.2 + 1.8 * rng.uniform();
    const double et = q.epsilon * tau;
    if (std::abs(std::sin(et)) < 0.05) continue;
    if (std::abs(std::sin(2.0 * et)) < 0.05) continue;
    const ComplexMatrix f = f10_closed(q, tau);
    if (std::norm(f(0, 1)) + std::norm(f(1, 0)) < 1e-2) continue;
    return q;
  }
  throw std::runtime_error("random_qubit_model: sampling failed");
}

}  // namespace riq
