#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "riq/expm.hpp"
#include "riq/model.hpp"
#include "riq/reduced.hpp"
#include "riq/spectral.hpp"
#include "riq/superoperator.hpp"

namespace riq {

namespace detail {

// Oscillatory moment M_k(alpha, tau) = int_0^tau s^k e^{i s alpha} ds, k <= 6.
// Closed form by parts for |alpha tau| >= 1; a Taylor series takes over below
// that, where both the closed form and the recursion cancel catastrophically
// (the recursion divides by alpha once per order).
inline cplx osc_moment(int k, double alpha, double tau) {
  const double z = alpha * tau;
  if (std::abs(z) < 1.0) {
    // tau^{k+1} sum_j (i alpha tau)^j / (j! (k+j+1)), truncation ~ |z|^21/21!
    cplx sum = 0.0;
    cplx zp = 1.0;     // (i z)^j
    double fact = 1.0; // j!
    for (int j = 0; j <= 20; ++j) {
      if (j > 0) {
        zp *= cplx(0.0, z);
        fact *= double(j);
      }
      sum += zp / (fact * double(k + j + 1));
    }
    return std::pow(tau, k + 1) * sum;
  }
  const cplx ia(0.0, alpha);
  const cplx etau = std::exp(cplx(0.0, z));
  cplx m = (etau - 1.0) / ia; // k = 0
  double tp = 1.0;            // tau^j
  for (int j = 1; j <= k; ++j) {
    tp *= tau;
    m = (tp * etau - double(j) * m) / ia;
  }
  return m;
}

/// int_0^tau e^{i s alpha} ds.
inline cplx osc1(double alpha, double tau) { return osc_moment(0, alpha, tau); }

/// int_0^tau ds1 e^{i s1 alpha} int_0^{s1} ds2 e^{i s2 gamma}.
inline cplx osc2(double alpha, double gamma, double tau) {
  // The closed form divides a cancellation-limited difference by gamma, so
  // its error grows like eps/|gamma tau|; switch to the series early.
  if (std::abs(gamma * tau) < 1e-4) {
    // expand the inner integral: sum_k (i gamma)^k/(k+1)! M_{k+1}(alpha, tau)
    cplx sum = 0.0;
    cplx gp = 1.0;     // (i gamma)^k
    double fact = 1.0; // (k+1)!
    for (int k = 0; k <= 5; ++k) {
      if (k > 0) gp *= cplx(0.0, gamma);
      fact *= double(k + 1);
      sum += gp / fact * osc_moment(k + 1, alpha, tau);
    }
    return sum;
  }
  return (osc1(alpha + gamma, tau) - osc1(alpha, tau)) / cplx(0.0, gamma);
}

/// int_0^tau ds int_0^s dt e^{-i t alpha}: tau^2/2 at alpha = 0, otherwise
/// (1 - e^{-i tau alpha})/alpha^2 - i tau/alpha. The decay kernel of the
/// weak-coupling generator's double-integral form.
inline cplx osc_double_decay(double alpha, double tau) {
  return osc2(0.0, -alpha, tau);
}

inline const std::array<double, 5>& gl5_nodes() {
  static const std::array<double, 5> x = {-0.9061798459386640, -0.5384693101056831,
                                          0.0, 0.5384693101056831,
                                          0.9061798459386640};
  return x;
}
inline const std::array<double, 5>& gl5_weights() {
  static const std::array<double, 5> w = {0.2369268850561891, 0.4786286704993665,
                                          0.5688888888888889, 0.4786286704993665,
                                          0.2369268850561891};
  return w;
}

}  // namespace detail

/// Second-order coupling expansion of one step:
///   e^{-i tau H(lambda)} = e^{-i tau H(0)} + lambda F + lambda^2 G + O(lambda^3).
struct FGPair {
  ComplexMatrix F;
  ComplexMatrix G;
  double tau = 0.0;
};

/// Closed-form F and G on the one-site space, computed entrywise in the
/// eigenbasis of H(0) with the oscillatory-integral primitives. Valid for
/// negative tau too; F(-tau) = F(tau)^dagger and likewise for G.
inline FGPair compute_fg(const InteractionModel& model, double tau) {
  const OneSiteOperators ops = build_one_site(model);
  const HermitianEigen eig = hermitian_eigen_raw(ops.H0);
  const std::size_t n = eig.values.size();
  const ComplexMatrix wt = eig.vectors.adjoint() * ops.W * eig.vectors;

  ComplexMatrix ft(n, n), gt(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const cplx ea = std::exp(cplx(0.0, -tau * eig.values[a]));
    for (std::size_t b = 0; b < n; ++b) {
      ft(a, b) = cplx(0.0, -1.0) * ea * wt(a, b) *
                 detail::osc1(eig.values[a] - eig.values[b], tau);
      cplx acc = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (wt(a, c) == cplx(0.0, 0.0) || wt(c, b) == cplx(0.0, 0.0)) continue;
        acc += wt(a, c) * wt(c, b) *
               detail::osc2(eig.values[a] - eig.values[c],
                            eig.values[c] - eig.values[b], tau);
      }
      gt(a, b) = -ea * acc;
    }
  }
  FGPair fg;
  fg.F = eig.vectors * ft * eig.vectors.adjoint();
  fg.G = eig.vectors * gt * eig.vectors.adjoint();
  fg.tau = tau;
  return fg;
}

/// Independent oracle for F and G: composite 5-point Gauss-Legendre panels on
/// the defining time-ordered integrals
///   F = -i e^{-i tau H(0)} int_0^tau Y(s) ds,
///   G =  - e^{-i tau H(0)} int_0^tau Y(s1) int_0^{s1} Y(s2) ds2 ds1,
/// Y(s) = e^{i s H(0)} W e^{-i s H(0)}, with every propagator from the generic
/// scaling-and-squaring exponential -- no eigenbasis, no closed-form integral
/// shared with compute_fg.
inline FGPair fg_quadrature(const InteractionModel& model, double tau,
                            int panels = 2000) {
  if (panels < 1) throw std::invalid_argument("fg_quadrature: panels must be >= 1");
  const OneSiteOperators ops = build_one_site(model);
  const std::size_t n = ops.H0.rows();

  const auto prop = [&](double s) { // e^{i s H(0)}
    ComplexMatrix m = ops.H0;
    m *= cplx(0.0, s);
    return expm(m);
  };
  const auto yop = [&](double s) {
    const ComplexMatrix e = prop(s);
    return e * ops.W * e.adjoint();
  };

  const auto& xs = detail::gl5_nodes();
  const auto& ws = detail::gl5_weights();
  const double w = tau / double(panels);

  ComplexMatrix int_f(n, n), int_g(n, n), prefix(n, n);
  for (int p = 0; p < panels; ++p) {
    const double a = w * double(p);
    std::array<ComplexMatrix, 5> ypanel;
    for (int i = 0; i < 5; ++i) {
      const double s1 = a + 0.5 * w * (1.0 + xs[i]);
      ypanel[i] = yop(s1);
      ComplexMatrix fc = ypanel[i];
      fc *= cplx(0.5 * w * ws[i], 0.0);
      int_f += fc;

      // int_0^{s1} Y = (integral over prior panels) + GL5 on [a, s1]
      ComplexMatrix inner = prefix;
      const double hw = 0.5 * (s1 - a);
      for (int j = 0; j < 5; ++j) {
        ComplexMatrix yc = yop(a + hw * (1.0 + xs[j]));
        yc *= cplx(hw * ws[j], 0.0);
        inner += yc;
      }
      ComplexMatrix gc = ypanel[i] * inner;
      gc *= cplx(0.5 * w * ws[i], 0.0);
      int_g += gc;
    }
    for (int i = 0; i < 5; ++i) {
      ComplexMatrix yc = ypanel[i];
      yc *= cplx(0.5 * w * ws[i], 0.0);
      prefix += yc;
    }
  }

  const ComplexMatrix u0 = prop(-tau); // e^{-i tau H(0)}
  FGPair fg;
  fg.F = cplx(0.0, -1.0) * (u0 * int_f);
  fg.G = cplx(-1.0, 0.0) * (u0 * int_g);
  fg.tau = tau;
  return fg;
}

struct ExpansionResidual {
  double r3; // || U(lambda) - U(0) - lambda F - lambda^2 G ||
  double r4; // same residual compressed to the ground-chain block
};

/// Measures the expansion against the exact step unitary. r3 scales like
/// lambda^3; the compressed residual r4 like lambda^4 (the compression kills
/// the F block, and the odd lambda^3 term with it).
inline ExpansionResidual verify_expansion(const InteractionModel& model,
                                          double lambda, double tau) {
  const OneSiteOperators ops = build_one_site(model);
  const ComplexMatrix u = one_step_unitary(model, lambda, tau);
  const ComplexMatrix u0 = hermitian_propagator(ops.H0, tau);
  const FGPair fg = compute_fg(model, tau);
  ComplexMatrix r = u - u0;
  ComplexMatrix f = fg.F;
  f *= cplx(lambda, 0.0);
  ComplexMatrix g = fg.G;
  g *= cplx(lambda * lambda, 0.0);
  r -= f;
  r -= g;
  ExpansionResidual res;
  res.r3 = op_norm(r);
  const std::size_t sd = std::size_t(model.sys_dim());
  res.r4 = op_norm(r.block(0, 0, sd, sd));
  return res;
}

/// Complete orthogonal projector family with spectral labels. `labels` are
/// the eigenvalues the projectors belong to (energies stored as complex, or
/// points on the unit circle); `angles` are the real eigenvalues of the
/// self-adjoint generator h = sum_j angles_j P_j whose time average realizes
/// the block-diagonal compression.
struct ProjectorFamily {
  std::vector<ComplexMatrix> projectors;
  std::vector<cplx> labels;
  std::vector<double> angles;
  double tol = 1e-9;
  std::vector<std::string> warnings;

  std::size_t size() const { return projectors.size(); }

  double completeness_defect() const {
    if (projectors.empty()) return 0.0;
    ComplexMatrix s(projectors[0].rows(), projectors[0].cols());
    for (const auto& p : projectors) s += p;
    return (s - ComplexMatrix::identity(s.rows())).frobenius_norm();
  }

  double orthogonality_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < projectors.size(); ++i)
      for (std::size_t j = 0; j < projectors.size(); ++j) {
        const ComplexMatrix prod = projectors[i] * projectors[j];
        const double d = (i == j) ? (prod - projectors[i]).frobenius_norm()
                                  : prod.frobenius_norm();
        worst = std::max(worst, d);
      }
    return worst;
  }
};

/// Block-diagonal compression K^# = sum_j P_j K P_j.
inline ComplexMatrix sharp(const ComplexMatrix& k, const ProjectorFamily& family) {
  if (family.projectors.empty())
    throw std::invalid_argument("sharp: empty projector family");
  if (family.completeness_defect() > 1e-8)
    throw std::invalid_argument("sharp: family does not resolve the identity");
  ComplexMatrix out(k.rows(), k.cols());
  for (const auto& p : family.projectors) out += p * k * p;
  return out;
}

inline SuperOperator sharp(const SuperOperator& s, const ProjectorFamily& family) {
  return SuperOperator(s.dim, sharp(s.matrix, family));
}

namespace detail {

// Chain clustering of unit-circle values: sort by principal argument, group
// while consecutive values sit within tol of each other, then merge the first
// and last group across the branch cut if needed. Returns groups of indices.
inline std::vector<std::vector<std::size_t>> cluster_circle(
    const std::vector<cplx>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double aa = std::arg(values[a]), ab = std::arg(values[b]);
    if (aa != ab) return aa < ab;
    return a < b;
  });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t i = order[idx];
    if (!groups.empty() && std::abs(values[i] - values[order[idx - 1]]) <= tol)
      groups.back().push_back(i);
    else
      groups.push_back({i});
  }
  if (groups.size() > 1 &&
      std::abs(values[groups.front().front()] - values[groups.back().back()]) <= tol) {
    for (std::size_t i : groups.back()) groups.front().push_back(i);
    groups.pop_back();
  }
  return groups;
}

}  // namespace detail

/// Eigenprojector family of a Hermitian matrix; labels and angles are the
/// eigenvalues themselves.
inline ProjectorFamily h0_family(const ComplexMatrix& h0, double tol = 1e-9) {
  const SpectralDecomposition sd = hermitian_eig(h0, tol);
  ProjectorFamily fam;
  fam.tol = tol;
  fam.projectors = sd.projectors;
  for (double e : sd.eigenvalues) {
    fam.labels.push_back(cplx(e, 0.0));
    fam.angles.push_back(e);
  }
  return fam;
}

/// Eigenprojector family of the step phase e^{-i tau h0}: the h0 family,
/// further merged wherever distinct energies land on the same point of the
/// unit circle. Such a merge is warned about -- it is invisible to the
/// one-step spectrum but changes the compression.
inline ProjectorFamily circle_family(const ComplexMatrix& h0, double tau,
                                     double tol = 1e-9) {
  const SpectralDecomposition sd = hermitian_eig(h0, tol);
  std::vector<cplx> values;
  values.reserve(sd.eigenvalues.size());
  for (double e : sd.eigenvalues) values.push_back(std::exp(cplx(0.0, -tau * e)));
  const auto groups = detail::cluster_circle(values, tol);

  ProjectorFamily fam;
  fam.tol = tol;
  for (const auto& g : groups) {
    ComplexMatrix p(h0.rows(), h0.cols());
    for (std::size_t i : g) p += sd.projectors[i];
    fam.projectors.push_back(std::move(p));
    fam.labels.push_back(values[g.front()]);
    fam.angles.push_back(-std::arg(values[g.front()]));
    if (g.size() > 1)
      fam.warnings.push_back("distinct energies coincide on the unit circle at tau = " +
                             std::to_string(tau) + " (cluster of " +
                             std::to_string(g.size()) + ")");
  }
  return fam;
}

/// Superoperator eigenprojector family of the free Heisenberg step
/// B |-> e^{i tau h0} B e^{-i tau h0}: phases e^{i tau (E_j - E_k)} clustered
/// on the unit circle, projectors sum of P_k^T (x) P_j over each cluster.
inline ProjectorFamily uzero_family(const ComplexMatrix& h0, double tau,
                                    double tol = 1e-9) {
  const SpectralDecomposition sd = hermitian_eig(h0, tol);
  const std::size_t nc = sd.projectors.size();
  std::vector<cplx> values;
  std::vector<double> freqs; // tau * (E_j - E_k), before circle reduction
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t k = 0; k < nc; ++k) {
      const double f = tau * (sd.eigenvalues[j] - sd.eigenvalues[k]);
      values.push_back(std::exp(cplx(0.0, f)));
      freqs.push_back(f);
      pairs.emplace_back(j, k);
    }
  const auto groups = detail::cluster_circle(values, tol);

  const std::size_t dsq = h0.rows() * h0.rows();
  ProjectorFamily fam;
  fam.tol = tol;
  for (const auto& g : groups) {
    ComplexMatrix p(dsq, dsq);
    double fmin = freqs[g.front()], fmax = freqs[g.front()];
    for (std::size_t i : g) {
      p += kron(sd.projectors[pairs[i].second].transpose(),
                sd.projectors[pairs[i].first]);
      fmin = std::min(fmin, freqs[i]);
      fmax = std::max(fmax, freqs[i]);
    }
    fam.projectors.push_back(std::move(p));
    fam.labels.push_back(values[g.front()]);
    fam.angles.push_back(std::arg(values[g.front()]));
    if (fmax - fmin > fam.tol)
      fam.warnings.push_back(
          "distinct transition frequencies coincide on the unit circle at tau = " +
          std::to_string(tau));
  }
  return fam;
}

/// tau -> 0 limit of uzero_family: clusters of the real transition
/// frequencies E_j - E_k themselves.
inline ProjectorFamily pair_difference_family(const ComplexMatrix& h0,
                                              double tol = 1e-9) {
  const SpectralDecomposition sd = hermitian_eig(h0, tol);
  const std::size_t nc = sd.projectors.size();
  struct Item {
    double freq;
    std::size_t j, k;
  };
  std::vector<Item> items;
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t k = 0; k < nc; ++k)
      items.push_back({sd.eigenvalues[j] - sd.eigenvalues[k], j, k});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.freq != b.freq) return a.freq < b.freq;
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  });

  const std::size_t dsq = h0.rows() * h0.rows();
  ProjectorFamily fam;
  fam.tol = tol;
  std::size_t start = 0;
  while (start < items.size()) {
    std::size_t end = start + 1;
    while (end < items.size() && items[end].freq - items[end - 1].freq <= tol) ++end;
    ComplexMatrix p(dsq, dsq);
    for (std::size_t i = start; i < end; ++i)
      p += kron(sd.projectors[items[i].k].transpose(), sd.projectors[items[i].j]);
    fam.projectors.push_back(std::move(p));
    fam.labels.push_back(cplx(items[start].freq, 0.0));
    fam.angles.push_back(items[start].freq);
    start = end;
  }
  return fam;
}

/// Trapezoid panel count shared by cesaro_average and cesaro_suggested_T.
inline constexpr int kCesaroSteps = 65536;

/// Finite-time average (1/T) int_0^T e^{i s h} K e^{-i s h} ds by the
/// trapezoid rule, h = sum_j angles_j P_j. Converges to sharp(K, family);
/// a cross term at frequency delta contributes exactly
///   (e^{i delta T} - 1) / (2 N tan(delta T / 2N)),
/// so at T = cesaro_suggested_T, where every delta T sits near a whole number
/// of turns, the cross terms cancel to roundoff.
inline ComplexMatrix cesaro_average(const ComplexMatrix& k,
                                    const ProjectorFamily& family, double T,
                                    int steps = kCesaroSteps) {
  ComplexMatrix acc(k.rows(), k.cols());
  const std::size_t nf = family.size();
  for (int i = 0; i <= steps; ++i) {
    const double s = T * double(i) / double(steps);
    ComplexMatrix e(k.rows(), k.cols());
    for (std::size_t j = 0; j < nf; ++j) {
      ComplexMatrix p = family.projectors[j];
      p *= std::exp(cplx(0.0, s * family.angles[j]));
      e += p;
    }
    ComplexMatrix f = e * k * e.adjoint();
    f *= cplx((i == 0 || i == steps) ? 0.5 : 1.0, 0.0);
    acc += f;
  }
  acc *= cplx(1.0 / double(steps), 0.0);
  return acc;
}

/// Picks T = m * (2 pi / smallest gap), scanning m for the multiple that
/// minimizes the worst trapezoid cross-term residual
///   max_delta |e^{i delta T} - 1| / (2 N |tan(delta T / 2N)|),
/// i.e. brings every pair difference simultaneously close to a whole number
/// of turns while staying clear of sampling aliases. A single-gap family
/// snaps exactly at m = 1; two independent gaps typically reach ~1e-9.
inline double cesaro_suggested_T(const ProjectorFamily& family) {
  std::vector<double> diffs;
  for (std::size_t i = 0; i < family.angles.size(); ++i)
    for (std::size_t j = i + 1; j < family.angles.size(); ++j) {
      const double d = std::abs(family.angles[i] - family.angles[j]);
      if (d > 1e-12) diffs.push_back(d);
    }
  if (diffs.empty()) return 1.0; // single block: the average is constant
  const double period =
      2.0 * std::numbers::pi / *std::min_element(diffs.begin(), diffs.end());
  const double n = double(kCesaroSteps);
  double best_t = period;
  double best_score = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 50000 && best_score > 1e-9; ++m) {
    const double t = period * double(m);
    double score = 0.0;
    for (const double d : diffs) {
      const double num = 2.0 * std::abs(std::sin(0.5 * d * t));
      const double den = 2.0 * n * std::abs(std::tan(d * t / (2.0 * n)));
      score = std::max(score, den < 1e-300 ? 1.0 : num / den);
    }
    if (score < best_score) {
      best_score = score;
      best_t = t;
    }
  }
  return best_t;
}

/// Free Heisenberg step B |-> e^{i tau h0} B e^{-i tau h0}.
inline SuperOperator free_heisenberg_step(const ComplexMatrix& h0, double tau) {
  return SuperOperator::conjugation(hermitian_propagator(h0, -tau));
}

/// Weak-coupling generator on the system space at fixed tau:
///   Gamma^w(tau) = (e^{i tau h0} G_P(tau))^#,
/// compressed over the eigenprojector family of e^{-i tau h0} (G_P is the
/// ground-chain block of G). Scaled by t = lambda^2 k it generates the limit
/// of the renormalized reduced powers e^{i k tau h0} A(lambda, tau)^k.
inline ComplexMatrix gamma_w_schrodinger(const InteractionModel& model, double tau,
                                         ProjectorFamily* family_out = nullptr) {
  const FGPair fg = compute_fg(model, tau);
  const std::size_t sd = std::size_t(model.sys_dim());
  const ComplexMatrix gp = fg.G.block(0, 0, sd, sd);
  const ComplexMatrix phase = hermitian_propagator(model.h0, -tau); // e^{i tau h0}
  ProjectorFamily fam = circle_family(model.h0, tau);
  const ComplexMatrix out = sharp(phase * gp, fam);
  if (family_out) *family_out = std::move(fam);
  return out;
}

/// Same generator by its explicit double-integral form,
///   -sum_{j,m} P_j V_m^+ [int_0^tau int_0^s e^{-i r (h0 + delta_m - E_j)} dr ds] V_m P_j,
/// summed over the plain (unmerged) eigenprojectors of h0. Agrees with
/// gamma_w_schrodinger whenever no two energies coincide on the circle.
inline ComplexMatrix gamma_w_schrodinger_integral(const InteractionModel& model,
                                                  double tau) {
  const SpectralDecomposition sd = hermitian_eig(model.h0);
  const std::size_t d1 = std::size_t(model.sys_dim());
  ComplexMatrix out(d1, d1);
  for (std::size_t j = 0; j < sd.projectors.size(); ++j) {
    const double ej = sd.eigenvalues[j];
    for (int m = 0; m < model.n; ++m) {
      ComplexMatrix arg = model.h0;
      ComplexMatrix shift = ComplexMatrix::identity(d1);
      shift *= cplx(model.delta[std::size_t(m)] - ej, 0.0);
      arg += shift;
      const ComplexMatrix kernel = apply_spectral(
          arg, [tau](double x) { return detail::osc_double_decay(x, tau); });
      out -= sd.projectors[j] * model.V[std::size_t(m)].adjoint() * kernel *
             model.V[std::size_t(m)] * sd.projectors[j];
    }
  }
  return out;
}

/// Zero-temperature quadratic dissipation -(1/2) sum_m V_m^+ V_m: the
/// tau -> 0 limit of Gamma^w(tau)/tau^2 before compression.
inline ComplexMatrix gamma0(const InteractionModel& model) {
  const std::size_t d1 = std::size_t(model.sys_dim());
  ComplexMatrix g(d1, d1);
  for (const auto& v : model.V) {
    ComplexMatrix term = v.adjoint() * v;
    term *= cplx(-0.5, 0.0);
    g += term;
  }
  return g;
}

/// gamma0 compressed over the eigenprojectors of h0.
inline ComplexMatrix gamma0_sharp(const InteractionModel& model) {
  return sharp(gamma0(model), h0_family(model.h0));
}

/// gamma_w_schrodinger divided by tau^2 -- the normalization under which the
/// tau -> 0 limit is gamma0_sharp.
inline ComplexMatrix regime_a_generator(const InteractionModel& model, double tau) {
  ComplexMatrix g = gamma_w_schrodinger(model, tau);
  g *= cplx(1.0 / (tau * tau), 0.0);
  return g;
}

/// Second-order (in the coupling) part of the one-step Heisenberg map, scaled
/// by the partition function:
///   T_beta = U2_{0,0} + sum_{m>=1} [ e^{-beta delta_m} (U1_{0,m} + U2_{m,m}) + U1_{m,0} ],
/// where, in terms of the chain-sector blocks of F and G,
///   U1_{0,m}(B) = F_{0,m}^+ B F_{0,m},
///   U1_{m,0}(B) = F_{m,0}^+ B F_{m,0},
///   U2_{m,m}(B) = G_{m,m}^+ B e^{-i tau (h0+delta_m)} + e^{i tau (h0+delta_m)} B G_{m,m}.
/// Annihilates the identity (unitarity at second order) and satisfies
/// tr(B T(B^+)) = conj(tr(B^+ T(B))).
inline SuperOperator t_beta(const InteractionModel& model, double tau) {
  const FGPair fg = compute_fg(model, tau);
  const std::size_t sd = std::size_t(model.sys_dim());
  const BlockDecomposition fb = BlockDecomposition::split(fg.F, sd);
  const BlockDecomposition gb = BlockDecomposition::split(fg.G, sd);
  const GibbsWeights w = gibbs_weights(model.beta, model.delta);
  const ComplexMatrix u00 = hermitian_propagator(model.h0, tau); // e^{-i tau h0}

  SuperOperator t = SuperOperator::zero(sd);
  const std::size_t sites = std::size_t(model.n) + 1;
  for (std::size_t m = 0; m < sites; ++m) {
    const double wm = w.ratio(m);
    if (wm == 0.0) continue;
    ComplexMatrix um = u00; // e^{-i tau (h0+delta_m)}
    if (m >= 1) um *= std::exp(cplx(0.0, -tau * model.delta[m - 1]));
    SuperOperator u2 = SuperOperator::left_right(gb.blocks[m][m].adjoint(), um);
    u2 += SuperOperator::left_right(um.adjoint(), gb.blocks[m][m]);
    u2 *= cplx(wm, 0.0);
    t += u2;
  }
  for (std::size_t m = 1; m < sites; ++m) {
    const double wm = w.ratio(m);
    if (wm != 0.0) {
      SuperOperator u1 =
          SuperOperator::left_right(fb.blocks[0][m].adjoint(), fb.blocks[0][m]);
      u1 *= cplx(wm, 0.0);
      t += u1;
    }
    t += SuperOperator::left_right(fb.blocks[m][0].adjoint(), fb.blocks[m][0]);
  }
  return t;
}

/// Weak-coupling Heisenberg generator:
///   Gamma^w_beta = Z(beta)^{-1} (U_{0,0}(0)^{-1} T_beta)^#,
/// compressed over the eigenprojector family of the free Heisenberg step.
/// Generates the limit of U_{0,0}(0)^{-k} U_beta(lambda, tau)^k with
/// t = lambda^2 k; commutes with the free step by construction.
inline SuperOperator gamma_w_heisenberg(const InteractionModel& model, double tau,
                                        ProjectorFamily* family_out = nullptr) {
  const SuperOperator tb = t_beta(model, tau);
  const SuperOperator u0inv =
      SuperOperator::conjugation(hermitian_propagator(model.h0, tau));
  ProjectorFamily fam = uzero_family(model.h0, tau);
  SuperOperator out = sharp(u0inv.compose(tb), fam);
  const GibbsWeights w = gibbs_weights(model.beta, model.delta);
  out *= cplx(1.0 / w.Z, 0.0);
  if (family_out) *family_out = std::move(fam);
  return out;
}

/// Thermal quadratic dissipator (Heisenberg form):
///   Gamma_beta(B) = Z^{-1} sum_m [ e^{-beta delta_m} (V_m B V_m^+ - 1/2 {V_m V_m^+, B})
///                                 + V_m^+ B V_m - 1/2 {V_m^+ V_m, B} ].
/// At beta = +inf only the V^+ . V terms survive.
inline SuperOperator gamma_beta(const InteractionModel& model) {
  const std::size_t sd = std::size_t(model.sys_dim());
  const GibbsWeights w = gibbs_weights(model.beta, model.delta);
  const ComplexMatrix id = ComplexMatrix::identity(sd);
  SuperOperator g = SuperOperator::zero(sd);
  for (int m = 0; m < model.n; ++m) {
    const ComplexMatrix& v = model.V[std::size_t(m)];
    const ComplexMatrix vdv = v.adjoint() * v;
    g += SuperOperator::left_right(v.adjoint(), v);
    SuperOperator anti = SuperOperator::left_right(vdv, id);
    anti += SuperOperator::left_right(id, vdv);
    anti *= cplx(-0.5, 0.0);
    g += anti;

    const double r = w.ratio(std::size_t(m) + 1);
    if (r == 0.0) continue;
    const ComplexMatrix vvd = v * v.adjoint();
    SuperOperator hot = SuperOperator::left_right(v, v.adjoint());
    SuperOperator hanti = SuperOperator::left_right(vvd, id);
    hanti += SuperOperator::left_right(id, vvd);
    hanti *= cplx(-0.5, 0.0);
    hot += hanti;
    hot *= cplx(r, 0.0);
    g += hot;
  }
  g *= cplx(1.0 / w.Z, 0.0);
  return g;
}

/// Interpolation-generator helper: J = sum_{j,k} alpha_{jk} P_j R P_k with
///   alpha_{jj} = i e^{i theta_j},
///   alpha_{jk} = (theta_j - theta_k) / (e^{-i theta_j} - e^{-i theta_k}),
/// theta = family angles. Solves R + i e^{-i h} int_0^1 e^{i s h} J e^{-i s h} ds = 0,
/// the cancellation that makes e^{-i (h + x J)} match (I + x e^{-i h} R)-type
/// steps to second order. Requires distinct circle points e^{-i theta_j}.
inline ComplexMatrix j_operator(const ComplexMatrix& r, const ProjectorFamily& family) {
  const std::size_t nf = family.size();
  ComplexMatrix out(r.rows(), r.cols());
  for (std::size_t j = 0; j < nf; ++j) {
    for (std::size_t k = 0; k < nf; ++k) {
      cplx alpha;
      if (j == k) {
        alpha = cplx(0.0, 1.0) * std::exp(cplx(0.0, family.angles[j]));
      } else {
        const cplx denom = std::exp(cplx(0.0, -family.angles[j])) -
                           std::exp(cplx(0.0, -family.angles[k]));
        if (std::abs(denom) < 1e-12)
          throw std::domain_error("j_operator: coinciding unit-circle labels");
        alpha = cplx(family.angles[j] - family.angles[k], 0.0) / denom;
      }
      ComplexMatrix term = family.projectors[j] * r * family.projectors[k];
      term *= alpha;
      out += term;
    }
  }
  return out;
}

}  // namespace riq
