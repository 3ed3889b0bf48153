#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "riq/lindblad.hpp"
#include "riq/model.hpp"
#include "riq/perturb.hpp"
#include "riq/reduced.hpp"
#include "riq/superoperator.hpp"

namespace riq {

/// One row of a convergence study: discrete dynamics at (lambda, tau, k)
/// against the asymptotic limit, in both pictures plus one fixed observable.
struct ConvergencePoint {
  double t = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  std::uint64_t k = 0;
  double errorSchrodinger = 0.0; // operator norm on the small system
  double errorHeisenberg = 0.0;  // superoperator matrix norm
  double errorObservable = 0.0;  // operator norm on a fixed seeded observable
};

struct ConvergenceReport {
  std::string regime;
  double t = 0.0;
  double theoreticalOrder = 0.0;
  std::vector<ConvergencePoint> points;
  double fittedOrderSchrodinger = std::numeric_limits<double>::quiet_NaN();
  double fittedOrderHeisenberg = std::numeric_limits<double>::quiet_NaN();
  double fittedOrder = std::numeric_limits<double>::quiet_NaN(); // worst of the two
  bool exact = false; // every error at the numerical floor (e.g. V = 0)
  bool pass = false;
  std::vector<std::string> notes;
};

/// Least-squares slope of log(error) against log(parameter). Points with
/// non-positive or floor-level errors are excluded with a diagnostic; with
/// fewer than two usable points the result is NaN.
inline double fit_order(const std::vector<double>& params, const std::vector<double>& errors,
                        std::vector<std::string>* notes = nullptr) {
  if (params.size() != errors.size())
    throw std::invalid_argument("fit_order: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(params[i] > 0.0) || !(errors[i] > 1e-15)) {
      if (notes)
        notes->push_back("fit_order: excluded point " + std::to_string(i) +
                         " (error at or below numerical floor)");
      continue;
    }
    lx.push_back(std::log(params[i]));
    ly.push_back(std::log(errors[i]));
  }
  if (lx.size() < 2) {
    if (notes) notes->push_back("fit_order: fewer than two usable points");
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double nn = double(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

/// Decrease check along a refinement schedule: the finest point must beat the
/// coarsest strictly, and at most one adjacent uptick is tolerated.
inline bool monotone_decrease(const std::vector<double>& errors,
                              std::vector<std::string>* notes = nullptr) {
  if (errors.size() < 2) return false;
  int upticks = 0;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    if (errors[i + 1] >= errors[i]) ++upticks;
  if (upticks > 1 && notes)
    notes->push_back("monotone_decrease: " + std::to_string(upticks) + " adjacent increases");
  return errors.back() < errors.front() && upticks <= 1;
}

namespace detail {

struct TrackErrors {
  double schrodinger, heisenberg, observable;
};

/// Errors of the (optionally renormalized) k-step discrete dynamics against
/// fixed limit maps, in both pictures.
inline TrackErrors discrete_vs_limit(const InteractionModel& model, double lambda, double tau,
                                     std::uint64_t k, bool renormalize,
                                     const ComplexMatrix& limitS, const SuperOperator& limitH,
                                     const ComplexMatrix& obs) {
  const std::size_t sd = model.h0.rows();
  const ComplexMatrix u = one_step_unitary(model, lambda, tau);
  ComplexMatrix ak = matrix_power(schrodinger_block(u, sd), k);
  if (renormalize) ak = hermitian_propagator(model.h0, -double(k) * tau) * ak;

  const GibbsWeights w = gibbs_weights(model.beta, model.delta);
  SuperOperator uk = heisenberg_map(u, w).power(k);
  if (renormalize) {
    // inverse free step = conjugation by e^{-i tau h0}, applied k times after the chain
    const SuperOperator u0invk =
        SuperOperator::conjugation(hermitian_propagator(model.h0, tau)).power(k);
    uk = u0invk.compose(uk);
  }

  TrackErrors e{};
  e.schrodinger = op_norm(ak - limitS);
  e.heisenberg = op_norm(uk.matrix - limitH.matrix);
  e.observable = op_norm(uk.apply(obs) - limitH.apply(obs));
  return e;
}

inline ConvergenceReport run_schedule(const InteractionModel& model, const std::string& regime,
                                      double t, double theoreticalOrder,
                                      const std::vector<std::uint64_t>& kSchedule,
                                      bool renormalize, const ComplexMatrix& limitS,
                                      const SuperOperator& limitH,
                                      // per-k parameters (lambda, tau) and the fit abscissa
                                      double (*lambda_of)(double, std::uint64_t),
                                      double (*tau_of)(double, std::uint64_t, double),
                                      bool fitInLambda, double fixedTau, double orderLow,
                                      double orderHigh, std::uint64_t obsSeed) {
  if (kSchedule.size() < 3)
    throw std::invalid_argument("convergence schedule needs at least 3 points");
  ConvergenceReport rep;
  rep.regime = regime;
  rep.t = t;
  rep.theoreticalOrder = theoreticalOrder;
  const ComplexMatrix obs = random_observable(obsSeed, model.d);

  std::vector<double> xs, es, eh;
  for (std::uint64_t k : kSchedule) {
    if (k == 0) throw std::invalid_argument("convergence schedule: k must be positive");
    const double lambda = lambda_of(t, k);
    const double tau = tau_of(t, k, fixedTau);
    const TrackErrors err =
        discrete_vs_limit(model, lambda, tau, k, renormalize, limitS, limitH, obs);
    rep.points.push_back({t, tau, lambda, k, err.schrodinger, err.heisenberg, err.observable});
    xs.push_back(fitInLambda ? lambda : tau);
    es.push_back(err.schrodinger);
    eh.push_back(err.heisenberg);
  }

  double floor_level = 0.0;
  for (std::size_t i = 0; i < es.size(); ++i)
    floor_level = std::max({floor_level, es[i], eh[i]});
  if (floor_level <= 1e-13) {
    rep.exact = true;
    rep.pass = true;
    rep.notes.push_back("all errors at the numerical floor; discrete dynamics is exact");
    return rep;
  }

  rep.fittedOrderSchrodinger = fit_order(xs, es, &rep.notes);
  rep.fittedOrderHeisenberg = fit_order(xs, eh, &rep.notes);
  const double fs = rep.fittedOrderSchrodinger;
  const double fh = rep.fittedOrderHeisenberg;
  rep.fittedOrder = std::isnan(fs) ? fh : (std::isnan(fh) ? fs : std::min(fs, fh));

  const bool windowOk = !std::isnan(fs) && !std::isnan(fh) && fs >= orderLow && fs <= orderHigh &&
                        fh >= orderLow && fh <= orderHigh;
  const bool monoOk = monotone_decrease(es, &rep.notes) && monotone_decrease(eh, &rep.notes);
  rep.pass = windowOk && monoOk;
  if (!windowOk)
    rep.notes.push_back("fitted order outside [" + std::to_string(orderLow) + ", " +
                        std::to_string(orderHigh) + "]");
  if (!monoOk) rep.notes.push_back("errors do not decrease along the schedule");
  return rep;
}

}  // namespace detail

/// lambda -> 0 at fixed tau, k = t / lambda^2: renormalized discrete powers
/// e^{i k tau h0} A^k and U00^{-k} U^k against e^{t Gw(tau)} and e^{t Gw_beta}.
/// With renormalize = false the free prefactor is omitted -- the negative
/// control, which must fail to converge.
inline ConvergenceReport weak_limit_experiment(const InteractionModel& model, double tau, double t,
                                               const std::vector<std::uint64_t>& kSchedule,
                                               bool renormalize = true,
                                               std::uint64_t obsSeed = 11) {
  model.check();
  const ComplexMatrix gw = gamma_w_schrodinger(model, tau);
  const ComplexMatrix limitS = expm(gw * cplx(t, 0.0));
  SuperOperator gwb = gamma_w_heisenberg(model, tau);
  gwb *= cplx(t, 0.0);
  const SuperOperator limitH = expm(gwb);
  auto lam = [](double tt, std::uint64_t k) { return std::sqrt(tt / double(k)); };
  auto tof = [](double, std::uint64_t, double fixed) { return fixed; };
  ConvergenceReport rep =
      detail::run_schedule(model, "weak", t, 2.0, kSchedule, renormalize, limitS, limitH, +lam,
                           +tof, /*fitInLambda=*/true, tau, 1.5, 2.5, obsSeed);
  if (!renormalize) rep.notes.push_back("negative control: free prefactor omitted");
  return rep;
}

/// lambda = 1, tau = sqrt(t/k) -> 0 (so lambda^2 tau -> 0): renormalized
/// powers against e^{t G0#} and e^{t Gbeta#}.
inline ConvergenceReport regime2_experiment(const InteractionModel& model, double t,
                                            const std::vector<std::uint64_t>& kSchedule,
                                            std::uint64_t obsSeed = 11) {
  model.check();
  const ComplexMatrix limitS = expm(gamma0_sharp(model) * cplx(t, 0.0));
  SuperOperator gbs = sharp(gamma_beta(model), pair_difference_family(model.h0));
  gbs *= cplx(t, 0.0);
  const SuperOperator limitH = expm(gbs);
  auto lam = [](double, std::uint64_t) { return 1.0; };
  auto tof = [](double tt, std::uint64_t k, double) { return std::sqrt(tt / double(k)); };
  return detail::run_schedule(model, "regime2", t, 1.0, kSchedule, /*renormalize=*/true, limitS,
                              limitH, +lam, +tof, /*fitInLambda=*/false, 0.0, 0.7, 1.3, obsSeed);
}

/// Critical scaling lambda^2 tau = 1, tau = t/k: bare powers (no prefactor)
/// against e^{-t(i h0 + (1/2) sum V^+V)} and the Lindblad semigroup
/// e^{t(i[h0,.] + dissipator)}.
inline ConvergenceReport critical_experiment(const InteractionModel& model, double t,
                                             const std::vector<std::uint64_t>& kSchedule,
                                             std::uint64_t obsSeed = 11) {
  model.check();
  ComplexMatrix m = model.h0 * cplx(0.0, -1.0) + gamma0(model); // -i h0 - (1/2) sum V^+V
  const ComplexMatrix limitS = expm(m * cplx(t, 0.0));
  const SuperOperator limitH = semigroup(build_lindblad(model), t);
  auto lam = [](double tt, std::uint64_t k) { return std::sqrt(double(k) / tt); };
  auto tof = [](double tt, std::uint64_t k, double) { return tt / double(k); };
  return detail::run_schedule(model, "critical", t, 1.0, kSchedule, /*renormalize=*/false, limitS,
                              limitH, +lam, +tof, /*fitInLambda=*/false, 0.0, 0.7,
                              std::numeric_limits<double>::infinity(), obsSeed);
}

/// Continuous-time sanity limit lambda = 1, tau = t/k: bare powers against
/// the free dynamics e^{-i t h0} / conjugation by e^{i t h0}.
inline ConvergenceReport continuous_experiment(const InteractionModel& model, double t,
                                               const std::vector<std::uint64_t>& kSchedule,
                                               std::uint64_t obsSeed = 11) {
  model.check();
  const ComplexMatrix limitS = hermitian_propagator(model.h0, t);
  const SuperOperator limitH = SuperOperator::conjugation(hermitian_propagator(model.h0, -t));
  auto lam = [](double, std::uint64_t) { return 1.0; };
  auto tof = [](double tt, std::uint64_t k, double) { return tt / double(k); };
  return detail::run_schedule(model, "continuous", t, 1.0, kSchedule, /*renormalize=*/false,
                              limitS, limitH, +lam, +tof, /*fitInLambda=*/false, 0.0, 0.7,
                              std::numeric_limits<double>::infinity(), obsSeed);
}

}  // namespace riq
