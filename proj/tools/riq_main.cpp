// Command-line front end: model validation, effective-generator export,
// convergence studies, and the explicit two-level diagnostics.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <riq.hpp>

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::string regime = "weak";
  double tau = 1.0;
  double t = 1.0;
  std::vector<std::uint64_t> kList;
  double tol = 1e-6;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "model JSON file (default: a seeded model)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "seed for the default model");
  cmd->add_option("--tau", o.tau, "interaction duration");
  cmd->add_option("--t", o.t, "macroscopic time");
  cmd->add_option("--tol", o.tol, "residual threshold for checks");
}

/// RIQ_SEED in the environment overrides --seed.
void apply_env_seed(Options& o) {
  const char* env = std::getenv("RIQ_SEED");
  if (!env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw riq::ConfigError(std::string("config: RIQ_SEED must be an unsigned integer (got \"") +
                           env + "\")");
  o.seed = v;
}

riq::InteractionModel acquire_model(const Options& o) {
  if (!o.config.empty()) return riq::load_model_file(o.config);
  return riq::random_model(o.seed);
}

void ensure_out_dir(const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw riq::ConfigError("config: cannot create output directory '" + o.out + "'");
}

std::string out_path(const Options& o, const std::string& name) {
  return (std::filesystem::path(o.out) / name).string();
}

/// Cross-module identity suite: Markov reduction against the full-chain
/// oracle, one-step unitality, the symmetry of the quadratic coefficient, and
/// the expansion blocks against quadrature. Exit 0 iff every residual is
/// below its pinned tolerance; writes validate.json with the measurements.
int cmd_validate(const Options& o) {
  const riq::InteractionModel m = acquire_model(o);
  ensure_out_dir(o);
  const riq::GibbsWeights w = riq::gibbs_weights(m.beta, m.delta);
  const std::size_t sysDim = std::size_t(m.d) + 1;
  std::printf("model: d=%d n=%d beta=%s Z=%s\n", m.d, m.n,
              std::isinf(m.beta) ? "inf" : riq::format_double(m.beta).c_str(),
              riq::format_double(w.Z).c_str());
  const riq::SpectralDecomposition sd = riq::hermitian_eig(m.h0);
  std::printf("h0 spectrum:");
  for (double e : sd.eigenvalues) std::printf(" %s", riq::format_double(e).c_str());
  std::printf("\n");

  // Markov reduction: reduced powers against the exact chain, both pictures,
  // as many steps as the tensor oracle's size guard allows (at most 4).
  const double lambda = 0.7;
  const riq::ComplexMatrix u = riq::one_step_unitary(m, lambda, o.tau);
  const riq::ComplexMatrix a = riq::schrodinger_block(u, sysDim);
  const riq::SuperOperator step = riq::heisenberg_map(u, w);
  const riq::ComplexMatrix b = riq::random_observable(o.seed + 100, m.d);
  double markov = 0.0;
  std::size_t chainDim = sysDim * std::size_t(m.n + 1);
  for (int k = 1; k <= 4 && chainDim <= 4096; ++k, chainDim *= std::size_t(m.n + 1)) {
    const riq::FullChainResult oracle = riq::full_chain_oracle(m, lambda, o.tau, k, b);
    markov = std::max(markov, riq::op_norm(oracle.schrodinger -
                                           riq::matrix_power(a, std::uint64_t(k))));
    markov = std::max(markov, riq::op_norm(oracle.heisenberg -
                                           step.power(std::uint64_t(k)).apply(b)));
  }

  const double unital = step.unitality_defect();

  // tr(B T(B+)) = conj(tr(B+ T(B))) for the quadratic coefficient.
  const riq::SuperOperator tb = riq::t_beta(m, o.tau);
  riq::Rng rng(o.seed + 200);
  double symmetry = 0.0;
  for (int i = 0; i < 20; ++i) {
    const riq::ComplexMatrix x = riq::random_matrix(rng, sysDim, sysDim);
    const riq::cplx lhs = (x * tb.apply(x.adjoint())).trace();
    const riq::cplx rhs = std::conj((x.adjoint() * tb.apply(x)).trace());
    symmetry = std::max(symmetry, std::abs(lhs - rhs));
  }

  const riq::FGPair closed = riq::compute_fg(m, o.tau);
  const riq::FGPair quad = riq::fg_quadrature(m, o.tau);
  const double fg =
      std::max(riq::op_norm(closed.F - quad.F), riq::op_norm(closed.G - quad.G));

  struct Row {
    const char* name;
    double residual;
    double tol;
  };
  const Row rows[] = {
      {"markov_reduction", markov, 1e-9},
      {"unitality", unital, 1e-11},
      {"t_beta_symmetry", symmetry, 1e-10},
      {"fg_quadrature", fg, 1e-9},
  };
  bool pass = true;
  nlohmann::json checks = nlohmann::json::array();
  for (const Row& r : rows) {
    const bool ok = r.residual <= r.tol;
    pass = pass && ok;
    std::printf("%-18s residual %s (tol %s) %s\n", r.name,
                riq::format_double(r.residual).c_str(), riq::format_double(r.tol).c_str(),
                ok ? "ok" : "FAIL");
    nlohmann::json c;
    c["name"] = r.name;
    c["residual"] = r.residual;
    c["tolerance"] = r.tol;
    c["pass"] = ok;
    checks.push_back(c);
  }
  nlohmann::json j;
  j["version"] = riq::kVersion;
  j["convention"] = riq::kVecConvention;
  j["name"] = "validate";
  j["d"] = m.d;
  j["n"] = m.n;
  j["beta"] = std::isinf(m.beta) ? nlohmann::json("inf") : nlohmann::json(m.beta);
  j["tau"] = o.tau;
  j["lambda"] = lambda;
  j["checks"] = checks;
  j["pass"] = pass;
  riq::write_json_file(out_path(o, "validate.json"), j);
  std::printf("%s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 1;
}

int cmd_generators(const Options& o) {
  const riq::InteractionModel m = acquire_model(o);
  ensure_out_dir(o);

  riq::ProjectorFamily circle, uzero;
  const riq::ComplexMatrix gw = riq::gamma_w_schrodinger(m, o.tau, &circle);
  const riq::ComplexMatrix gwi = riq::gamma_w_schrodinger_integral(m, o.tau);
  const double routeGap = riq::op_norm(gw - gwi);

  nlohmann::json extra;
  extra["route_agreement_residual"] = routeGap;
  riq::write_json_file(out_path(o, "gamma_w_schrodinger.json"),
                       riq::generator_json("gamma_w_schrodinger", gw, o.tau, m.beta,
                                           circle.warnings, extra));

  const riq::SuperOperator gwb = riq::gamma_w_heisenberg(m, o.tau, &uzero);
  nlohmann::json hx;
  if (m.d == 1 && m.n == 1 && std::abs(m.h0(0, 1)) < 1e-12 &&
      std::abs(m.h0(0, 0).real() + m.h0(1, 1).real()) < 1e-12) {
    riq::QubitModel q;
    q.epsilon = m.h0(1, 1).real();
    q.delta = m.delta[0];
    q.a = m.V[0](0, 0);
    q.b = m.V[0](0, 1);
    q.c = m.V[0](1, 0);
    q.d = m.V[0](1, 1);
    q.beta = m.beta;
    try {
      const riq::SuperOperator qg = riq::qubit_gamma_w_beta(q, o.tau);
      hx["qubit_cross_check_residual"] = riq::op_norm(qg.matrix - gwb.matrix);
    } catch (const std::domain_error& e) {
      hx["qubit_cross_check_skipped"] = e.what();
    }
  }
  riq::write_json_file(out_path(o, "gamma_w_heisenberg.json"),
                       riq::generator_json("gamma_w_heisenberg", gwb.matrix, o.tau, m.beta,
                                           uzero.warnings, hx));

  riq::write_json_file(out_path(o, "gamma0_sharp.json"),
                       riq::generator_json("gamma0_sharp", riq::gamma0_sharp(m), o.tau, m.beta,
                                           {}));

  const riq::SuperOperator gbs =
      riq::sharp(riq::gamma_beta(m), riq::pair_difference_family(m.h0));
  riq::write_json_file(out_path(o, "gamma_beta_sharp.json"),
                       riq::generator_json("gamma_beta_sharp", gbs.matrix, o.tau, m.beta, {}));

  const riq::LindbladGenerator lg = riq::build_lindblad(m);
  nlohmann::json lx;
  lx["reconstruction_defect"] = lg.reconstruction_defect();
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& l : lg.jumpOperators) jumps.push_back(riq::matrix_to_json(l));
  lx["jump_operators"] = jumps;
  lx["dual_choi_min_eigenvalue_t1"] =
      riq::choi_min_eigenvalue(riq::semigroup(lg, 1.0).dual());
  riq::write_json_file(out_path(o, "lindblad.json"),
                       riq::generator_json("lindblad", lg.full().matrix, o.tau, m.beta, {}, lx));

  std::printf("wrote 5 generator files to %s (route agreement %s)\n", o.out.c_str(),
              riq::format_double(routeGap).c_str());
  return 0;
}

int cmd_converge(const Options& o) {
  const riq::InteractionModel m = acquire_model(o);
  ensure_out_dir(o);
  std::vector<std::uint64_t> ks = o.kList;
  if (ks.empty()) {
    if (o.regime == "regime2")
      ks = {256, 1024, 4096};
    else
      ks = {64, 256, 1024};
  }
  riq::ConvergenceReport rep;
  if (o.regime == "weak")
    rep = riq::weak_limit_experiment(m, o.tau, o.t, ks);
  else if (o.regime == "regime2")
    rep = riq::regime2_experiment(m, o.t, ks);
  else if (o.regime == "critical")
    rep = riq::critical_experiment(m, o.t, ks);
  else if (o.regime == "continuous")
    rep = riq::continuous_experiment(m, o.t, ks);
  else
    throw riq::ConfigError("config: --regime must be weak, regime2, critical, or continuous (got '" +
                           o.regime + "')");

  riq::write_text_file(out_path(o, "convergence_" + o.regime + ".csv"),
                       riq::convergence_csv(rep));
  riq::write_json_file(out_path(o, "convergence_" + o.regime + "_summary.json"),
                       riq::convergence_summary_json(rep));
  if (rep.exact)
    std::printf("regime=%s exact pass\n", rep.regime.c_str());
  else
    std::printf("regime=%s fitted_order=%s theoretical_order=%s %s\n", rep.regime.c_str(),
                riq::format_double(rep.fittedOrder).c_str(),
                riq::format_double(rep.theoreticalOrder).c_str(),
                rep.pass ? "pass" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_qubit(const Options& o) {
  riq::QubitModel q;
  if (!o.config.empty()) {
    const riq::InteractionModel m = riq::load_model_file(o.config);
    if (m.d != 1 || m.n != 1)
      throw riq::ConfigError("config: qubit diagnostics need d=1, n=1");
    if (std::abs(m.h0(0, 1)) > 1e-12 || std::abs(m.h0(0, 0).real() + m.h0(1, 1).real()) > 1e-12)
      throw riq::ConfigError(
          "config: field 'h0' must be diagonal traceless (diag(-eps, +eps)) for qubit "
          "diagnostics");
    q.epsilon = m.h0(1, 1).real();
    q.delta = m.delta[0];
    q.a = m.V[0](0, 0);
    q.b = m.V[0](0, 1);
    q.c = m.V[0](1, 0);
    q.d = m.V[0](1, 1);
    q.beta = m.beta;
  } else {
    q = riq::random_qubit_model(o.seed, o.tau);
  }
  // A collapsed free phase is a precondition violation, not a failed check.
  try {
    riq::require_generic_phase(q, o.tau);
  } catch (const std::domain_error& e) {
    throw riq::ConfigError(std::string("config: ") + e.what());
  }
  const riq::InteractionModel m = riq::to_interaction_model(q);

  const riq::FGPair fg = riq::compute_fg(m, o.tau);
  const riq::BlockDecomposition fb = riq::BlockDecomposition::split(fg.F, 2);
  const double f10Gap = riq::op_norm(riq::f10_closed(q, o.tau) - fb.blocks[1][0]);
  const double f01Gap = riq::op_norm(riq::f01_closed(q, o.tau) - fb.blocks[0][1]);

  const riq::SuperOperator gwb = riq::gamma_w_heisenberg(m, o.tau);
  const double genGap = riq::op_norm(riq::qubit_gamma_w_beta(q, o.tau).matrix - gwb.matrix);

  const riq::PerturbedEigensystem pe = riq::perturbed_eigensystem(q, o.tau);
  double worst = std::max({f10Gap, f01Gap, genGap});
  std::printf("f10 closed-form residual      %s\n", riq::format_double(f10Gap).c_str());
  std::printf("f01 closed-form residual      %s\n", riq::format_double(f01Gap).c_str());
  std::printf("generator spectral residual   %s\n", riq::format_double(genGap).c_str());
  static const char* names[4] = {"identity", "sigma_z ", "sigma-  ", "sigma+  "};
  for (int i = 0; i < 4; ++i) {
    std::printf("branch %s coeff residual  %s\n", names[i],
                riq::format_double(pe.residual[std::size_t(i)]).c_str());
    worst = std::max(worst, pe.residual[std::size_t(i)]);
  }
  if (worst > o.tol) {
    std::printf("FAIL: worst residual %s exceeds tol %s\n", riq::format_double(worst).c_str(),
                riq::format_double(o.tol).c_str());
    return 1;
  }
  std::printf("pass: worst residual %s\n", riq::format_double(worst).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repeated interaction models: exact reduced dynamics and asymptotic generators"};
  app.require_subcommand(1);
  Options o;

  CLI::App* validate = app.add_subcommand("validate", "parse and sanity-check a model config");
  CLI::App* generators =
      app.add_subcommand("generators", "export the five effective generators as JSON");
  CLI::App* converge = app.add_subcommand("converge", "run one convergence study, CSV + summary");
  CLI::App* qubit = app.add_subcommand("qubit", "closed-form vs numeric two-level diagnostics");
  for (CLI::App* cmd : {validate, generators, converge, qubit}) add_common(cmd, o);
  converge->add_option("--regime", o.regime, "weak | regime2 | critical | continuous");
  converge->add_option("--k-list", o.kList, "comma-separated step counts")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  }

  try {
    apply_env_seed(o);
    if (validate->parsed()) return cmd_validate(o);
    if (generators->parsed()) return cmd_generators(o);
    if (converge->parsed()) return cmd_converge(o);
    if (qubit->parsed()) return cmd_qubit(o);
    return 2;
  } catch (const riq::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
