#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "twistchain/baxter.hpp"
#include "twistchain/bethe.hpp"
#include "twistchain/config.hpp"
#include "twistchain/oracle.hpp"
#include "twistchain/report.hpp"
#include "twistchain/sov.hpp"
#include "twistchain/suites.hpp"

namespace tc = twistchain;
using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool timing = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "Model definition file (TOML)")
      ->required();
  sub->add_option("--out", opts.out_path, "Write the JSON report here (default: stdout)");
  sub->add_option("--seed", opts.seed, "Override rng_seed from the config")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  sub->add_flag("--timing", opts.timing, "Print wall time to stderr");
}

tc::ModelConfig load(const CommonOpts& opts) {
  tc::ModelConfig config = tc::load_config(opts.config_path);
  if (opts.seed_given) config.rng_seed = opts.seed;
  return config;
}

void emit(const tc::RunReport& report, const CommonOpts& opts) {
  if (opts.out_path.empty()) {
    std::cout << tc::render_report(report);
  } else {
    tc::write_report(report, opts.out_path);
  }
}

double sample_radius(const tc::ChainSpec& spec) {
  return 1.0 + spec.max_abs_theta() +
         std::abs(spec.c) * (0.5 * spec.total_twos() + 1.0);
}

/// Spectral samples keeping clear of every point in `avoid`.
std::vector<tc::Complex> draw_clear(const tc::ChainSpec& spec, tc::Rng& rng, int count,
                                    const std::vector<tc::Complex>& avoid) {
  const double r = sample_radius(spec);
  std::vector<tc::Complex> zs;
  while (static_cast<int>(zs.size()) < count) {
    const tc::Complex z = rng.annulus(0.3 * r, 1.2 * r);
    bool clear = true;
    for (tc::Complex w : avoid) {
      if (std::abs(z - w) < 1e-3 * r) clear = false;
    }
    for (tc::Complex w : zs) {
      if (std::abs(z - w) < 1e-3 * r) clear = false;
    }
    if (clear) zs.push_back(z);
  }
  return zs;
}

json roots_json(const std::vector<tc::Complex>& roots) {
  json arr = json::array();
  for (tc::Complex r : roots) arr.push_back(tc::complex_json(r));
  return arr;
}

int run_check(const CommonOpts& opts, double tol_scale) {
  const tc::ModelConfig config = load(opts);
  const std::vector<tc::SuiteOutcome> outcomes =
      tc::run_selected_suites(config, tol_scale);

  tc::RunReport report;
  report.config = tc::config_echo(config);
  report.rng_seed = config.rng_seed;
  json details;
  for (const tc::SuiteOutcome& outcome : outcomes) {
    report.suites.push_back(outcome.result);
    details[outcome.result.name] = outcome.details;
  }
  report.extra["details"] = details;
  emit(report, opts);
  return report.all_pass() ? 0 : 1;
}

int run_solve(const CommonOpts& opts, const std::string& mode_name, int m_flag,
              bool m_given) {
  const tc::ModelConfig config = load(opts);
  const std::optional<tc::BetheMode> mode = tc::parse_mode(mode_name);
  if (!mode) {
    throw tc::ConfigError("unknown mode '" + mode_name +
                          "' (expected diagonal-up, diagonal-down, modified-up or "
                          "modified-down)");
  }
  const tc::ChainSpec& spec = config.chain;
  const int s = spec.total_twos();

  tc::BetheProblem problem;
  int m = 0;
  if (tc::is_modified(*mode)) {
    problem = tc::modified_problem(spec, tc::make_factorization(config), *mode);
    m = s;
    if (m_given && m_flag != s) {
      std::cerr << "warning: --m ignored for modified modes (root count is fixed at S = "
                << s << ")\n";
    }
  } else {
    problem = tc::diagonal_problem(spec, config.twist, *mode);
    if (!m_given) throw tc::ConfigError("solve: --m is required for the diagonal modes");
    if (m_flag < 0 || m_flag > s) {
      throw tc::ConfigError("solve: --m must lie in [0, " + std::to_string(s) + "]");
    }
    m = m_flag;
  }

  tc::SolveOptions solve_opts;
  solve_opts.starts = config.solver.starts;
  solve_opts.newton_tol = config.solver.newton_tol;
  solve_opts.max_iter = config.solver.max_iter;
  solve_opts.seed = config.rng_seed;
  const tc::SolveResult result = tc::solve_bethe(problem, m, solve_opts);

  tc::Rng master(config.rng_seed);

  // Predicted eigenvalue tuples vs the dense spectrum.
  std::vector<tc::Complex> avoid;
  for (const tc::BetheRootSet& set : result.sets) {
    avoid.insert(avoid.end(), set.roots.begin(), set.roots.end());
  }
  tc::Rng z_rng = master.child(101);
  const std::vector<tc::Complex> zs = draw_clear(spec, z_rng, 3, avoid);
  const tc::SpectrumReport oracle = tc::diagonalize_transfer(spec, problem.twist, zs);
  std::vector<std::vector<tc::Complex>> predicted;
  for (const tc::BetheRootSet& set : result.sets) {
    std::vector<tc::Complex> tuple;
    for (tc::Complex z : zs) tuple.push_back(tc::eigenvalue_fn(problem, z, set.roots));
    predicted.push_back(tuple);
  }
  const tc::MatchReport match = tc::match_spectrum(oracle, predicted);

  tc::RunReport report;
  report.config = tc::config_echo(config);
  report.rng_seed = config.rng_seed;
  report.coverage = match.coverage;

  tc::Rng check_rng = master.child(102);
  json sets = json::array();
  tc::Residual worst;
  bool all_pass = true;
  for (std::size_t i = 0; i < result.sets.size(); ++i) {
    const tc::BetheRootSet& set = result.sets[i];
    const tc::OnshellReport onshell = tc::check_onshell(problem, set.roots, check_rng);
    all_pass = all_pass && onshell.pass();
    worst.join(tc::Residual{onshell.identity_residual, onshell.identity_residual});
    json entry;
    entry["roots"] = roots_json(set.roots);
    entry["max_bethe_residual"] = set.max_residual;
    entry["on_shell"] = onshell.on_shell;
    entry["identity_residual"] = onshell.identity_residual;
    entry["eigen_residual"] = onshell.eigen_residual;
    entry["oracle_distance"] = onshell.oracle_distance;
    entry["matched_index"] = match.assignment[i];
    sets.push_back(entry);
    report.roots.push_back(roots_json(set.roots));
  }

  report.suites.push_back(tc::SuiteResult{"solve", worst, all_pass});
  report.extra["mode"] = tc::mode_name(*mode);
  report.extra["m"] = m;
  report.extra["starts"] = result.starts;
  report.extra["converged_starts"] = result.converged;
  report.extra["oracle_dim"] = oracle.dim;
  report.extra["matched"] = match.matched;
  report.extra["sets"] = sets;
  emit(report, opts);
  return all_pass ? 0 : 1;
}

int run_wronskian(const CommonOpts& opts, const std::string& kind, int m_flag,
                  bool m_given) {
  const tc::ModelConfig config = load(opts);
  const tc::ChainSpec& spec = config.chain;
  const int s = spec.total_twos();

  tc::SolveOptions solve_opts;
  solve_opts.starts = config.solver.starts;
  solve_opts.newton_tol = config.solver.newton_tol;
  solve_opts.max_iter = config.solver.max_iter;
  solve_opts.seed = config.rng_seed;

  tc::Rng master(config.rng_seed);
  tc::Rng grid_rng = master.child(201);
  const std::vector<tc::Complex> grid = tc::wronskian_grid(spec, grid_rng, 16);

  const auto tuples_at = [&](const tc::BetheProblem& problem,
                             const std::vector<tc::BetheRootSet>& sets,
                             const std::vector<tc::Complex>& zs) {
    std::vector<std::vector<tc::Complex>> tuples;
    for (const tc::BetheRootSet& set : sets) {
      std::vector<tc::Complex> tuple;
      for (tc::Complex z : zs) tuple.push_back(tc::eigenvalue_fn(problem, z, set.roots));
      tuples.push_back(tuple);
    }
    return tuples;
  };

  std::vector<tc::WronskianReport> reports;
  json pairs = json::array();

  if (kind == "diagonal") {
    if (!m_given) {
      throw tc::ConfigError("wronskian --kind diagonal needs --m (root count of q+)");
    }
    if (m_flag < 0 || m_flag > s) {
      throw tc::ConfigError("wronskian: --m must lie in [0, " + std::to_string(s) + "]");
    }
    tc::BetheProblem up =
        tc::diagonal_problem(spec, config.twist, tc::BetheMode::DiagonalUp);
    tc::BetheProblem down =
        tc::diagonal_problem(spec, config.twist, tc::BetheMode::DiagonalDown);
    const tc::SolveResult up_sets = tc::solve_bethe(up, m_flag, solve_opts);
    const tc::SolveResult down_sets = tc::solve_bethe(down, s - m_flag, solve_opts);

    std::vector<tc::Complex> avoid;
    for (const auto& set : up_sets.sets)
      avoid.insert(avoid.end(), set.roots.begin(), set.roots.end());
    for (const auto& set : down_sets.sets)
      avoid.insert(avoid.end(), set.roots.begin(), set.roots.end());
    tc::Rng z_rng = master.child(202);
    const std::vector<tc::Complex> zs = draw_clear(spec, z_rng, 3, avoid);

    const tc::EigenvaluePairing pairing = tc::pair_by_eigenvalue(
        tuples_at(up, up_sets.sets, zs), tuples_at(down, down_sets.sets, zs));
    if (pairing.pairs.empty()) {
      throw tc::PairingFailure("wronskian: no up/down eigenvalue pairs matched");
    }
    for (const auto& [i, j] : pairing.pairs) {
      const tc::QPolynomial q_plus = tc::q_from_roots(up_sets.sets[i].roots, spec.c);
      const tc::QPolynomial q_minus = tc::q_from_roots(down_sets.sets[j].roots, spec.c);
      reports.push_back(tc::wronskian_diag(spec, config.twist, q_plus, q_minus, grid));
      json entry;
      entry["pair"] = json::array({i, j});
      entry["max_residual"] = reports.back().max_residual;
      entry["constant_residual"] = reports.back().constant_residual;
      entry["degree_ok"] = reports.back().degree_ok;
      entry["pass"] = reports.back().pass;
      pairs.push_back(entry);
    }
  } else if (kind == "modified") {
    const tc::TwistFactorization fact = tc::make_factorization(config);
    tc::BetheProblem up = tc::modified_problem(spec, fact, tc::BetheMode::ModifiedUp);
    tc::BetheProblem down =
        tc::modified_problem(spec, fact, tc::BetheMode::ModifiedDown);
    const tc::SolveResult up_sets = tc::solve_bethe(up, s, solve_opts);
    const tc::SolveResult down_sets = tc::solve_bethe(down, s, solve_opts);

    std::vector<tc::Complex> avoid;
    for (const auto& set : up_sets.sets)
      avoid.insert(avoid.end(), set.roots.begin(), set.roots.end());
    for (const auto& set : down_sets.sets)
      avoid.insert(avoid.end(), set.roots.begin(), set.roots.end());
    tc::Rng z_rng = master.child(202);
    const std::vector<tc::Complex> zs = draw_clear(spec, z_rng, 3, avoid);

    const tc::EigenvaluePairing pairing = tc::pair_by_eigenvalue(
        tuples_at(up, up_sets.sets, zs), tuples_at(down, down_sets.sets, zs));
    if (pairing.pairs.empty()) {
      throw tc::PairingFailure("wronskian: no up/down eigenvalue pairs matched");
    }
    for (const auto& [i, j] : pairing.pairs) {
      const tc::QPolynomial q_plus = tc::q_from_roots(up_sets.sets[i].roots, spec.c);
      const tc::QPolynomial q_minus = tc::q_from_roots(down_sets.sets[j].roots, spec.c);
      reports.push_back(tc::wronskian_modified(spec, fact, q_plus, q_minus, grid));
      json entry;
      entry["pair"] = json::array({i, j});
      entry["max_residual"] = reports.back().max_residual;
      entry["pass"] = reports.back().pass;
      pairs.push_back(entry);
    }
  } else if (kind == "mixed") {
    const tc::TwistFactorization fact = tc::make_factorization(config);
    tc::BetheProblem up = tc::modified_problem(spec, fact, tc::BetheMode::ModifiedUp);
    const tc::SolveResult up_sets = tc::solve_bethe(up, s, solve_opts);
    const auto [a1, a2] = tc::twist_eigenvalues(config.twist);

    for (std::size_t i = 0; i < up_sets.sets.size(); ++i) {
      const std::vector<tc::Complex>& roots = up_sets.sets[i].roots;
      const tc::EigenvalueFn lambda_big = [&up, &roots](tc::Complex z) {
        return tc::eigenvalue_fn(up, z, roots);
      };
      tc::Rng tq_rng = master.child(210 + static_cast<std::uint64_t>(i));
      const tc::UsualTqSolution tq =
          tc::solve_usual_tq(spec, lambda_big, a1, a2, s, tq_rng);
      const tc::QPolynomial q_plus = tc::q_from_roots(roots, spec.c);
      reports.push_back(tc::wronskian_mixed(spec, fact, tq.q, tq.alpha_plus,
                                            tq.alpha_minus, q_plus, grid));
      json entry;
      entry["set"] = i;
      entry["q_degree"] = tq.q.degree();
      entry["tq_fit_residual"] = tq.residual;
      entry["max_residual"] = reports.back().max_residual;
      entry["identity_residual"] = reports.back().identity_residual;
      entry["pass"] = reports.back().pass;
      pairs.push_back(entry);
    }
  } else {
    throw tc::ConfigError("unknown wronskian kind '" + kind +
                          "' (expected diagonal, modified or mixed)");
  }

  tc::Residual worst;
  bool all_pass = !reports.empty();
  for (const tc::WronskianReport& rep : reports) {
    worst.join(tc::Residual{rep.max_residual, rep.max_residual});
    all_pass = all_pass && rep.pass;
  }

  tc::RunReport report;
  report.config = tc::config_echo(config);
  report.rng_seed = config.rng_seed;
  report.suites.push_back(tc::SuiteResult{"wronskian_" + kind, worst, all_pass});
  report.extra["kind"] = kind;
  report.extra["grid_points"] = static_cast<int>(grid.size());
  report.extra["pairs"] = pairs;
  emit(report, opts);
  return all_pass ? 0 : 1;
}

int run_sov(const CommonOpts& opts) {
  const tc::ModelConfig config = load(opts);
  const tc::TwistFactorization fact = tc::make_factorization(config);
  tc::Rng master(config.rng_seed);
  // Same child tag as in run_selected_suites: `sov` alone reproduces the
  // sov entry of `check` bit for bit.
  tc::Rng sub = master.child(15);
  const tc::SuiteOutcome outcome = tc::run_sov_suite(config.chain, fact, sub);

  tc::RunReport report;
  report.config = tc::config_echo(config);
  report.rng_seed = config.rng_seed;
  report.suites.push_back(outcome.result);
  report.extra["details"] = json{{outcome.result.name, outcome.details}};
  emit(report, opts);
  return outcome.result.pass ? 0 : 1;
}

int run_diag(const CommonOpts& opts, int points) {
  const tc::ModelConfig config = load(opts);
  const tc::ChainSpec& spec = config.chain;
  tc::Rng master(config.rng_seed);
  tc::Rng z_rng = master.child(301);
  const std::vector<tc::Complex> zs = draw_clear(spec, z_rng, points, {});

  const tc::SpectrumReport oracle = tc::diagonalize_transfer(spec, config.twist, zs);
  const tc::Residual self = tc::spectrum_self_check(spec, config.twist, oracle);

  tc::RunReport report;
  report.config = tc::config_echo(config);
  report.rng_seed = config.rng_seed;
  report.suites.push_back(
      tc::SuiteResult{"oracle_self_check", self, self.rel <= 1e-8});

  json spectra = json::array();
  for (std::size_t k = 0; k < oracle.z_samples.size(); ++k) {
    json entry;
    entry["z"] = tc::complex_json(oracle.z_samples[k]);
    json values = json::array();
    for (tc::Complex v : oracle.eigenvalues[k]) values.push_back(tc::complex_json(v));
    entry["eigenvalues"] = values;
    entry["degenerate"] = static_cast<bool>(oracle.degenerate[k]);
    spectra.push_back(entry);
  }
  report.extra["oracle"] = json{{"dim", oracle.dim},
                                {"joint_ok", oracle.joint_ok},
                                {"joint_leakage", oracle.joint_leakage},
                                {"spectra", spectra}};
  emit(report, opts);
  return self.rel <= 1e-8 ? 0 : 1;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const tc::ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const tc::NoConvergence& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const tc::DegenerateFactorization& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const tc::NonGenericTheta& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const tc::DimensionCap& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted XXX chain: modified algebraic Bethe ansatz toolkit"};
  app.require_subcommand(1);

  CommonOpts check_opts;
  double tol_scale = 1.0;
  CLI::App* check = app.add_subcommand("check", "Run the algebraic identity suites");
  add_common(check, check_opts);
  check->add_option("--tol-scale", tol_scale, "Scale every pass threshold");

  CommonOpts solve_opts;
  std::string mode;
  int solve_m = -1;
  CLI::App* solve = app.add_subcommand("solve", "Solve Bethe equations and certify roots");
  add_common(solve, solve_opts);
  solve->add_option("--mode", mode,
                    "diagonal-up | diagonal-down | modified-up | modified-down")
      ->required();
  CLI::Option* solve_m_opt = solve->add_option("--m", solve_m, "Root count (diagonal modes)");

  CommonOpts wron_opts;
  std::string kind;
  int wron_m = -1;
  CLI::App* wron = app.add_subcommand("wronskian", "Verify a Wronskian identity");
  add_common(wron, wron_opts);
  wron->add_option("--kind", kind, "diagonal | modified | mixed")->required();
  CLI::Option* wron_m_opt = wron->add_option("--m", wron_m, "Root count of q+ (diagonal kind)");

  CommonOpts sov_opts;
  CLI::App* sov = app.add_subcommand("sov", "Verify the separated eigenbasis");
  add_common(sov, sov_opts);

  CommonOpts diag_opts;
  int diag_points = 3;
  CLI::App* diag = app.add_subcommand("diag", "Dense transfer-matrix spectra");
  add_common(diag, diag_opts);
  diag->add_option("--points", diag_points, "Number of spectral samples")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  const auto timed = [&](const CommonOpts& opts, const std::function<int()>& body) {
    const auto start = std::chrono::steady_clock::now();
    const int code = guarded(body);
    if (opts.timing) {
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      std::cerr << "timing: " << elapsed.count() << " ms\n";
    }
    return code;
  };

  if (check->parsed()) {
    return timed(check_opts, [&] { return run_check(check_opts, tol_scale); });
  }
  if (solve->parsed()) {
    return timed(solve_opts, [&] {
      return run_solve(solve_opts, mode, solve_m, solve_m_opt->count() > 0);
    });
  }
  if (wron->parsed()) {
    return timed(wron_opts, [&] {
      return run_wronskian(wron_opts, kind, wron_m, wron_m_opt->count() > 0);
    });
  }
  if (sov->parsed()) {
    return timed(sov_opts, [&] { return run_sov(sov_opts); });
  }
  if (diag->parsed()) {
    return timed(diag_opts, [&] { return run_diag(diag_opts, diag_points); });
  }
  return 2;
}
