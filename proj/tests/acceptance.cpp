// Acceptance gate: one line per criterion, pinned tolerances, exit 0 only
// when everything passes. Each block is self-seeded so the lines are
// independently reproducible.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "twistchain/baxter.hpp"
#include "twistchain/bethe.hpp"
#include "twistchain/kernels.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/oracle.hpp"
#include "twistchain/poly.hpp"
#include "twistchain/report.hpp"
#include "twistchain/rng.hpp"
#include "twistchain/sov.hpp"
#include "twistchain/suites.hpp"

using namespace twistchain;
namespace tu = twistchain::testutil;

namespace {

bool g_all_ok = true;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void criterion(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %-28s %s\n", ok ? "PASS" : "FAIL", num, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) g_all_ok = false;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", x);
  return buf;
}

const std::vector<std::vector<int>> kChains = {{1}, {1, 1}, {1, 1, 1}, {2, 1}};

std::vector<std::vector<Complex>> prediction_tuples(const BetheProblem& problem,
                                                    const SolveResult& res,
                                                    std::span<const Complex> zs) {
  std::vector<std::vector<Complex>> predicted;
  for (const auto& set : res.sets) {
    if (!set.on_shell) continue;
    std::vector<Complex> tuple;
    for (Complex z : zs) tuple.push_back(eigenvalue_fn(problem, z, set.roots));
    predicted.push_back(std::move(tuple));
  }
  return predicted;
}

double tq_worst(const ChainSpec& spec, const Twist& tw, const TwistFactorization* fact,
                const QPolynomial& q, const EigenvalueFn& lambda,
                std::span<const Complex> grid, TqKind kind) {
  double worst = 0.0;
  for (Complex z : grid) {
    const double scale = std::max(1.0, std::abs(lambda(z) * q(z)));
    worst = std::max(worst,
                     std::abs(tq_residual(spec, tw, fact, q, lambda, z, kind)) / scale);
  }
  return worst;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return "<unreadable>";
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  // 1. RTT exchange relation and Yang-Baxter, 5 samples per chain.
  {
    Timer timer;
    double worst_rtt = 0.0, worst_yb = 0.0;
    Rng rng(1001);
    for (const auto& twos : kChains) {
      const ChainSpec spec = tu::chain(twos, 300 + twos.size());
      for (int k = 0; k < 5; ++k) {
        const Complex u = rng.annulus(0.5, 3.0);
        const Complex v = rng.annulus(0.5, 3.0);
        const Complex w = rng.annulus(0.5, 3.0);
        worst_rtt = std::max(worst_rtt, check_rtt(spec, u, v).rel);
        worst_yb = std::max(worst_yb, yang_baxter_residual(u, v, w, spec.c).rel);
      }
    }
    const double secs = timer.seconds();
    criterion(1, "RTT + Yang-Baxter", worst_rtt <= 1e-10 && worst_yb <= 1e-14 &&
                                          secs < 5.0,
              "rtt " + fmt(worst_rtt) + " (<=1e-10), yb " + fmt(worst_yb) +
                  " (<=1e-14), " + fmt(secs) + "s");
  }

  // 2. Commuting transfer family, 5 pairs per chain.
  {
    Timer timer;
    double worst = 0.0;
    Rng rng(1002);
    for (const auto& twos : kChains) {
      const ChainSpec spec = tu::chain(twos, 310 + twos.size());
      const Twist tw = tu::generic_twist(311);
      const auto zs = tu::sample_points(spec, rng, 5);
      worst = std::max(worst, check_commuting_family(spec, tw, zs).rel);
    }
    const double secs = timer.seconds();
    criterion(2, "commuting family", worst <= 1e-10 && secs < 5.0,
              "rel " + fmt(worst) + " (<=1e-10), " + fmt(secs) + "s");
  }

  // 3. Weight-vector actions of the modified entries and transfer matrices,
  //    10 points per chain.
  {
    Timer timer;
    double worst = 0.0;
    Rng rng(1003);
    for (const auto& twos : kChains) {
      const ChainSpec spec = tu::chain(twos, 320 + twos.size());
      const TwistFactorization fact =
          factorize_twist(tu::generic_twist(321), FactorizationMode::EqualRho);
      const auto zs = tu::sample_points(spec, rng, 10);
      worst = std::max(worst, check_weight_actions(spec, fact, zs).rel);
    }
    const double secs = timer.seconds();
    criterion(3, "weight actions", worst <= 1e-11 && secs < 5.0,
              "rel " + fmt(worst) + " (<=1e-11), " + fmt(secs) + "s");
  }

  // 4. Null-twisted product identity (all four modified entries) plus the
  //    vanishing off-diagonal product, #ubar = S.
  {
    Timer timer;
    double worst_id = 0.0, worst_offdiag = 0.0;
    Rng rng(1004);
    for (const auto& twos : {std::vector<int>{1}, std::vector<int>{2},
                             std::vector<int>{1, 1}, std::vector<int>{2, 1}}) {
      const ChainSpec spec = tu::chain(twos, 330 + twos.size() + twos[0]);
      const TwistFactorization fact =
          factorize_twist(tu::generic_twist(331), FactorizationMode::EqualRho);
      const auto pts = tu::sample_points(spec, rng, spec.total_twos() + 1);
      const Complex z = pts[0];
      const std::vector<Complex> us(pts.begin() + 1, pts.end());
      for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
          const Matrix2 v = null_twist_for(fact, i, j);
          worst_id = std::max(worst_id, check_null_product_identity(spec, v, us, z).rel);
        }
      }
      worst_offdiag =
          std::max(worst_offdiag, check_offdiag_product_vanishes(spec, 1, 2, us, z).rel);
      worst_offdiag =
          std::max(worst_offdiag, check_offdiag_product_vanishes(spec, 2, 1, us, z).rel);
    }
    const double secs = timer.seconds();
    criterion(4, "null-product identity", worst_id <= 1e-9 && worst_offdiag <= 1e-10 &&
                                              secs < 10.0,
              "identity " + fmt(worst_id) + " (<=1e-9), offdiag " + fmt(worst_offdiag) +
                  " (<=1e-10), " + fmt(secs) + "s");
  }

  // 5. Off-shell action identity at random (off-shell) roots, diagonal and
  //    modified families.
  {
    Timer timer;
    double worst = 0.0;
    Rng rng(1005);
    for (const auto& twos : kChains) {
      const ChainSpec spec = tu::chain(twos, 340 + twos.size());
      const TwistFactorization fact =
          factorize_twist(tu::generic_twist(341), FactorizationMode::EqualRho);
      for (BetheMode mode : {BetheMode::ModifiedUp, BetheMode::ModifiedDown}) {
        const BetheProblem problem = modified_problem(spec, fact, mode);
        const auto roots = tu::sample_points(spec, rng, spec.total_twos());
        Rng check_rng = rng.child(42);
        worst = std::max(worst,
                         check_onshell(problem, roots, check_rng, 3).identity_residual);
      }
      const BetheProblem diag =
          diagonal_problem(spec, tu::diagonal_twist(342), BetheMode::DiagonalUp);
      const auto roots = tu::sample_points(spec, rng, 1);
      Rng check_rng = rng.child(43);
      worst = std::max(worst,
                       check_onshell(diag, roots, check_rng, 3).identity_residual);
    }
    const double secs = timer.seconds();
    criterion(5, "off-shell action", worst <= 1e-10,
              "rel " + fmt(worst) + " (<=1e-10), " + fmt(secs) + "s");
  }

  // 6. Diagonal spectrum: N=2 spin-1/2 sectors M = 0,1,2 against the dense
  //    oracle; N=1 closed-form root.
  {
    Timer timer;
    bool ok = true;
    double worst_oracle = 0.0;
    int states = 0;
    const ChainSpec spec = tu::chain({1, 1}, 350);
    const Twist tw = tu::diagonal_twist(351);
    SolveOptions opts;
    opts.seed = 352;
    for (int m = 0; m <= 2; ++m) {
      const BetheProblem problem = diagonal_problem(spec, tw, BetheMode::DiagonalUp);
      const SolveResult res = solve_bethe(problem, m, opts);
      for (const auto& set : res.sets) {
        if (!set.on_shell) continue;
        ++states;
        Rng check_rng(353);
        const OnshellReport rep = check_onshell(problem, set.roots, check_rng, 3);
        worst_oracle = std::max(worst_oracle, rep.oracle_distance);
        ok = ok && rep.oracle_distance <= 1e-6;
      }
    }
    ok = ok && states == 4;  // 1 + 2 + 1 states across the sectors

    ChainSpec one({1}, {Complex{0.0, 0.0}}, Complex{1.0, 0.0});
    Twist dtw;
    dtw.k_tilde = Complex{1.1, 0.2};
    dtw.k = Complex{0.6, -0.3};
    dtw.k_plus = dtw.k_minus = Complex{0.0, 0.0};
    const SolveResult closed =
        solve_bethe(diagonal_problem(one, dtw, BetheMode::DiagonalUp), 1, opts);
    const Complex expect = dtw.k_tilde / (dtw.k - dtw.k_tilde);
    double root_err = 1e300;
    for (const auto& set : closed.sets) {
      root_err = std::min(root_err, std::abs(set.roots[0] - expect));
    }
    ok = ok && root_err <= 1e-10;
    const double secs = timer.seconds();
    criterion(6, "diagonal spectrum", ok,
              "oracle " + fmt(worst_oracle) + " (<=1e-6) over " +
                  std::to_string(states) + " states, closed-form " + fmt(root_err) +
                  " (<=1e-10), " + fmt(secs) + "s");
  }

  // 7. Modified spectrum: N=1 exhaustive (2/2 to 1e-8), N=2 multi-start
  //    (coverage >= 3/4 to 1e-6; full coverage is reported, not required).
  {
    Timer timer;
    bool ok = true;
    std::string detail;

    const ChainSpec one = tu::chain({1}, 360);
    const TwistFactorization fact1 =
        factorize_twist(tu::generic_twist(361), FactorizationMode::EqualRho);
    const BetheProblem p1 = modified_problem(one, fact1, BetheMode::ModifiedUp);
    SolveOptions opts;
    opts.seed = 362;
    const SolveResult res1 = solve_bethe(p1, 0, opts);
    Rng zrng(363);
    const auto zs1 = tu::sample_points(one, zrng, 3);
    const SpectrumReport oracle1 = diagonalize_transfer(one, fact1.twist, zs1);
    const MatchReport match1 =
        match_spectrum(oracle1, prediction_tuples(p1, res1, zs1), 1e-8);
    ok = ok && match1.matched == 2;
    detail += "N=1 " + std::to_string(match1.matched) + "/2 err " +
              fmt(match1.max_matched_distance) + " (<=1e-8)";

    const ChainSpec two = tu::chain({1, 1}, 364);
    const TwistFactorization fact2 =
        factorize_twist(tu::generic_twist(365), FactorizationMode::EqualRho);
    const BetheProblem p2 = modified_problem(two, fact2, BetheMode::ModifiedUp);
    opts.seed = 366;
    const SolveResult res2 = solve_bethe(p2, 0, opts);
    const auto zs2 = tu::sample_points(two, zrng, 3);
    const SpectrumReport oracle2 = diagonalize_transfer(two, fact2.twist, zs2);
    const MatchReport match2 =
        match_spectrum(oracle2, prediction_tuples(p2, res2, zs2), 1e-6);
    ok = ok && match2.matched >= 3;
    detail += ", N=2 " + std::to_string(match2.matched) + "/4 err " +
              fmt(match2.max_matched_distance) + " (<=1e-6)";

    const double secs = timer.seconds();
    ok = ok && secs < 60.0;
    criterion(7, "modified spectrum", ok, detail + ", " + fmt(secs) + "s");
  }

  // 8. T-Q equations for all four kinds on a 20-point grid, with the
  //    perturbed-q non-vacuity guard.
  {
    Timer timer;
    double worst = 0.0, guard = 1e300;
    const ChainSpec spec = tu::chain({1, 1}, 370);
    Rng rng(371);
    const auto grid = wronskian_grid(spec, rng, 20);
    SolveOptions opts;
    opts.seed = 372;

    const Twist dtw = tu::diagonal_twist(373);
    for (BetheMode mode : {BetheMode::DiagonalUp, BetheMode::DiagonalDown}) {
      const BetheProblem problem = diagonal_problem(spec, dtw, mode);
      const TqKind kind =
          (mode == BetheMode::DiagonalUp) ? TqKind::DiagPlus : TqKind::DiagMinus;
      const SolveResult res = solve_bethe(problem, 1, opts);
      for (const auto& set : res.sets) {
        const EigenvalueFn lambda = [&problem, roots = set.roots](Complex z) {
          return eigenvalue_fn(problem, z, roots);
        };
        worst = std::max(worst, tq_worst(spec, dtw, nullptr,
                                         q_from_roots(set.roots, spec.c), lambda, grid,
                                         kind));
        auto wrong = set.roots;
        for (Complex& r : wrong) r += Complex{0.1, 0.0};
        guard = std::min(guard, tq_worst(spec, dtw, nullptr,
                                         q_from_roots(wrong, spec.c), lambda, grid,
                                         kind));
      }
    }

    const TwistFactorization fact =
        factorize_twist(tu::generic_twist(374), FactorizationMode::EqualRho);
    for (BetheMode mode : {BetheMode::ModifiedUp, BetheMode::ModifiedDown}) {
      const BetheProblem problem = modified_problem(spec, fact, mode);
      const TqKind kind =
          (mode == BetheMode::ModifiedUp) ? TqKind::InhomPlus : TqKind::InhomMinus;
      const SolveResult res = solve_bethe(problem, 0, opts);
      for (const auto& set : res.sets) {
        const EigenvalueFn lambda = [&problem, roots = set.roots](Complex z) {
          return eigenvalue_fn(problem, z, roots);
        };
        worst = std::max(worst, tq_worst(spec, fact.twist, &fact,
                                         q_from_roots(set.roots, spec.c), lambda, grid,
                                         kind));
        auto wrong = set.roots;
        for (Complex& r : wrong) r += Complex{0.1, 0.0};
        guard = std::min(guard, tq_worst(spec, fact.twist, &fact,
                                         q_from_roots(wrong, spec.c), lambda, grid,
                                         kind));
      }
    }
    const double secs = timer.seconds();
    criterion(8, "T-Q equations", worst <= 1e-9 && guard > 1e-3,
              "on-shell " + fmt(worst) + " (<=1e-9), perturbed min " + fmt(guard) +
                  " (>1e-3), " + fmt(secs) + "s");
  }

  // 9. Quantum wronskians: diagonal constant, modified difference identity,
  //    mixed identity with the alpha+ alpha- determinant split.
  {
    Timer timer;
    bool ok = true;
    double worst_const = 0.0, worst_mod = 0.0, worst_mixed = 0.0, worst_alpha = 0.0;
    const ChainSpec spec = tu::chain({1, 1}, 380);
    Rng rng(381);
    const auto grid = wronskian_grid(spec, rng, 16);
    const auto zs = tu::sample_points(spec, rng, 3);
    SolveOptions opts;
    opts.seed = 382;

    auto tuples_of = [&zs](const BetheProblem& p, const SolveResult& r) {
      std::vector<std::vector<Complex>> tuples;
      for (const auto& set : r.sets) {
        std::vector<Complex> t;
        for (Complex z : zs) t.push_back(eigenvalue_fn(p, z, set.roots));
        tuples.push_back(std::move(t));
      }
      return tuples;
    };

    const Twist dtw = tu::diagonal_twist(383);
    const BetheProblem up = diagonal_problem(spec, dtw, BetheMode::DiagonalUp);
    const BetheProblem down = diagonal_problem(spec, dtw, BetheMode::DiagonalDown);
    const SolveResult up_res = solve_bethe(up, 1, opts);
    const SolveResult down_res = solve_bethe(down, 1, opts);
    const EigenvaluePairing diag_pairs =
        pair_by_eigenvalue(tuples_of(up, up_res), tuples_of(down, down_res));
    ok = ok && diag_pairs.pairs.size() == 2;
    for (const auto& [ui, di] : diag_pairs.pairs) {
      const WronskianReport rep =
          wronskian_diag(spec, dtw, q_from_roots(up_res.sets[ui].roots, spec.c),
                         q_from_roots(down_res.sets[di].roots, spec.c), grid, 1e-9);
      worst_const = std::max(
          worst_const, std::abs(rep.constant_value - (dtw.k_tilde - dtw.k)) /
                           std::abs(dtw.k_tilde - dtw.k));
      ok = ok && rep.pass && rep.degree_ok;
    }

    const TwistFactorization fact =
        factorize_twist(tu::generic_twist(384), FactorizationMode::EqualRho);
    const BetheProblem mup = modified_problem(spec, fact, BetheMode::ModifiedUp);
    const BetheProblem mdown = modified_problem(spec, fact, BetheMode::ModifiedDown);
    opts.seed = 385;
    const SolveResult mup_res = solve_bethe(mup, 0, opts);
    const SolveResult mdown_res = solve_bethe(mdown, 0, opts);
    const EigenvaluePairing mod_pairs =
        pair_by_eigenvalue(tuples_of(mup, mup_res), tuples_of(mdown, mdown_res));
    ok = ok && !mod_pairs.pairs.empty();
    for (const auto& [ui, di] : mod_pairs.pairs) {
      const WronskianReport rep = wronskian_modified(
          spec, fact, q_from_roots(mup_res.sets[ui].roots, spec.c),
          q_from_roots(mdown_res.sets[di].roots, spec.c), grid, 1e-8);
      worst_mod = std::max(worst_mod, rep.max_residual);
      ok = ok && rep.pass;
    }

    const auto [a1, a2] = twist_eigenvalues(fact.twist);
    Rng tq_rng(386);
    for (const auto& set : mup_res.sets) {
      const EigenvalueFn lambda = [&mup, roots = set.roots](Complex z) {
        return eigenvalue_fn(mup, z, roots);
      };
      const UsualTqSolution usual =
          solve_usual_tq(spec, lambda, a1, a2, spec.total_twos(), tq_rng);
      worst_alpha =
          std::max(worst_alpha,
                   std::abs(usual.alpha_plus * usual.alpha_minus -
                            fact.alpha_plus() * fact.alpha_minus()) /
                       std::abs(fact.twist.det()));
      const WronskianReport rep =
          wronskian_mixed(spec, fact, usual.q, usual.alpha_plus, usual.alpha_minus,
                          q_from_roots(set.roots, spec.c), grid, 1e-8);
      worst_mixed = std::max(worst_mixed, rep.max_residual);
      ok = ok && rep.pass;
    }

    ok = ok && worst_const <= 1e-9 && worst_mod <= 1e-8 && worst_mixed <= 1e-8 &&
         worst_alpha <= 1e-12;
    const double secs = timer.seconds();
    criterion(9, "quantum wronskians", ok,
              "const " + fmt(worst_const) + " (<=1e-9), modified " + fmt(worst_mod) +
                  " (<=1e-8), mixed " + fmt(worst_mixed) + " (<=1e-8), alpha " +
                  fmt(worst_alpha) + " (<=1e-12), " + fmt(secs) + "s");
  }

  // 10. Separated basis: eigenvalue formula vs dense diagonalization of
  //     nu12, pairwise-distinct spectrum, overlap product formula.
  {
    Timer timer;
    bool ok = true;
    double worst_match = 0.0, worst_overlap = 0.0;
    for (const auto& twos :
         {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{1, 1}}) {
      const ChainSpec spec = tu::chain(twos, 390 + twos.size() + twos[0]);
      const TwistFactorization fact =
          factorize_twist(tu::generic_twist(391), FactorizationMode::EqualRho);
      Rng rng(392);
      std::vector<Complex> zs;
      for (int k = 0; k < 3; ++k) zs.push_back(sov_safe_z(spec, rng));
      const SovReport rep = check_sov_spectrum(spec, fact, zs);
      worst_match = std::max(worst_match, rep.diag_match);
      worst_overlap = std::max(worst_overlap, rep.overlap_residual);
      ok = ok && rep.pass && rep.distinct && rep.diag_match <= 1e-8 &&
           rep.overlap_residual <= 1e-9;
    }
    const double secs = timer.seconds();
    criterion(10, "separated basis", ok,
              "match " + fmt(worst_match) + " (<=1e-8), overlap " + fmt(worst_overlap) +
                  " (<=1e-9), " + fmt(secs) + "s");
  }

  // 11. Determinism: byte-identical reports from identical config + seed,
  //     both through the library and through the installed CLI.
  {
    Timer timer;
    bool ok = true;
    std::string detail;

    const std::string config_text = std::string("rng_seed = 11\n") +
                                    "[chain]\n"
                                    "n_sites = 2\n"
                                    "spins = [\"1/2\", \"1/2\"]\n"
                                    "thetas = [[0.31, 0.0], [-0.17, 0.0]]\n"
                                    "c = [1.0, 0.0]\n"
                                    "[twist]\n"
                                    "k_tilde = [1.1, 0.2]\n"
                                    "k_plus = [0.4, -0.1]\n"
                                    "k_minus = [0.3, 0.15]\n"
                                    "k = [0.9, -0.05]\n";
    const ModelConfig config = parse_config(config_text, "acceptance.toml");
    auto render_once = [&config]() {
      RunReport report;
      report.config = config_echo(config);
      report.rng_seed = config.rng_seed;
      for (const auto& outcome : run_selected_suites(config)) {
        report.suites.push_back(outcome.result);
      }
      return render_report(report);
    };
    const std::string lib_a = render_once();
    const std::string lib_b = render_once();
    ok = ok && lib_a == lib_b;
    detail += std::string("library ") + (lib_a == lib_b ? "identical" : "DIFFERS");

#ifdef TWISTCHAIN_CLI_PATH
    const std::string cli = TWISTCHAIN_CLI_PATH;
    const std::string cfg_path = "acceptance_cfg.toml";
    {
      std::ofstream out(cfg_path, std::ios::binary);
      out << config_text;
    }
    const std::string out_a = "acceptance_run_a.json";
    const std::string out_b = "acceptance_run_b.json";
    const std::string base = cli + " check --config " + cfg_path;
    const int rc_a =
        std::system((base + " --out " + out_a + " >/dev/null 2>&1").c_str());
    const int rc_b =
        std::system((base + " --out " + out_b + " >/dev/null 2>&1").c_str());
    const bool cli_same = rc_a == 0 && rc_b == 0 && slurp(out_a) == slurp(out_b);
    ok = ok && cli_same;
    detail += std::string(", cli ") + (cli_same ? "identical" : "DIFFERS");
    std::remove(cfg_path.c_str());
    std::remove(out_a.c_str());
    std::remove(out_b.c_str());
#endif
    criterion(11, "deterministic reports", ok, detail + ", " + fmt(timer.seconds()) + "s");
  }

  std::printf("%s\n", g_all_ok ? "all acceptance criteria passed"
                               : "ACCEPTANCE FAILURES PRESENT");
  return g_all_ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
