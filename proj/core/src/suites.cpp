#include "twistchain/suites.hpp"

#include <algorithm>

#include "twistchain/modified.hpp"
#include "twistchain/sov.hpp"

namespace twistchain {

namespace {

using json = nlohmann::ordered_json;

double sample_radius(const ChainSpec& spec) {
  return 1.0 + spec.max_abs_theta() +
         std::abs(spec.c) * (0.5 * spec.total_twos() + 1.0);
}

Complex draw_z(const ChainSpec& spec, Rng& rng) {
  const double r = sample_radius(spec);
  return rng.annulus(0.25 * r, 1.25 * r);
}

/// Points pairwise separated by 1e-3 * radius (kernels stay well scaled).
std::vector<Complex> draw_distinct(const ChainSpec& spec, Rng& rng, int count) {
  const double r = sample_radius(spec);
  std::vector<Complex> zs;
  while (static_cast<int>(zs.size()) < count) {
    const Complex z = draw_z(spec, rng);
    bool clear = true;
    for (Complex w : zs) {
      if (std::abs(z - w) < 1e-3 * r) clear = false;
    }
    if (clear) zs.push_back(z);
  }
  return zs;
}

json residual_json(const Residual& r) {
  return json{{"abs", r.abs}, {"rel", r.rel}};
}

}  // namespace

SuiteOutcome run_rtt_suite(const ChainSpec& spec, Rng& rng, double tol_scale) {
  Residual rtt, yb;
  for (int trial = 0; trial < 5; ++trial) {
    const auto uv = draw_distinct(spec, rng, 2);
    rtt.join(check_rtt(spec, uv[0], uv[1]));
    const auto uvw = draw_distinct(spec, rng, 3);
    yb.join(yang_baxter_residual(uvw[0], uvw[1], uvw[2], spec.c));
  }
  SuiteOutcome out;
  out.result.name = "rtt";
  out.result.residual = rtt;
  out.result.residual.join(yb);
  out.result.pass = rtt.rel <= 1e-10 * tol_scale && yb.rel <= 1e-14 * tol_scale;
  out.details["pairs"] = 5;
  out.details["rtt"] = residual_json(rtt);
  out.details["yang_baxter"] = residual_json(yb);
  return out;
}

SuiteOutcome run_commuting_suite(const ChainSpec& spec, const Twist& twist, Rng& rng,
                                 double tol_scale) {
  const auto zs = draw_distinct(spec, rng, 5);
  const Residual res = check_commuting_family(spec, twist, zs);
  Residual sz;
  for (Complex z : zs) sz.join(check_sz_twist_relation(spec, twist, z));
  SuiteOutcome out;
  out.result.name = "commuting_family";
  out.result.residual = res;
  out.result.pass = res.rel <= 1e-10 * tol_scale && sz.rel <= 1e-10 * tol_scale;
  out.details["points"] = 5;
  out.details["commutators"] = residual_json(res);
  out.details["sz_relation"] = residual_json(sz);
  return out;
}

SuiteOutcome run_weight_actions_suite(const ChainSpec& spec,
                                      const TwistFactorization& fact, Rng& rng,
                                      double tol_scale) {
  const auto zs = draw_distinct(spec, rng, 10);
  const Residual res = check_weight_actions(spec, fact, zs);
  SuiteOutcome out;
  out.result.name = "weight_actions";
  out.result.residual = res;
  out.result.pass = res.rel <= 1e-11 * tol_scale;
  out.details["points"] = 10;
  out.details["actions"] = residual_json(res);
  return out;
}

SuiteOutcome run_null_product_suite(const ChainSpec& spec,
                                    const TwistFactorization& fact, Rng& rng,
                                    double tol_scale) {
  const int s = spec.total_twos();
  const auto points = draw_distinct(spec, rng, s + 1);
  const Complex z = points.front();
  const std::vector<Complex> us(points.begin() + 1, points.end());

  Residual identity;
  identity.join(check_null_product_identity(spec, null_twist_for(fact, 1, 2), us, z));
  identity.join(check_null_product_identity(spec, null_twist_for(fact, 2, 1), us, z));

  Residual offdiag;
  offdiag.join(check_offdiag_product_vanishes(spec, 1, 2, us, z));
  offdiag.join(check_offdiag_product_vanishes(spec, 2, 1, us, z));

  SuiteOutcome out;
  out.result.name = "null_product";
  out.result.residual = identity;
  out.result.residual.join(offdiag);
  out.result.pass =
      identity.rel <= 1e-9 * tol_scale && offdiag.rel <= 1e-10 * tol_scale;
  out.details["identity"] = residual_json(identity);
  out.details["offdiag_vanishing"] = residual_json(offdiag);
  return out;
}

SuiteOutcome run_multiple_action_suite(const ChainSpec& spec,
                                       const TwistFactorization& fact, Rng& rng,
                                       double tol_scale) {
  const OperatorFamily t_family = monodromy_family(spec);
  const OperatorFamily n_family = nu_family(spec, fact);

  struct Combo {
    ActionPattern pattern;
    int i, j, k;
  };
  const Combo combos[] = {
      {ActionPattern::SameRow, 1, 1, 2},    {ActionPattern::SameRow, 2, 2, 1},
      {ActionPattern::SameRow, 1, 2, 1},    {ActionPattern::SameRow, 2, 1, 2},
      {ActionPattern::SameColumn, 1, 2, 2}, {ActionPattern::SameColumn, 2, 1, 1},
      {ActionPattern::SameColumn, 1, 1, 2}, {ActionPattern::SameColumn, 2, 2, 1},
  };

  Residual t_res, n_res;
  for (const Combo& combo : combos) {
    const auto points = draw_distinct(spec, rng, 3);
    const Complex v = points.front();
    const std::vector<Complex> us(points.begin() + 1, points.end());
    t_res.join(check_multiple_action(t_family, combo.pattern, combo.i, combo.j,
                                     combo.k, v, us, spec.c));
    n_res.join(check_multiple_action(n_family, combo.pattern, combo.i, combo.j,
                                     combo.k, v, us, spec.c));
  }

  SuiteOutcome out;
  out.result.name = "multiple_action";
  out.result.residual = t_res;
  out.result.residual.join(n_res);
  out.result.pass = out.result.residual.rel <= 1e-10 * tol_scale;
  out.details["monodromy"] = residual_json(t_res);
  out.details["modified"] = residual_json(n_res);
  return out;
}

SuiteOutcome run_sov_suite(const ChainSpec& spec, const TwistFactorization& fact,
                           Rng& rng, double tol_scale) {
  std::vector<Complex> zs;
  for (int k = 0; k < 3; ++k) zs.push_back(sov_safe_z(spec, rng));
  const SovReport report = check_sov_spectrum(spec, fact, zs);

  const double worst =
      std::max({report.vacuum_residual, report.eigen_residual, report.inverse_residual,
                report.overlap_residual, report.diag_match});
  SuiteOutcome out;
  out.result.name = "sov";
  out.result.residual = Residual{worst, worst};
  out.result.pass = report.pass;
  if (tol_scale > 1.0 && !report.pass) {
    out.result.pass = report.distinct && worst <= 1e-8 * tol_scale &&
                      report.leading_residual <= 1e-3 * tol_scale;
  }
  out.details["vacuum"] = report.vacuum_residual;
  out.details["eigen"] = report.eigen_residual;
  out.details["inverse"] = report.inverse_residual;
  out.details["overlap"] = report.overlap_residual;
  out.details["diag_match"] = report.diag_match;
  out.details["leading"] = report.leading_residual;
  out.details["min_gap"] = report.min_gap;
  out.details["distinct"] = report.distinct;
  return out;
}

std::vector<SuiteOutcome> run_selected_suites(const ModelConfig& config,
                                              double tol_scale) {
  const ChainSpec& spec = config.chain;
  const ChecksConfig& checks = config.checks;
  const bool needs_fact = checks.weight_actions || checks.null_product ||
                          checks.multiple_action || checks.sov;

  TwistFactorization fact;
  if (needs_fact) fact = make_factorization(config);

  Rng master(config.rng_seed);
  std::vector<SuiteOutcome> outcomes;
  // Fixed child tags per suite: disabling one suite never reseeds another.
  if (checks.commuting_family) {
    Rng sub = master.child(11);
    outcomes.push_back(run_commuting_suite(spec, config.twist, sub, tol_scale));
  }
  if (checks.multiple_action) {
    Rng sub = master.child(12);
    outcomes.push_back(run_multiple_action_suite(spec, fact, sub, tol_scale));
  }
  if (checks.null_product) {
    Rng sub = master.child(13);
    outcomes.push_back(run_null_product_suite(spec, fact, sub, tol_scale));
  }
  if (checks.rtt) {
    Rng sub = master.child(14);
    outcomes.push_back(run_rtt_suite(spec, sub, tol_scale));
  }
  if (checks.sov) {
    Rng sub = master.child(15);
    outcomes.push_back(run_sov_suite(spec, fact, sub, tol_scale));
  }
  if (checks.weight_actions) {
    Rng sub = master.child(16);
    outcomes.push_back(run_weight_actions_suite(spec, fact, sub, tol_scale));
  }
  std::sort(outcomes.begin(), outcomes.end(),
            [](const SuiteOutcome& a, const SuiteOutcome& b) {
              return a.result.name < b.result.name;
            });
  return outcomes;
}

}  // namespace twistchain
