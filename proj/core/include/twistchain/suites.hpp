#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "twistchain/config.hpp"
#include "twistchain/report.hpp"
#include "twistchain/rng.hpp"

namespace twistchain {

struct SuiteOutcome {
  SuiteResult result;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

/// Each suite draws its spectral samples from the passed rng and scales its
/// pass thresholds by tol_scale (1.0 = the published gates).
SuiteOutcome run_rtt_suite(const ChainSpec& spec, Rng& rng, double tol_scale = 1.0);
SuiteOutcome run_commuting_suite(const ChainSpec& spec, const Twist& twist, Rng& rng,
                                 double tol_scale = 1.0);
SuiteOutcome run_weight_actions_suite(const ChainSpec& spec,
                                      const TwistFactorization& fact, Rng& rng,
                                      double tol_scale = 1.0);
SuiteOutcome run_null_product_suite(const ChainSpec& spec,
                                    const TwistFactorization& fact, Rng& rng,
                                    double tol_scale = 1.0);
SuiteOutcome run_multiple_action_suite(const ChainSpec& spec,
                                       const TwistFactorization& fact, Rng& rng,
                                       double tol_scale = 1.0);
SuiteOutcome run_sov_suite(const ChainSpec& spec, const TwistFactorization& fact,
                           Rng& rng, double tol_scale = 1.0);

/// Run the suites enabled in config.checks, in name order, each on its own
/// child stream of rng_seed so toggling one suite never reshuffles another.
std::vector<SuiteOutcome> run_selected_suites(const ModelConfig& config,
                                              double tol_scale = 1.0);

}  // namespace twistchain
