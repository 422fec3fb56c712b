#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twistchain/hilbert.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/types.hpp"
#include "twistchain/yangian.hpp"

namespace twistchain {

struct SolverConfig {
  int starts = 600;
  double newton_tol = 1e-12;
  int max_iter = 200;
};

struct ChecksConfig {
  bool rtt = true;
  bool commuting_family = true;
  bool weight_actions = true;
  bool null_product = true;
  bool multiple_action = true;
  bool sov = true;
};

/// Parsed model-definition file. The file format is a small TOML subset:
/// [section] headers, key = value lines, #-comments; values are integers,
/// floats, booleans, "strings" and (nested) arrays. Complex numbers are
/// always written as [re, im]. Unknown keys are rejected.
struct ModelConfig {
  ChainSpec chain;
  std::vector<std::string> spin_labels;  // the "p/q" strings, kept for the echo
  Twist twist;
  FactorizationMode fact_mode = FactorizationMode::EqualRho;
  std::optional<Complex> rho1;
  SolverConfig solver;
  ChecksConfig checks;
  std::uint64_t rng_seed = 1;
};

/// Parse a config file / in-memory text. Throws ConfigError with the field
/// name and line number on every malformed or unknown entry.
ModelConfig load_config(const std::string& path);
ModelConfig parse_config(const std::string& text, const std::string& origin);

/// Deterministic echo of the parsed config for reports.
nlohmann::ordered_json config_echo(const ModelConfig& config);

/// Factorize the configured twist; rejects diagonal twists with the
/// dedicated "strictly non-diagonal twist required" diagnostic.
TwistFactorization make_factorization(const ModelConfig& config);

/// "p/q" -> 2s (e.g. "1/2" -> 1, "1" -> 2, "3/2" -> 3).
int parse_spin_label(const std::string& label);

}  // namespace twistchain
