#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twistchain/types.hpp"

namespace twistchain {

nlohmann::ordered_json complex_json(Complex z);

struct SuiteResult {
  std::string name;
  Residual residual;
  bool pass = false;
};

/// Machine-readable run summary. Serialization is fully deterministic:
/// key order is fixed, wall_ms stays 0.0 unless timing was requested, and
/// all payloads derive from the config + seed alone.
struct RunReport {
  std::string version = "twistchain 0.1.0";
  nlohmann::ordered_json config;
  std::vector<SuiteResult> suites;
  nlohmann::ordered_json roots = nlohmann::ordered_json::array();
  double coverage = -1.0;  // negative -> serialized as null
  double wall_ms = 0.0;
  std::uint64_t rng_seed = 1;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool all_pass() const;
};

nlohmann::ordered_json report_json(const RunReport& report);
std::string render_report(const RunReport& report);
void write_report(const RunReport& report, const std::string& path);

}  // namespace twistchain
