#include "twistchain/report.hpp"

#include <fstream>

namespace twistchain {

using json = nlohmann::ordered_json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

bool RunReport::all_pass() const {
  for (const SuiteResult& suite : suites) {
    if (!suite.pass) return false;
  }
  return true;
}

json report_json(const RunReport& report) {
  json out;
  out["version"] = report.version;
  out["config"] = report.config;
  json suites = json::array();
  for (const SuiteResult& suite : report.suites) {
    json entry;
    entry["name"] = suite.name;
    entry["residuals"] = {{"abs", suite.residual.abs}, {"rel", suite.residual.rel}};
    entry["pass"] = suite.pass;
    suites.push_back(entry);
  }
  out["suites"] = suites;
  out["roots"] = report.roots;
  if (report.coverage < 0) {
    out["coverage"] = nullptr;
  } else {
    out["coverage"] = report.coverage;
  }
  out["wall_ms"] = report.wall_ms;
  out["rng_seed"] = report.rng_seed;
  for (const auto& [key, value] : report.extra.items()) out[key] = value;
  return out;
}

std::string render_report(const RunReport& report) {
  return report_json(report).dump(2) + "\n";
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open report file '" + path + "' for writing");
  out << render_report(report);
}

}  // namespace twistchain
