#include "twistchain/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace twistchain {

namespace {

struct TomlValue {
  enum class Kind { Number, Bool, String, Array } kind = Kind::Number;
  double num = 0.0;
  bool flag = false;
  std::string str;       // string payload
  std::string raw;       // raw numeric token (for exact u64 parsing)
  bool is_int = false;
  std::vector<TomlValue> items;
  int line = 0;
};

struct Parser {
  std::string origin;

  [[noreturn]] void fail(int line, const std::string& what) const {
    std::ostringstream os;
    os << origin << ":" << line << ": " << what;
    throw ConfigError(os.str());
  }

  static void skip_ws(const std::string& s, size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  TomlValue parse_value(const std::string& s, size_t& pos, int line) const {
    skip_ws(s, pos);
    if (pos >= s.size()) fail(line, "missing value");
    TomlValue v;
    v.line = line;
    const char ch = s[pos];
    if (ch == '[') {
      v.kind = TomlValue::Kind::Array;
      ++pos;
      skip_ws(s, pos);
      if (pos < s.size() && s[pos] == ']') {
        ++pos;
        return v;
      }
      while (true) {
        v.items.push_back(parse_value(s, pos, line));
        skip_ws(s, pos);
        if (pos >= s.size()) fail(line, "unterminated array");
        if (s[pos] == ',') {
          ++pos;
          skip_ws(s, pos);
          if (pos < s.size() && s[pos] == ']') {  // trailing comma
            ++pos;
            return v;
          }
          continue;
        }
        if (s[pos] == ']') {
          ++pos;
          return v;
        }
        fail(line, "expected ',' or ']' in array");
      }
    }
    if (ch == '"') {
      v.kind = TomlValue::Kind::String;
      ++pos;
      while (pos < s.size() && s[pos] != '"') v.str.push_back(s[pos++]);
      if (pos >= s.size()) fail(line, "unterminated string");
      ++pos;
      return v;
    }
    if (s.compare(pos, 4, "true") == 0) {
      v.kind = TomlValue::Kind::Bool;
      v.flag = true;
      pos += 4;
      return v;
    }
    if (s.compare(pos, 5, "false") == 0) {
      v.kind = TomlValue::Kind::Bool;
      v.flag = false;
      pos += 5;
      return v;
    }
    // number
    size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '+' || s[pos] == '-' || s[pos] == '.' ||
                              s[pos] == 'e' || s[pos] == 'E' || s[pos] == '_')) {
      ++pos;
    }
    std::string token = s.substr(start, pos - start);
    token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
    if (token.empty()) fail(line, "malformed value near '" + s.substr(start, 8) + "'");
    char* end = nullptr;
    v.num = std::strtod(token.c_str(), &end);
    if (end == nullptr || *end != '\0') fail(line, "malformed number '" + token + "'");
    v.raw = token;
    v.is_int = token.find_first_of(".eE") == std::string::npos;
    return v;
  }
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Entry {
  TomlValue value;
  int line = 0;
};

using EntryMap = std::map<std::string, Entry>;

Complex as_complex(const Parser& p, const Entry& e, const std::string& field) {
  const TomlValue& v = e.value;
  if (v.kind != TomlValue::Kind::Array || v.items.size() != 2 ||
      v.items[0].kind != TomlValue::Kind::Number ||
      v.items[1].kind != TomlValue::Kind::Number) {
    p.fail(e.line, field + ": expected a complex number as [re, im]");
  }
  return Complex(v.items[0].num, v.items[1].num);
}

long long as_int(const Parser& p, const Entry& e, const std::string& field) {
  if (e.value.kind != TomlValue::Kind::Number || !e.value.is_int) {
    p.fail(e.line, field + ": expected an integer");
  }
  return static_cast<long long>(e.value.num);
}

double as_float(const Parser& p, const Entry& e, const std::string& field) {
  if (e.value.kind != TomlValue::Kind::Number) {
    p.fail(e.line, field + ": expected a number");
  }
  return e.value.num;
}

bool as_bool(const Parser& p, const Entry& e, const std::string& field) {
  if (e.value.kind != TomlValue::Kind::Bool) {
    p.fail(e.line, field + ": expected true or false");
  }
  return e.value.flag;
}

std::string as_string(const Parser& p, const Entry& e, const std::string& field) {
  if (e.value.kind != TomlValue::Kind::String) {
    p.fail(e.line, field + ": expected a string");
  }
  return e.value.str;
}

}  // namespace

int parse_spin_label(const std::string& label) {
  const auto bad = [&] {
    throw ConfigError("invalid spin label '" + label +
                      "' (expected a positive integer or half-integer like \"1/2\")");
  };
  size_t slash = label.find('/');
  std::string num = trim(slash == std::string::npos ? label : label.substr(0, slash));
  std::string den = slash == std::string::npos ? "1" : trim(label.substr(slash + 1));
  if (num.empty() || den.empty()) bad();
  for (char ch : num)
    if (!std::isdigit(static_cast<unsigned char>(ch))) bad();
  for (char ch : den)
    if (!std::isdigit(static_cast<unsigned char>(ch))) bad();
  long p = std::strtol(num.c_str(), nullptr, 10);
  long q = std::strtol(den.c_str(), nullptr, 10);
  if (p <= 0 || (q != 1 && q != 2)) bad();
  if (q == 2 && p % 2 == 0) bad();  // "2/2" etc.: write it in lowest terms
  return q == 1 ? static_cast<int>(2 * p) : static_cast<int>(p);
}

ModelConfig parse_config(const std::string& text, const std::string& origin) {
  Parser parser{origin};
  std::map<std::string, EntryMap> sections;  // "" is the top level

  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') parser.fail(line_no, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) parser.fail(line_no, "empty section name");
      continue;
    }
    size_t eq = body.find('=');
    if (eq == std::string::npos) parser.fail(line_no, "expected key = value");
    std::string key = trim(body.substr(0, eq));
    if (key.empty()) parser.fail(line_no, "missing key before '='");
    size_t pos = eq + 1;
    TomlValue value = parser.parse_value(body, pos, line_no);
    Parser::skip_ws(body, pos);
    if (pos != body.size()) parser.fail(line_no, "trailing characters after value");
    std::string full = section.empty() ? key : section + "." + key;
    auto [it, inserted] = sections[section].emplace(key, Entry{value, line_no});
    if (!inserted) parser.fail(line_no, "duplicate key '" + full + "'");
  }

  static const std::map<std::string, std::set<std::string>> known = {
      {"", {"rng_seed"}},
      {"chain", {"n_sites", "spins", "thetas", "c"}},
      {"twist", {"k_tilde", "k_plus", "k_minus", "k"}},
      {"factorization", {"mode", "rho1"}},
      {"solver", {"starts", "newton_tol", "max_iter"}},
      {"checks",
       {"rtt", "commuting_family", "weight_actions", "null_product",
        "multiple_action", "sov"}},
  };
  for (const auto& [sec, entries] : sections) {
    auto it = known.find(sec);
    if (it == known.end()) {
      parser.fail(entries.begin()->second.line, "unknown section [" + sec + "]");
    }
    for (const auto& [key, entry] : entries) {
      if (!it->second.count(key)) {
        std::string full = sec.empty() ? key : sec + "." + key;
        parser.fail(entry.line, "unknown key '" + full + "'");
      }
    }
  }

  const auto need = [&](const std::string& sec, const std::string& key) -> const Entry& {
    auto sit = sections.find(sec);
    std::string full = sec.empty() ? key : sec + "." + key;
    if (sit == sections.end() || !sit->second.count(key)) {
      throw ConfigError(origin + ": missing required key '" + full + "'");
    }
    return sit->second.at(key);
  };
  const auto maybe = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto sit = sections.find(sec);
    if (sit == sections.end()) return nullptr;
    auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
  };

  ModelConfig config;

  long long n_sites = as_int(parser, need("chain", "n_sites"), "chain.n_sites");
  if (n_sites < 1) parser.fail(need("chain", "n_sites").line, "chain.n_sites: must be >= 1");

  const Entry& spins = need("chain", "spins");
  if (spins.value.kind != TomlValue::Kind::Array) {
    parser.fail(spins.line, "chain.spins: expected an array of spin labels");
  }
  for (const TomlValue& item : spins.value.items) {
    if (item.kind != TomlValue::Kind::String) {
      parser.fail(spins.line, "chain.spins: expected an array of spin labels");
    }
    config.spin_labels.push_back(item.str);
    try {
      config.chain.twos.push_back(parse_spin_label(item.str));
    } catch (const ConfigError& err) {
      parser.fail(spins.line, std::string("chain.spins: ") + err.what());
    }
  }
  if (static_cast<long long>(config.chain.twos.size()) != n_sites) {
    parser.fail(spins.line, "chain.spins: expected " + std::to_string(n_sites) +
                                " entries to match chain.n_sites");
  }

  const Entry& thetas = need("chain", "thetas");
  if (thetas.value.kind != TomlValue::Kind::Array) {
    parser.fail(thetas.line, "chain.thetas: expected an array of [re, im] pairs");
  }
  for (size_t i = 0; i < thetas.value.items.size(); ++i) {
    Entry item{thetas.value.items[i], thetas.line};
    config.chain.thetas.push_back(
        as_complex(parser, item, "chain.thetas[" + std::to_string(i) + "]"));
  }
  if (static_cast<long long>(config.chain.thetas.size()) != n_sites) {
    parser.fail(thetas.line, "chain.thetas: expected " + std::to_string(n_sites) +
                                 " entries to match chain.n_sites");
  }

  config.chain.c = as_complex(parser, need("chain", "c"), "chain.c");
  if (std::abs(config.chain.c) < 1e-14) {
    parser.fail(need("chain", "c").line, "chain.c: must be nonzero");
  }

  config.twist.k_tilde = as_complex(parser, need("twist", "k_tilde"), "twist.k_tilde");
  config.twist.k_plus = as_complex(parser, need("twist", "k_plus"), "twist.k_plus");
  config.twist.k_minus = as_complex(parser, need("twist", "k_minus"), "twist.k_minus");
  config.twist.k = as_complex(parser, need("twist", "k"), "twist.k");

  if (const Entry* mode = maybe("factorization", "mode")) {
    std::string name = as_string(parser, *mode, "factorization.mode");
    if (name == "equal_rho") {
      config.fact_mode = FactorizationMode::EqualRho;
    } else if (name == "custom") {
      config.fact_mode = FactorizationMode::Custom;
    } else {
      parser.fail(mode->line,
                  "factorization.mode: expected \"equal_rho\" or \"custom\"");
    }
  }
  if (const Entry* rho1 = maybe("factorization", "rho1")) {
    if (config.fact_mode != FactorizationMode::Custom) {
      parser.fail(rho1->line,
                  "factorization.rho1: requires factorization.mode = \"custom\"");
    }
    config.rho1 = as_complex(parser, *rho1, "factorization.rho1");
  } else if (config.fact_mode == FactorizationMode::Custom) {
    throw ConfigError(origin +
                      ": factorization.mode = \"custom\" requires factorization.rho1");
  }

  if (const Entry* starts = maybe("solver", "starts")) {
    long long n = as_int(parser, *starts, "solver.starts");
    if (n < 1) parser.fail(starts->line, "solver.starts: must be >= 1");
    config.solver.starts = static_cast<int>(n);
  }
  if (const Entry* tol = maybe("solver", "newton_tol")) {
    double t = as_float(parser, *tol, "solver.newton_tol");
    if (!(t > 0)) parser.fail(tol->line, "solver.newton_tol: must be > 0");
    config.solver.newton_tol = t;
  }
  if (const Entry* iters = maybe("solver", "max_iter")) {
    long long n = as_int(parser, *iters, "solver.max_iter");
    if (n < 1) parser.fail(iters->line, "solver.max_iter: must be >= 1");
    config.solver.max_iter = static_cast<int>(n);
  }

  const auto toggle = [&](const char* key, bool& slot) {
    if (const Entry* e = maybe("checks", key)) {
      slot = as_bool(parser, *e, std::string("checks.") + key);
    }
  };
  toggle("rtt", config.checks.rtt);
  toggle("commuting_family", config.checks.commuting_family);
  toggle("weight_actions", config.checks.weight_actions);
  toggle("null_product", config.checks.null_product);
  toggle("multiple_action", config.checks.multiple_action);
  toggle("sov", config.checks.sov);

  if (const Entry* seed = maybe("", "rng_seed")) {
    if (seed->value.kind != TomlValue::Kind::Number || !seed->value.is_int ||
        seed->value.raw.find('-') != std::string::npos) {
      parser.fail(seed->line, "rng_seed: expected a non-negative integer");
    }
    config.rng_seed = std::strtoull(seed->value.raw.c_str(), nullptr, 10);
  }

  return config;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

nlohmann::ordered_json config_echo(const ModelConfig& config) {
  using json = nlohmann::ordered_json;
  const auto cplx = [](Complex z) { return json::array({z.real(), z.imag()}); };

  json chain;
  chain["n_sites"] = config.chain.n_sites();
  chain["spins"] = config.spin_labels;
  json thetas = json::array();
  for (Complex theta : config.chain.thetas) thetas.push_back(cplx(theta));
  chain["thetas"] = thetas;
  chain["c"] = cplx(config.chain.c);

  json twist;
  twist["k_tilde"] = cplx(config.twist.k_tilde);
  twist["k_plus"] = cplx(config.twist.k_plus);
  twist["k_minus"] = cplx(config.twist.k_minus);
  twist["k"] = cplx(config.twist.k);

  json fact;
  fact["mode"] =
      config.fact_mode == FactorizationMode::EqualRho ? "equal_rho" : "custom";
  if (config.rho1) fact["rho1"] = cplx(*config.rho1);

  json solver;
  solver["starts"] = config.solver.starts;
  solver["newton_tol"] = config.solver.newton_tol;
  solver["max_iter"] = config.solver.max_iter;

  json checks;
  checks["rtt"] = config.checks.rtt;
  checks["commuting_family"] = config.checks.commuting_family;
  checks["weight_actions"] = config.checks.weight_actions;
  checks["null_product"] = config.checks.null_product;
  checks["multiple_action"] = config.checks.multiple_action;
  checks["sov"] = config.checks.sov;

  json echo;
  echo["chain"] = chain;
  echo["twist"] = twist;
  echo["factorization"] = fact;
  echo["solver"] = solver;
  echo["checks"] = checks;
  echo["rng_seed"] = config.rng_seed;
  return echo;
}

TwistFactorization make_factorization(const ModelConfig& config) {
  if (config.twist.diagonal()) {
    throw ConfigError("strictly non-diagonal twist required");
  }
  return factorize_twist(config.twist, config.fact_mode, config.rho1);
}

}  // namespace twistchain
