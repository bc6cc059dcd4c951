// Flat key=value configuration with [section] grouping. Keys are validated
// against a whitelist so typos fail loudly with field-level messages. The
// canonical serialization (sorted keys) feeds the FNV-1a config hash stamped
// into every output file.
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratsp {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error("config: " + msg) {}
};

namespace detail {
inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

class Config {
 public:
  // key -> {default value or "", doc}; every settable key must appear here.
  static const std::map<std::string, std::string>& known_keys() {
    static const std::map<std::string, std::string> keys = {
        {"model.kind", "torus"},       // torus | heisenberg
        {"model.d", "1"},
        {"model.n", "16"},
        {"model.s0", "32"},
        {"scales.mu", "0.5"},
        {"scales.nu", "2"},
        {"multiplier.theta", "1"},
        {"multiplier.beta", "2"},
        {"multiplier.eps", "0.1"},
        {"multiplier.eps_tilde", "0.01"},
        {"multiplier.smax", "3"},
        {"riesz.k", "1"},
        {"riesz.alpha", "2"},
        {"riesz.t", "1"},
        {"dispersive.alpha", "2"},
        {"dispersive.t", "1"},
        {"dispersive.beta", "2"},
        {"sparse.r1", "1"},
        {"sparse.r2", "2"},
        {"sparse.eta", "0.5"},
        {"sparse.p", "2"},
        {"weights.a", "0"},
        {"weights.p", "2"},
        {"weights.q", "2"},
        {"quant.mode", "i"},
        {"run.trials", "100"},
        {"run.seed", "12345"},
        {"run.budget_seconds", "900"},
        {"run.grids_max", "8"},
        {"run.workers", "1"},
        {"run.out", "out"},
    };
    return keys;
  }

  Config() : kv_(known_keys()) {}

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    Config c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      lineno++;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
        section = detail::trim(line.substr(1, line.size() - 2));
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
      std::string key = detail::trim(line.substr(0, eq));
      std::string value = detail::trim(line.substr(eq + 1));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(lineno) + ": key '" + key +
                          "' outside any [section]");
      c.set(section + "." + key, value);
    }
    return c;
  }

  void set(const std::string& full_key, const std::string& value) {
    if (!known_keys().count(full_key))
      throw ConfigError("unknown key '" + full_key + "'");
    if (value.empty()) throw ConfigError(full_key + ": empty value");
    kv_[full_key] = value;
  }

  const std::string& get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("unknown key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key) const {
    const std::string& v = get_string(key);
    try {
      size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      throw ConfigError(key + ": expected a real number, got '" + v + "'");
    }
  }

  long long get_int(const std::string& key) const {
    const std::string& v = get_string(key);
    try {
      size_t pos = 0;
      long long d = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
  }

  std::uint64_t get_seed(const std::string& key = "run.seed") const {
    const std::string& v = get_string(key);
    try {
      size_t pos = 0;
      std::uint64_t d = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
  }

  // Cross-field checks shared by every suite.
  void validate() const {
    double mu = get_double("scales.mu");
    double nu = get_double("scales.nu");
    if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("scales.mu: must lie in (0,1)");
    if (std::abs(nu * mu - 1.0) > 1e-12)
      throw ConfigError("scales.nu must equal 1/scales.mu (got scales.mu=" +
                        get_string("scales.mu") + ", scales.nu=" + get_string("scales.nu") + ")");
    const std::string& kind = get_string("model.kind");
    if (kind != "torus" && kind != "heisenberg")
      throw ConfigError("model.kind: expected torus or heisenberg, got '" + kind + "'");
    if (get_double("model.s0") <= 0) throw ConfigError("model.s0: must be positive");
    if (get_double("multiplier.theta") == 0) throw ConfigError("multiplier.theta: must be nonzero");
    if (get_double("multiplier.beta") < 0) throw ConfigError("multiplier.beta: must be >= 0");
    if (get_int("run.trials") < 1) throw ConfigError("run.trials: must be >= 1");
    double eta = get_double("sparse.eta");
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("sparse.eta: must lie in (0,1]");
  }

  // Model descriptor string, e.g. "torus(1,64)".
  std::string model_desc() const {
    const std::string& kind = get_string("model.kind");
    if (kind == "torus")
      return "torus(" + get_string("model.d") + "," + get_string("model.n") + ")";
    return "heisenberg(" + get_string("model.n") + ")";
  }

  // Canonical form: sorted "key=value" lines.
  std::string serialize() const {
    std::string s;
    for (const auto& [k, v] : kv_) { s += k; s += '='; s += v; s += '\n'; }
    return s;
  }

  // Single-line echo for CSV headers.
  std::string echo_line() const {
    std::string s;
    for (const auto& [k, v] : kv_) {
      if (!s.empty()) s += ' ';
      s += k; s += '='; s += v;
    }
    return s;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : serialize()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

  std::string hash_hex() const {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = hash();
    std::string s(16, '0');
    for (int i = 15; i >= 0; i--) { s[i] = digits[h & 0xF]; h >>= 4; }
    return s;
  }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace stratsp
