#include "veccomp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "veccomp/channel.hpp"

namespace veccomp {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Splits `key = value` lines into a map, rejecting malformed and duplicate
// entries so every config has exactly one unambiguous reading.
std::map<std::string, Entry> parse_key_values(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key before '='");
    }
    auto [it, inserted] = entries.emplace(key, Entry{value, line_no, false});
    if (!inserted) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "' (first set on line " + std::to_string(it->second.line) + ")");
    }
  }
  return entries;
}

// Typed accessors over the raw entries.  Missing required keys are collected
// and reported together; unknown keys are reported after all reads.
class Reader {
 public:
  explicit Reader(const std::string& text) : entries_(parse_key_values(text)) {}

  bool has(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    return true;
  }

  void mark_missing(const std::string& key) { missing_.push_back(key); }

  std::string get_string(const std::string& key, const std::string& fallback,
                         bool required) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) missing_.push_back(key);
      return fallback;
    }
    it->second.used = true;
    return it->second.value;
  }

  long get_int(const std::string& key, long fallback, bool required) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) missing_.push_back(key);
      return fallback;
    }
    it->second.used = true;
    return parse_int(it->second.value, key, it->second.line);
  }

  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback,
                           bool required) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) missing_.push_back(key);
      return fallback;
    }
    it->second.used = true;
    const std::string& v = it->second.value;
    errno = 0;
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE ||
        v.find('-') != std::string::npos) {
      throw ConfigError("line " + std::to_string(it->second.line) +
                        ": expected unsigned integer for '" + key + "', got '" + v + "'");
    }
    return static_cast<std::uint64_t>(parsed);
  }

  double get_double(const std::string& key, double fallback, bool required) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) missing_.push_back(key);
      return fallback;
    }
    it->second.used = true;
    const std::string& v = it->second.value;
    errno = 0;
    char* end = nullptr;
    double parsed = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
      throw ConfigError("line " + std::to_string(it->second.line) +
                        ": expected number for '" + key + "', got '" + v + "'");
    }
    return parsed;
  }

  bool get_bool(const std::string& key, bool fallback, bool required) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) missing_.push_back(key);
      return fallback;
    }
    it->second.used = true;
    const std::string& v = it->second.value;
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("line " + std::to_string(it->second.line) +
                      ": expected true or false for '" + key + "', got '" + v + "'");
  }

  std::vector<int> get_int_list(const std::string& key, bool required) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      if (required) missing_.push_back(key);
      return {};
    }
    it->second.used = true;
    std::vector<int> out;
    std::stringstream parts(it->second.value);
    std::string part;
    while (std::getline(parts, part, ',')) {
      out.push_back(static_cast<int>(parse_int(trim(part), key, it->second.line)));
    }
    if (out.empty()) {
      throw ConfigError("line " + std::to_string(it->second.line) +
                        ": expected at least one integer for '" + key + "'");
    }
    return out;
  }

  // Throws once with every missing required key, then once naming any key the
  // schema does not recognize.
  void finish() {
    if (!missing_.empty()) {
      std::string msg = "missing: ";
      for (size_t i = 0; i < missing_.size(); ++i) {
        if (i) msg += ", ";
        msg += missing_[i];
      }
      throw ConfigError(msg);
    }
    std::vector<const std::map<std::string, Entry>::value_type*> unknown;
    for (const auto& kv : entries_) {
      if (!kv.second.used) unknown.push_back(&kv);
    }
    if (!unknown.empty()) {
      std::sort(unknown.begin(), unknown.end(),
                [](auto* a, auto* b) { return a->second.line < b->second.line; });
      std::string msg;
      for (size_t i = 0; i < unknown.size(); ++i) {
        if (i) msg += "; ";
        msg += "unknown key '" + unknown[i]->first + "' (line " +
               std::to_string(unknown[i]->second.line) + ")";
      }
      throw ConfigError(msg);
    }
  }

 private:
  static long parse_int(const std::string& v, const std::string& key, int line) {
    errno = 0;
    char* end = nullptr;
    long parsed = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
      throw ConfigError("line " + std::to_string(line) + ": expected integer for '" +
                        key + "', got '" + v + "'");
    }
    return parsed;
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::string> missing_;
};

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

const std::set<std::string>& codec_names() {
  static const std::set<std::string> names = {"sdp", "exact", "pam-affine", "qam-conv",
                                              "raw-sum"};
  return names;
}

const std::set<std::string>& function_names() {
  static const std::set<std::string> names = {"sum", "product", "max", "sum-of-squares",
                                              "random"};
  return names;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!codec_names().count(codec)) {
    throw ConfigError("codec must be one of sdp, exact, pam-affine, qam-conv, raw-sum; "
                      "got '" + codec + "'");
  }
  if (K < 1) throw ConfigError("K must be >= 1, got " + std::to_string(K));
  if (L < 1) throw ConfigError("L must be >= 1, got " + std::to_string(L));
  if (trials < 1) throw ConfigError("trials must be >= 1, got " + std::to_string(trials));
  if (q_list.empty()) throw ConfigError("Q must list at least one cardinality");
  if (static_cast<int>(q_list.size()) != 1 && static_cast<int>(q_list.size()) != K) {
    throw ConfigError("Q must be a single cardinality or one per node (K=" +
                      std::to_string(K) + "), got " + std::to_string(q_list.size()) +
                      " entries");
  }
  for (int q : q_list) {
    if (q < 2) throw ConfigError("input cardinalities must be >= 2, got " +
                                 std::to_string(q));
  }
  if (n_r < 0 || n_t < 0) throw ConfigError("antenna counts must be non-negative");
  if (n_r > 0) {
    if (n_t < 1) throw ConfigError("missing: N_t");
    if (L > std::min(n_r, n_t)) {
      throw ConfigError("stream count L=" + std::to_string(L) +
                        " exceeds min{N_r, N_t}=" + std::to_string(std::min(n_r, n_t)) +
                        ": the combiner supports at most min{N_r, N_t} parallel streams");
    }
  }
  if (!(alpha_corr >= 0.0 && alpha_corr < 1.0)) {
    throw ConfigError("alpha_corr must lie in [0, 1), got " + format_double(alpha_corr));
  }
  if (!(sigma_h > 0.0)) {
    throw ConfigError("sigma_h must be positive, got " + format_double(sigma_h));
  }
  if (beamformer != "isometric" && beamformer != "gaussian") {
    throw ConfigError("beamformer must be isometric or gaussian, got '" + beamformer +
                      "'");
  }
  if (normalization != "sum-symbol-power" && normalization != "function-power") {
    throw ConfigError("normalization must be sum-symbol-power or function-power, got '" +
                      normalization + "'");
  }
  if (codec == "sdp" || codec == "exact") {
    bool named = function_names().count(function) > 0;
    if (function_file.empty() && !named) {
      throw ConfigError("function must be one of sum, product, max, sum-of-squares, "
                        "random (or set function_file), got '" + function + "'");
    }
    if (!function_file.empty() && named && function != "sum") {
      throw ConfigError("set either function or function_file, not both");
    }
    if (function == "random" && value_range < 2) {
      throw ConfigError("value_range must be >= 2 for function = random, got " +
                        std::to_string(value_range));
    }
  }
  if (codec == "qam-conv") {
    if (!kernel.empty()) {
      int expected = L + K - 1;
      if (static_cast<int>(kernel.size()) != expected) {
        throw ConfigError("kernel length " + std::to_string(kernel.size()) +
                          " inconsistent with L=" + std::to_string(L) + ", K=" +
                          std::to_string(K) + " (need L + K - 1 = " +
                          std::to_string(expected) + ")");
      }
      for (int a : kernel) {
        if (a < 0 || a >= q_list.front()) {
          throw ConfigError("kernel entries must lie in [0, Q), got " +
                            std::to_string(a));
        }
      }
    }
    for (size_t i = 1; i < q_list.size(); ++i) {
      if (q_list[i] != q_list.front()) {
        throw ConfigError("qam-conv requires a common cardinality Q across nodes");
      }
    }
  }
  if (codec == "pam-affine") {
    for (size_t i = 1; i < q_list.size(); ++i) {
      if (q_list[i] != q_list.front()) {
        throw ConfigError("pam-affine requires a common input cardinality Q across "
                          "nodes (coefficient alphabets may differ)");
      }
    }
  }
  if (codec == "pam-affine" && !coeff_cardinalities.empty()) {
    if (static_cast<int>(coeff_cardinalities.size()) != 1 &&
        static_cast<int>(coeff_cardinalities.size()) != K) {
      throw ConfigError("coeff_cardinalities must be a single value or one per node");
    }
    for (int q : coeff_cardinalities) {
      if (q < 2) {
        throw ConfigError("coefficient cardinalities must be >= 2, got " +
                          std::to_string(q));
      }
    }
  }
  if (baseline && codec == "raw-sum") {
    throw ConfigError("baseline = true requires a codec family (the orthogonal "
                      "baseline decodes per-node inputs); raw-sum has none");
  }
}

ScenarioConfig parse_scenario_config(const std::string& text) {
  Reader reader(text);
  ScenarioConfig cfg;
  cfg.codec = reader.get_string("codec", "", true);
  cfg.K = static_cast<int>(reader.get_int("K", 0, true));
  cfg.L = static_cast<int>(reader.get_int("L", 0, true));
  cfg.q_list = reader.get_int_list("Q", true);
  cfg.snr_db = reader.get_double("snr_db", 0.0, true);
  cfg.trials = reader.get_int("trials", 0, true);
  cfg.seed = reader.get_uint64("seed", 0, true);
  cfg.n_r = static_cast<int>(reader.get_int("N_r", 0, false));
  bool mimo = cfg.n_r > 0;
  if (mimo && !reader.has("N_t")) reader.mark_missing("N_t");
  cfg.n_t = static_cast<int>(reader.get_int("N_t", 0, false));
  cfg.alpha_corr = reader.get_double("alpha_corr", 0.0, false);
  cfg.sigma_h = reader.get_double("sigma_h", 1.0, false);
  cfg.beamformer = reader.get_string("beamformer", "isometric", false);
  cfg.normalization = reader.get_string("normalization", "sum-symbol-power", false);
  cfg.function = reader.get_string("function", "sum", false);
  cfg.function_file = reader.get_string("function_file", "", false);
  cfg.value_range = static_cast<int>(reader.get_int("value_range", 5, false));
  if (reader.has("kernel")) cfg.kernel = reader.get_int_list("kernel", false);
  if (reader.has("coeff_cardinalities")) {
    cfg.coeff_cardinalities = reader.get_int_list("coeff_cardinalities", false);
  }
  cfg.baseline = reader.get_bool("baseline", false, false);
  reader.finish();
  // Broadcast a single cardinality across nodes so equality and downstream
  // code see the expanded form.
  if (cfg.q_list.size() == 1 && cfg.K > 1) {
    cfg.q_list.assign(static_cast<size_t>(cfg.K), cfg.q_list.front());
  }
  if (cfg.coeff_cardinalities.size() == 1 && cfg.K > 1) {
    cfg.coeff_cardinalities.assign(static_cast<size_t>(cfg.K),
                                   cfg.coeff_cardinalities.front());
  }
  cfg.validate();
  return cfg;
}

std::string serialize_scenario_config(const ScenarioConfig& config) {
  std::string out;
  out += "codec = " + config.codec + "\n";
  out += "K = " + std::to_string(config.K) + "\n";
  out += "L = " + std::to_string(config.L) + "\n";
  out += "Q = " + join_ints(config.q_list) + "\n";
  out += "snr_db = " + format_double(config.snr_db) + "\n";
  out += "trials = " + std::to_string(config.trials) + "\n";
  out += "seed = " + std::to_string(config.seed) + "\n";
  if (config.n_r > 0) {
    out += "N_r = " + std::to_string(config.n_r) + "\n";
    out += "N_t = " + std::to_string(config.n_t) + "\n";
  }
  out += "alpha_corr = " + format_double(config.alpha_corr) + "\n";
  out += "sigma_h = " + format_double(config.sigma_h) + "\n";
  out += "beamformer = " + config.beamformer + "\n";
  out += "normalization = " + config.normalization + "\n";
  if (!config.function_file.empty()) {
    out += "function_file = " + config.function_file + "\n";
  } else {
    out += "function = " + config.function + "\n";
  }
  if (config.function == "random" && config.function_file.empty()) {
    out += "value_range = " + std::to_string(config.value_range) + "\n";
  }
  if (!config.kernel.empty()) out += "kernel = " + join_ints(config.kernel) + "\n";
  if (!config.coeff_cardinalities.empty()) {
    out += "coeff_cardinalities = " + join_ints(config.coeff_cardinalities) + "\n";
  }
  out += std::string("baseline = ") + (config.baseline ? "true" : "false") + "\n";
  return out;
}

BoundInputs parse_bound_config(const std::string& text) {
  Reader reader(text);
  BoundInputs inputs;
  inputs.L = static_cast<int>(reader.get_int("L", 0, true));
  inputs.K = static_cast<int>(reader.get_int("K", 0, true));
  inputs.epsilon = reader.get_double("epsilon", 0.0, true);
  inputs.delta = reader.get_double("delta", 0.0, true);
  inputs.gamma1 = reader.get_double("gamma1", static_cast<double>(inputs.K), false);
  inputs.gamma2 = reader.get_double("gamma2", static_cast<double>(inputs.K), false);
  inputs.sigma_z = reader.get_double("sigma_z", 1.0, false);
  inputs.c0 = reader.get_double("c0", 2.0, false);
  reader.finish();
  try {
    inputs.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  return inputs;
}

std::string serialize_bound_config(const BoundInputs& inputs) {
  std::string out;
  out += "L = " + std::to_string(inputs.L) + "\n";
  out += "K = " + std::to_string(inputs.K) + "\n";
  out += "epsilon = " + format_double(inputs.epsilon) + "\n";
  out += "delta = " + format_double(inputs.delta) + "\n";
  out += "gamma1 = " + format_double(inputs.gamma1) + "\n";
  out += "gamma2 = " + format_double(inputs.gamma2) + "\n";
  out += "sigma_z = " + format_double(inputs.sigma_z) + "\n";
  out += "c0 = " + format_double(inputs.c0) + "\n";
  return out;
}

EigenCheckConfig parse_eigen_check_config(const std::string& text) {
  Reader reader(text);
  EigenCheckConfig cfg;
  cfg.n_r = static_cast<int>(reader.get_int("N_r", 0, true));
  cfg.n_t = static_cast<int>(reader.get_int("N_t", 0, true));
  cfg.sigma = reader.get_double("sigma", 1.0, false);
  cfg.trials = static_cast<int>(reader.get_int("trials", 200, false));
  cfg.seed = reader.get_uint64("seed", 1, false);
  reader.finish();
  if (cfg.n_r < cfg.n_t || cfg.n_t < 1) {
    throw ConfigError("eigen check requires N_r >= N_t >= 1, got N_r=" +
                      std::to_string(cfg.n_r) + ", N_t=" + std::to_string(cfg.n_t));
  }
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(cfg.sigma > 0.0)) throw ConfigError("sigma must be positive");
  return cfg;
}

TailCheckConfig parse_tail_check_config(const std::string& text) {
  Reader reader(text);
  TailCheckConfig cfg;
  cfg.scenario.K = static_cast<int>(reader.get_int("K", 0, true));
  cfg.scenario.n_r = static_cast<int>(reader.get_int("N_r", 0, true));
  cfg.scenario.n_t = static_cast<int>(reader.get_int("N_t", 0, true));
  cfg.scenario.ell = static_cast<int>(reader.get_int("L", 0, true));
  cfg.epsilon = reader.get_double("epsilon", 0.0, true);
  cfg.scenario.sigma_h = reader.get_double("sigma_h", 1.0, false);
  cfg.scenario.sigma_z = reader.get_double("sigma_z", 1.0, false);
  cfg.scenario.corr = reader.get_double("alpha_corr", 0.0, false);
  std::string mode = reader.get_string("beamformer", "isometric", false);
  cfg.scenario.seed = reader.get_uint64("seed", 1, false);
  cfg.trials = static_cast<int>(reader.get_int("trials", 500, false));
  reader.finish();
  try {
    cfg.scenario.mode = beamformer_mode_from_string(mode);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  if (cfg.scenario.K < 1 || cfg.scenario.n_r < 1 || cfg.scenario.n_t < 1 ||
      cfg.scenario.ell < 1) {
    throw ConfigError("K, N_r, N_t, L must all be >= 1");
  }
  if (cfg.scenario.ell > std::min(cfg.scenario.n_r, cfg.scenario.n_t)) {
    throw ConfigError("stream count L=" + std::to_string(cfg.scenario.ell) +
                      " exceeds min{N_r, N_t}=" +
                      std::to_string(std::min(cfg.scenario.n_r, cfg.scenario.n_t)) +
                      ": the combiner supports at most min{N_r, N_t} parallel streams");
  }
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.trials < 100) throw ConfigError("tail check needs trials >= 100");
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace veccomp
