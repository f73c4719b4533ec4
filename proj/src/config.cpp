#include "sdom/config.hpp"

#include <algorithm>
#include <sstream>

#include "sdom/generators.hpp"
#include "sdom/io.hpp"

namespace sdom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidInput("config line " + std::to_string(no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("config line " + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidInput("config line " + std::to_string(no) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.has(full)) throw InvalidInput("config line " + std::to_string(no) + ": duplicate key " + full);
    cfg.values_[full] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) { return parse(io::read_file(path)); }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  try {
    return io::parse_double(values_.at(key));
  } catch (const InvalidInput&) {
    throw InvalidInput("config key " + key + ": not a number");
  }
}

long Config::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = values_.at(key);
  std::size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw InvalidInput("config key " + key + ": not an integer");
  return out;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = values_.at(key);
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidInput("config key " + key + ": not an unsigned integer");
  return std::stoull(v);
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::string v = values_.at(key);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw InvalidInput("config key " + key + ": unterminated list");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<double> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(io::parse_double(trim(item)));
    } catch (const InvalidInput&) {
      throw InvalidInput("config key " + key + ": bad list entry '" + trim(item) + "'");
    }
  }
  if (out.empty()) throw InvalidInput("config key " + key + ": empty list");
  return out;
}

std::string Config::canonical() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + "=" + v + "\n";
  return s;
}

std::string Config::hash() const { return io::fnv1a_hex(canonical()); }

void Config::require_known(const std::vector<std::string>& known) const {
  for (const auto& [k, v] : values_)
    if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidInput("unknown config key '" + k + "'");
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys{
      "space.file",       "space.generator",     "space.n",           "space.seed",        "lattice.mode",
      "lattice.C0",       "lattice.A0",          "lattice.k_min",     "lattice.k_max",     "lattice.seed",
      "kernel.family",    "kernel.delta",        "kernel.CK",         "kernel.m",          "exponents",
      "rho",              "alpha",               "domination.trunc",  "domination.M_init", "domination.K_max",
      "domination.eta_min", "domination.max_nodes", "domination.ftuple", "weights.file",     "trials.count",
      "trials.seed",      "verify.slack",        "verify.tolerance"};
  return keys;
}

ExperimentConfig experiment_from(const Config& cfg) {
  cfg.require_known(known_config_keys());
  ExperimentConfig e;
  e.space_file = cfg.get("space.file", "");
  e.generator = cfg.get("space.generator", e.generator);
  const long n = cfg.get_int("space.n", static_cast<long>(e.n));
  if (n < 1) throw InvalidInput("space.n must be positive");
  e.n = static_cast<std::size_t>(n);
  e.space_seed = cfg.get_u64("space.seed", e.space_seed);

  e.mode = parse_lattice_mode(cfg.get("lattice.mode", "lab"));
  const bool strict = e.mode == LatticeMode::Strict;
  e.C0 = cfg.get_double("lattice.C0", e.C0);
  e.A0 = cfg.get_double("lattice.A0", strict ? 5000.0 * e.C0 + 1.0 : 4.0);
  if (cfg.has("lattice.k_min")) e.k_min = static_cast<int>(cfg.get_int("lattice.k_min", 0));
  if (cfg.has("lattice.k_max")) e.k_max = static_cast<int>(cfg.get_int("lattice.k_max", 0));
  e.lattice_seed = cfg.get_u64("lattice.seed", e.lattice_seed);

  e.family = parse_kernel_family(cfg.get("kernel.family", "lambda-sum"));
  e.delta = cfg.get_double("kernel.delta", e.delta);
  e.CK = cfg.get_double("kernel.CK", e.CK);
  e.m = static_cast<int>(cfg.get_int("kernel.m", e.m));
  if (e.m < 1) throw InvalidInput("kernel.m must be positive");

  e.exponents = cfg.get_list("exponents", std::vector<double>(e.m, 2.0 * e.m));
  e.rho = cfg.get_double("rho", e.rho);
  e.alpha = cfg.get_double("alpha", strict ? 200.0 : 4.0);

  e.trunc = parse_trunc_mode(cfg.get("domination.trunc", "linf"));
  e.M_init = cfg.get_double("domination.M_init", e.M_init);
  e.K_max = static_cast<int>(cfg.get_int("domination.K_max", e.K_max));
  e.eta_min = cfg.get_double("domination.eta_min", strict ? 0.5 : e.eta_min);
  e.max_nodes = static_cast<std::size_t>(cfg.get_u64("domination.max_nodes", e.max_nodes));
  e.ftuple_file = cfg.get("domination.ftuple", "");
  e.weights_file = cfg.get("weights.file", "");

  e.trials = static_cast<int>(cfg.get_int("trials.count", e.trials));
  e.trial_seed = cfg.get_u64("trials.seed", e.trial_seed);
  e.slack = cfg.get_double("verify.slack", e.slack);
  e.tolerance = cfg.get_double("verify.tolerance", e.tolerance);

  if (!(e.C0 > 1.0)) throw InvalidInput("lattice.C0 must exceed 1");
  if (strict && !(e.A0 > 5000.0 * e.C0)) throw InvalidInput("strict mode needs lattice.A0 > 5000 C0");
  if (!(e.A0 > 1.0)) throw InvalidInput("lattice.A0 must exceed 1");
  if (strict && !(e.alpha >= 200.0)) throw InvalidInput("strict mode needs alpha >= 200");
  if (!(e.alpha >= 1.0)) throw InvalidInput("alpha must be at least 1");
  if (!(e.rho >= 1.0)) throw InvalidInput("rho must be at least 1");
  if (static_cast<int>(e.exponents.size()) != e.m)
    throw InvalidInput("exponents has " + std::to_string(e.exponents.size()) + " entries, kernel.m is " +
                       std::to_string(e.m));
  if (e.trials < 0) throw InvalidInput("trials.count must be nonnegative");
  if (!(e.eta_min > 0.0 && e.eta_min <= 1.0)) throw InvalidInput("domination.eta_min must be in (0, 1]");
  if (e.space_file.empty() &&
      std::find(gen::generator_names().begin(), gen::generator_names().end(), e.generator) == gen::generator_names().end())
    throw InvalidInput("unknown generator '" + e.generator + "'");
  e.config_hash = cfg.hash();
  return e;
}

}  // namespace sdom
