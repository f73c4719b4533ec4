#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdom/kernel.hpp"
#include "sdom/lattice.hpp"
#include "sdom/operators.hpp"

namespace sdom {

/// Plain `key = value` file with `[section]` headers; keys are stored as
/// `section.key`. `#` and `;` start comments.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  /// `[a, b, ...]` or a bare comma list.
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

  /// Sorted `key=value` lines; independent of comments, order and spacing.
  std::string canonical() const;
  std::string hash() const;

  /// Throws InvalidInput naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
  std::string space_file;
  std::string generator = "uniform-line";
  std::size_t n = 16;
  std::uint64_t space_seed = 1;

  LatticeMode mode = LatticeMode::Lab;
  double C0 = 2.0;
  double A0 = 4.0;
  std::optional<int> k_min;
  std::optional<int> k_max;
  std::uint64_t lattice_seed = 0;

  KernelFamily family = KernelFamily::LambdaSum;
  double delta = 1.0;
  double CK = 1.0;
  int m = 2;

  std::vector<double> exponents{4.0, 4.0};
  double rho = 1.0;
  double alpha = 4.0;

  TruncMode trunc = TruncMode::Linf;
  double M_init = 1.0;
  int K_max = 12;
  double eta_min = 0.4;
  std::size_t max_nodes = 100000;

  std::string ftuple_file;
  std::string weights_file;

  int trials = 10;
  std::uint64_t trial_seed = 1;
  double slack = 64.0;
  double tolerance = 1e-9;

  std::string config_hash;
};

const std::vector<std::string>& known_config_keys();

/// Reads every known key (mode-dependent defaults for A0 and alpha) and
/// enforces the mode's constraints.
ExperimentConfig experiment_from(const Config& cfg);

}  // namespace sdom
