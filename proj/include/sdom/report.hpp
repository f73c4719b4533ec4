#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace sdom {

/// One failed instance of a checked inequality or structural property.
struct Violation {
  std::string kind;
  std::string detail;
  std::vector<std::size_t> ids;  // witness points or cells, meaning depends on kind
  double radius = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  double bound = 0.0;
};

/// Result of an exhaustive (or sampled) validation pass. Violations are data.
struct ValidationReport {
  std::string subject;
  std::vector<Violation> violations;
  std::vector<std::string> notes;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  bool vacuous = false;
  double worst_ratio = 0.0;
  std::vector<std::size_t> worst_witness;

  bool ok() const { return violations.empty(); }

  void add(Violation v) { violations.push_back(std::move(v)); }

  bool has_kind(const std::string& kind) const {
    for (const auto& v : violations)
      if (v.kind == kind) return true;
    return false;
  }

  std::string summary() const;
};

}  // namespace sdom
