#pragma once

// Internal: dense cache of kernel values K(x, y_1, .., y_m) for one space.

#include <cstdint>
#include <span>
#include <vector>

#include "sdom/kernel.hpp"

namespace sdom::detail {

class KernelTable {
 public:
  static constexpr std::uint64_t kMaxEntries = 1ull << 24;

  KernelTable(const Kernel& kernel, const MetricMeasureSpace& space) : kernel_(kernel), space_(space) {
    const std::size_t n = space.size();
    std::uint64_t total = n;
    for (int j = 0; j < kernel.m() && total <= kMaxEntries; ++j) total *= n;
    if (total > kMaxEntries) return;
    values_.assign(total, 0.0);
    std::vector<PointId> ys(kernel.m(), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t r = idx;
      for (int j = kernel.m() - 1; j >= 0; --j) {
        ys[j] = r % n;
        r /= n;
      }
      const PointId x = r;
      bool hit = false;
      for (PointId y : ys) hit = hit || y == x;
      if (!hit) values_[idx] = kernel(space, x, ys);
    }
  }

  double operator()(PointId x, std::span<const PointId> ys) const {
    if (values_.empty()) return kernel_(space_, x, ys);
    std::uint64_t idx = x;
    for (PointId y : ys) idx = idx * space_.size() + y;
    return values_[idx];
  }

 private:
  const Kernel& kernel_;
  const MetricMeasureSpace& space_;
  std::vector<double> values_;
};

}  // namespace sdom::detail
