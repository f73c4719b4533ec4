#pragma once

// Internal: enumeration of m-tuples over the nonzero entries of a function tuple.

#include <span>
#include <vector>

#include "sdom/operators.hpp"

namespace sdom::detail {

struct SlotEntry {
  PointId y;
  double weight;  // f_j(y) * mass(y)
};

inline std::vector<std::vector<SlotEntry>> slot_entries(const MetricMeasureSpace& space,
                                                        const FunctionTuple& f) {
  std::vector<std::vector<SlotEntry>> out(f.m());
  for (int j = 0; j < f.m(); ++j)
    for (PointId y = 0; y < space.size(); ++y) {
      const double w = f[j][y] * space.mass(y);
      if (w != 0.0) out[j].push_back({y, w});
    }
  return out;
}

/// Calls fn(ys, prod_j weight_j) for every tuple drawn from the slot lists.
template <class Fn>
void for_each_tuple(const std::vector<std::vector<SlotEntry>>& slots, Fn&& fn) {
  const std::size_t m = slots.size();
  for (const auto& s : slots)
    if (s.empty()) return;
  std::vector<std::size_t> idx(m, 0);
  std::vector<PointId> ys(m);
  std::vector<double> partial(m + 1, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    ys[j] = slots[j][0].y;
    partial[j + 1] = partial[j] * slots[j][0].weight;
  }
  for (;;) {
    fn(std::span<const PointId>(ys), partial[m]);
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++idx[j] < slots[j].size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    for (std::size_t i = j; i < m; ++i) {
      ys[i] = slots[i][idx[i]].y;
      partial[i + 1] = partial[i] * slots[i][idx[i]].weight;
    }
  }
}

inline bool hits(PointId x, std::span<const PointId> ys) {
  for (PointId y : ys)
    if (y == x) return true;
  return false;
}

}  // namespace sdom::detail
