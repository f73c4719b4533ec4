#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sdom/operators.hpp"
#include "sdom/weights.hpp"

namespace sdom::gen {

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Points 0..n-1 on the line, unit masses.
MetricMeasureSpace uniform_line(std::size_t n);
/// Points 0..n-1 on the line, mass 2^{-i} at i.
MetricMeasureSpace geometric_mass_line(std::size_t n);
/// First n points of the square grid with side ceil(sqrt n), unit masses.
MetricMeasureSpace planar_grid(std::size_t n);
/// n points uniform in [0, 10]^2 with masses uniform in [0.5, 1.5].
MetricMeasureSpace random_cloud(std::size_t n, std::uint64_t seed);
/// Points sum_k 2 b_k 3^k for the binary digits b of i = 0..n-1 (a middle-thirds
/// Cantor set), with the biased product mass prod_k (b_k ? 2/3 : 1/3).
MetricMeasureSpace cantor_like_mass(std::size_t n);

/// Dispatch by name: uniform-line, geometric-mass-line, planar-grid,
/// random-cloud, cantor-like-mass.
MetricMeasureSpace make_space(const std::string& name, std::size_t n, std::uint64_t seed);
const std::vector<std::string>& generator_names();

/// Nonnegative entries uniform in [0, 1) on the support, zero elsewhere.
FunctionTuple random_ftuple(const MetricMeasureSpace& space, int m, std::mt19937_64& rng);
/// Weights exp(u) with u uniform in [-spread, spread].
WeightTuple random_weights(std::size_t n, int m, std::mt19937_64& rng, double spread = 1.0);

}  // namespace sdom::gen
