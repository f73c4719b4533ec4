#include "sdom/generators.hpp"

#include <cmath>

namespace sdom::gen {

namespace {

MetricMeasureSpace on_line(const std::vector<double>& pos, std::vector<double> masses) {
  std::vector<std::vector<double>> coords;
  for (double p : pos) coords.push_back({p});
  return MetricMeasureSpace::from_coords(std::move(coords), std::move(masses));
}

void require_n(std::size_t n) {
  if (n == 0) throw InvalidInput("generator needs n >= 1");
}

}  // namespace

MetricMeasureSpace uniform_line(std::size_t n) {
  require_n(n);
  std::vector<double> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = static_cast<double>(i);
  return on_line(pos, std::vector<double>(n, 1.0));
}

MetricMeasureSpace geometric_mass_line(std::size_t n) {
  require_n(n);
  std::vector<double> pos(n), mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = static_cast<double>(i);
    mass[i] = std::ldexp(1.0, -static_cast<int>(i));
  }
  return on_line(pos, mass);
}

MetricMeasureSpace planar_grid(std::size_t n) {
  require_n(n);
  std::size_t side = 1;
  while (side * side < n) ++side;
  std::vector<std::vector<double>> coords;
  for (std::size_t i = 0; i < n; ++i)
    coords.push_back({static_cast<double>(i % side), static_cast<double>(i / side)});
  return MetricMeasureSpace::from_coords(std::move(coords), std::vector<double>(n, 1.0));
}

MetricMeasureSpace random_cloud(std::size_t n, std::uint64_t seed) {
  require_n(n);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> coords;
  std::vector<double> mass;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = uniform(rng, 0.0, 10.0);
    const double y = uniform(rng, 0.0, 10.0);
    coords.push_back({x, y});
    mass.push_back(uniform(rng, 0.5, 1.5));
  }
  return MetricMeasureSpace::from_coords(std::move(coords), std::move(mass));
}

MetricMeasureSpace cantor_like_mass(std::size_t n) {
  require_n(n);
  std::vector<double> pos(n), mass(n);
  std::size_t depth = 0;
  while ((std::size_t{1} << depth) < n) ++depth;
  for (std::size_t i = 0; i < n; ++i) {
    double p = 0.0, w = 1.0, scale = 1.0;
    for (std::size_t k = 0; k < depth; ++k) {
      const bool b = (i >> k) & 1u;
      if (b) p += 2.0 * scale;
      w *= b ? 2.0 / 3.0 : 1.0 / 3.0;
      scale *= 3.0;
    }
    pos[i] = p;
    mass[i] = w;
  }
  return on_line(pos, mass);
}

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names{"uniform-line", "geometric-mass-line", "planar-grid", "random-cloud",
                                              "cantor-like-mass"};
  return names;
}

MetricMeasureSpace make_space(const std::string& name, std::size_t n, std::uint64_t seed) {
  if (name == "uniform-line") return uniform_line(n);
  if (name == "geometric-mass-line") return geometric_mass_line(n);
  if (name == "planar-grid") return planar_grid(n);
  if (name == "random-cloud") return random_cloud(n, seed);
  if (name == "cantor-like-mass") return cantor_like_mass(n);
  throw InvalidInput("unknown generator '" + name + "'");
}

FunctionTuple random_ftuple(const MetricMeasureSpace& space, int m, std::mt19937_64& rng) {
  FunctionTuple f = FunctionTuple::zeros(m, space.size());
  for (int j = 0; j < m; ++j)
    for (PointId x = 0; x < space.size(); ++x)
      if (space.in_support(x)) f[j][x] = uniform01(rng);
  return f;
}

WeightTuple random_weights(std::size_t n, int m, std::mt19937_64& rng, double spread) {
  std::vector<std::vector<double>> w(m, std::vector<double>(n));
  for (auto& wi : w)
    for (double& v : wi) v = std::exp(uniform(rng, -spread, spread));
  return WeightTuple(std::move(w));
}

}  // namespace sdom::gen
