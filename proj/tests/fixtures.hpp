#pragma once

#include <string>
#include <vector>

#include "sdom/generators.hpp"
#include "sdom/lattice.hpp"

namespace fixtures {

struct Named {
  std::string name;
  sdom::MetricMeasureSpace space;
};

/// The five named fixture spaces used across the suites.
inline std::vector<Named> named() {
  using namespace sdom::gen;
  return {{"uniform-line-32", uniform_line(32)},
          {"geometric-mass-line-16", geometric_mass_line(16)},
          {"planar-grid-36", planar_grid(36)},
          {"random-cloud-32-s7", random_cloud(32, 7)},
          {"cantor-like-mass-32", cantor_like_mass(32)}};
}

inline sdom::Lattice lab_lattice(const sdom::MetricMeasureSpace& space, std::uint64_t seed = 0) {
  return sdom::build_lattice(space, sdom::default_constants(space, sdom::LatticeMode::Lab, 2.0, 4.0), seed);
}

inline sdom::Lattice strict_lattice(const sdom::MetricMeasureSpace& space) {
  return sdom::build_lattice(space, sdom::default_constants(space, sdom::LatticeMode::Strict, 2.0, 10001.0));
}

}  // namespace fixtures
