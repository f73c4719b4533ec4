#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdom/space.hpp"

namespace sdom {

using CellId = std::size_t;

/// strict: literal constants (C0 > 1, A0 > 5000 C0, alpha >= 200).
/// lab: small constants so that desk-sized spaces get a nontrivial hierarchy.
enum class LatticeMode { Strict, Lab };

const char* to_string(LatticeMode mode);
LatticeMode parse_lattice_mode(const std::string& s);

struct LatticeConstants {
  LatticeMode mode = LatticeMode::Lab;
  double C0 = 2.0;
  double A0 = 4.0;
  int k_min = 0;
  int k_max = 0;

  /// A0^{-k}
  double scale(int k) const;
};

struct Cell {
  CellId id = 0;
  int level = 0;
  PointSet members;  // subset of W
  PointId center = 0;
  double radius = 0.0;
  std::optional<CellId> parent;
  std::vector<CellId> children;
  bool is_doubling = false;

  Ball ball(double dilation = 1.0) const { return {center, dilation * radius}; }
  bool contains(PointId x) const;
};

/// David-Mattila style cell hierarchy over the support W of a space.
///
/// Levels run from k_min (coarsest) to k_max (finest); cells are stored with
/// ids increasing from the coarsest level, and each level partitions W.
class Lattice {
 public:
  Lattice() = default;
  Lattice(LatticeConstants constants, std::vector<Cell> cells);

  const LatticeConstants& constants() const { return constants_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::vector<Cell>& mutable_cells() { return cells_; }
  const Cell& cell(CellId id) const { return cells_.at(id); }
  std::size_t size() const { return cells_.size(); }

  /// Cell ids at level k (empty vector outside [k_min, k_max]).
  std::vector<CellId> level(int k) const;
  /// The level-k cell containing x, if any.
  std::optional<CellId> cell_of(PointId x, int k) const;
  /// Hierarchy descendants of id, including id itself, coarse to fine.
  std::vector<CellId> descendants(CellId id) const;
  /// Cells (by hierarchy) below id that contain x, including id itself.
  std::vector<CellId> chain(CellId id, PointId x) const;
  bool is_ancestor(CellId ancestor, CellId cell) const;

  /// Rebuilds parent/children/level indices after hand edits.
  void reindex();

 private:
  LatticeConstants constants_;
  std::vector<Cell> cells_;
};

/// Smallest k_min with A0^{-k_min} >= diameter and a k_max fine enough that
/// every point is its own center at level k_max (10 C0 A0^{-k_max} < min distance).
LatticeConstants default_constants(const MetricMeasureSpace& space, LatticeMode mode, double C0,
                                   double A0);

/// Builds a lattice level by level from the finest scale.
///
/// At each level k with s = A0^{-k}, centers are a greedy maximal set (order:
/// mass descending, then id, seeded permutation among exact ties) of points of W
/// with pairwise distances > 10 C0 s, so that the balls 5B(Q) are disjoint for
/// every admissible radius. Each finer cell joins the parent whose center is
/// nearest to its own center, which keeps nesting exact. Radii start at the
/// smallest r in [s, C0 s] making B(z, r) doubling (else s) and are inflated
/// within the band until 30B(child) is inside 30B(parent).
///
/// Throws InfeasibleConstants if the result fails check_lattice.
Lattice build_lattice(const MetricMeasureSpace& space, const LatticeConstants& constants,
                      std::uint64_t tie_break_seed = 0);

/// Exhaustive structural validation: partition per level, nesting, radius band,
/// W cap B(Q) within Q within 28B(Q), disjoint 5B(Q) per level, the strict-mode
/// non-doubling conditions, and 30B monotonicity along the hierarchy.
ValidationReport check_lattice(const Lattice& lattice, const MetricMeasureSpace& space);

/// Sets is_doubling iff mu(100 B(Q)) <= C0 mu(B(Q)).
Lattice classify_doubling(Lattice lattice, const MetricMeasureSpace& space, double C0);

/// (mu(alpha B(Q)) / lambda(z_Q, r(Q)))^m.
double theta(const Cell& cell, const MetricMeasureSpace& space, const DominatingFunction& lambda,
             double alpha, int m);

struct ThetaChain {
  std::vector<CellId> cells;   // Q_0 > Q_1 > ... with Q_1.. non-doubling
  std::vector<double> ratios;  // Theta(Q_k) / Theta(Q_0), ratios[0] == 1
  std::vector<double> bounds;  // comparability * C0^{-k l0}
  bool ok = true;
};

struct ThetaDecayReport {
  LatticeMode mode = LatticeMode::Lab;
  int l0 = 0;
  double sup_theta = 0.0;
  std::vector<ThetaChain> chains;
  std::size_t violations = 0;
};

/// Enumerates maximal chains whose cells after the first are non-doubling and
/// compares Theta ratios against C0^{-k l0}. l0 is the largest integer with
/// 100^{l0} < C0 / alpha when that is positive, else `lab_l0`.
ThetaDecayReport theta_decay_check(const Lattice& lattice, const MetricMeasureSpace& space,
                                   const DominatingFunction& lambda, double alpha, int m,
                                   int lab_l0 = 1, double comparability = 1.0);

}  // namespace sdom
