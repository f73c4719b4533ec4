#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdom/operators.hpp"

namespace sdom {

/// Cells with pairwise disjoint subsets E(Q) of measure >= eta mu(Q). The layer k
/// carries coefficient 100^{-k} in the layered sparse operator.
struct SparseFamily {
  std::vector<CellId> cells;
  std::vector<PointSet> E;  // parallel to cells
  double eta = 0.5;
  double alpha = 200.0;
  int layer = 0;

  double coefficient() const;
  std::size_t size() const { return cells.size(); }
};

/// sum over Q in the family containing x of A(|f|, Q).
double sparse_operator(const SparseFamily& family, const FunctionTuple& f, PointId x,
                       const Lattice& lattice, const MetricMeasureSpace& space);
/// sum_k 100^{-k} A_{S_k} f(x) over the layers.
double sparse_operator(const std::vector<SparseFamily>& layers, const FunctionTuple& f, PointId x,
                       const Lattice& lattice, const MetricMeasureSpace& space);

/// E(Q) within Q, pairwise disjointness (with witness point), and
/// mu(E(Q)) >= eta_min mu(Q). worst_ratio holds the smallest mu(E)/mu(Q).
ValidationReport check_sparseness(const SparseFamily& family, const Lattice& lattice,
                                  const MetricMeasureSpace& space, double eta_min);

/// Output of one stopping-time step on a doubling cell.
struct StoppingTimeResult {
  CellId root = 0;
  double M = 0.0;
  double average = 0.0;  // A(f, Q0)
  PointSet omega;
  double mu_omega = 0.0;
  double mu_root = 0.0;
  std::vector<CellId> maximal;             // C_0: maximal cells inside Omega
  std::vector<CellId> F;                   // doubling stopping cells
  std::vector<std::vector<CellId>> C;      // C[n - 1] holds C_n
  PointSet uncovered;                      // points of Omega in no cell inside Omega
  double constant = 0.0;                   // smallest admissible C in property (3)
  bool property1 = false;
  bool property2 = false;
  bool property3 = false;
  std::size_t cells_visited = 0;

  bool ok() const { return property1 && property2 && property3; }
};

/// Stopping time for M_{T,Q0}: Omega = {x in Q0 : M_{T,Q0} f(x) > M A(f, Q0)}, with
/// M doubled from M_init until mu(Omega) <= mu(Q0) / 2. Omega is covered by
/// maximal cells; doubling ones go to F, the others descend through their
/// children (doubling -> F, non-doubling -> C_{n+1}). All three properties are
/// checked by direct evaluation.
StoppingTimeResult stopping_time_decompose(const Kernel& kernel, const FunctionTuple& f, CellId q0,
                                           const Lattice& lattice, const MetricMeasureSpace& space,
                                           const DominatingFunction& lambda, double alpha,
                                           double M_init = 1.0);

/// Same construction driven by the dyadic maximal M_lambda^{d, Q0}.
StoppingTimeResult stopping_time_decompose_maximal(const FunctionTuple& f, CellId q0, const Lattice& lattice,
                                                   const MetricMeasureSpace& space,
                                                   const DominatingFunction& lambda, double alpha,
                                                   double M_init = 1.0);

struct DominationConfig {
  TruncMode mode = TruncMode::Linf;
  double M_init = 1.0;
  int K_max = 12;
  std::size_t max_nodes = 100000;
  double eta_min = 0.4;
};

struct SlackRow {
  PointId x;
  double t_star;
  double sparse;
  double ratio;
};

struct DominationResult {
  CellId root = 0;
  double alpha = 200.0;
  std::vector<SparseFamily> layers;
  double C_dom = 0.0;
  std::vector<SlackRow> slack;
  int depth = 0;
  std::size_t nodes = 0;
  std::size_t cells_visited = 0;
  std::size_t merged_cells = 0;  // C_n cells folded into layer K_max
  std::vector<StoppingTimeResult> certificates;
  PointSet domain;

  bool certificates_ok() const;
};

/// Doubling cell of largest level containing every point of `domain` in W with
/// domain and supp f inside 30B(Q0). Throws InvalidInput when none exists.
CellId select_root(const Lattice& lattice, const MetricMeasureSpace& space, const PointSet& domain,
                   const FunctionTuple& f);

/// Recursive stopping-time construction of layered sparse families and the
/// pointwise check T* f(x) <= C_dom sum_k 100^{-k} A_{S_k} f(x) on domain cap W.
/// `domain` empty means all points.
DominationResult build_sparse_domination(const Kernel& kernel, const FunctionTuple& f, PointSet domain,
                                         const Lattice& lattice, const MetricMeasureSpace& space,
                                         const DominatingFunction& lambda, double alpha,
                                         const DominationConfig& config = {});

struct DominationCheck {
  double min_C = 0.0;
  PointId worst = 0;
  std::vector<SlackRow> rows;
};

/// Recomputes both sides with the reference implementations.
DominationCheck verify_domination(const Kernel& kernel, const FunctionTuple& f, const DominationResult& result,
                                  const Lattice& lattice, const MetricMeasureSpace& space,
                                  TruncMode mode = TruncMode::Linf);

}  // namespace sdom
