#pragma once

// Reference implementations: plain nested loops and dense radius sweeps, with no
// breakpoint shortcuts and no helpers shared with the main operators. Used by the
// tests and by verification reports only.

#include <vector>

#include "sdom/kernel.hpp"
#include "sdom/lattice.hpp"
#include "sdom/operators.hpp"
#include "sdom/sparse.hpp"
#include "sdom/weights.hpp"

namespace sdom::oracle {

/// Throws BudgetExceeded when the space is too large for nested loops
/// (N <= 64 for m = 2, N <= 24 for m = 3, N^m <= 24^3 beyond).
void check_budget(const MetricMeasureSpace& space, int m);

/// Radii for a dense sweep: every breakpoint, ten interior samples per gap,
/// half the first gap and one value past the last.
std::vector<double> dense_radii(std::vector<double> breakpoints);

double brute_truncated_T(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                         PointId x, double r, TruncMode mode);
double brute_T_star(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
                    TruncMode mode);
double brute_M_lambda(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
                      const DominatingFunction& lambda);
double brute_F(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
               const Cell& cell);
double brute_grand_maximal(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                           PointId x, CellId q0, const Lattice& lattice);
double brute_M_lambda_dyadic(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x, CellId q0,
                             const Lattice& lattice, const DominatingFunction& lambda);
double brute_weighted_maximal(const MetricMeasureSpace& space, const std::vector<double>& f, PointId x,
                              const std::vector<double>& density, const Lattice& lattice,
                              MaximalFamily family);
double brute_A(const FunctionTuple& f, const Cell& cell, const MetricMeasureSpace& space, double alpha);
double brute_sparse_operator(const std::vector<SparseFamily>& layers, const FunctionTuple& f, PointId x,
                             const Lattice& lattice, const MetricMeasureSpace& space);
std::vector<double> brute_nu_w(const WeightTuple& w, const ExponentTuple& p);
double brute_ap_characteristic(const WeightTuple& w, const ExponentTuple& p, double rho,
                               const MetricMeasureSpace& space);
double brute_c_omega(const WeightTuple& w, const ExponentTuple& p, double alpha, const MetricMeasureSpace& space,
                     const Lattice& lattice, const std::vector<SparseFamily>& layers);

}  // namespace sdom::oracle
