#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sdom/kernel.hpp"
#include "sdom/lattice.hpp"

namespace sdom {

/// Truncation geometry: L2 removes sum_j d(x, y_j)^2 <= r^2, Linf removes
/// max_j d(x, y_j) <= r.
enum class TruncMode { L2, Linf };

const char* to_string(TruncMode mode);
TruncMode parse_trunc_mode(const std::string& s);

/// m real functions on the points of a space; absent entries are zero.
struct FunctionTuple {
  std::vector<std::vector<double>> f;

  FunctionTuple() = default;
  explicit FunctionTuple(std::vector<std::vector<double>> values) : f(std::move(values)) {}
  static FunctionTuple zeros(int m, std::size_t n) {
    return FunctionTuple(std::vector<std::vector<double>>(m, std::vector<double>(n, 0.0)));
  }

  int m() const { return static_cast<int>(f.size()); }
  std::size_t points() const { return f.empty() ? 0 : f.front().size(); }
  const std::vector<double>& operator[](std::size_t i) const { return f[i]; }
  std::vector<double>& operator[](std::size_t i) { return f[i]; }

  bool is_zero() const;
  FunctionTuple abs() const;
  /// Points where some f_j is nonzero.
  PointSet support() const;
  /// f_j restricted to `keep` (pointwise indicator).
  FunctionTuple restricted(const PointSet& keep) const;
  void validate(const MetricMeasureSpace& space, int m) const;
};

// All kernel sums exclude tuples with x in {y_1, ..., y_m}.

double truncated_T(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                   PointId x, double r, TruncMode mode = TruncMode::Linf);

/// sup_{r > 0} |T_r f(x)|, exact: evaluated once per distinct value of the
/// truncation functional.
double maximal_T_star(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                      PointId x, TruncMode mode = TruncMode::Linf);
std::vector<double> maximal_T_star_all(const Kernel& kernel, const MetricMeasureSpace& space,
                                       const FunctionTuple& f, TruncMode mode = TruncMode::Linf);

/// F(x, Q): sum over tuples with some y_j outside 30B(Q). Requires x in Q.
double cell_truncation_F(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                         PointId x, const Cell& cell);

/// sup over breakpoint radii of lambda(x, r)^{-m} prod_j int_{B(x, r)} |f_j|.
double M_lambda(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
                const DominatingFunction& lambda);

/// Localized grand maximal truncated operator M_{T, Q0} f(x) for x in Q0.
double grand_maximal_M_T(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                         PointId x, CellId q0, const Lattice& lattice);
/// M_{T, Q0} at every point (0 outside Q0).
std::vector<double> grand_maximal_all(const Kernel& kernel, const MetricMeasureSpace& space,
                                      const FunctionTuple& f, CellId q0, const Lattice& lattice);

/// max over P in D(Q0) containing x of prod_j lambda(z_P, r(P))^{-1} int_{30B(P)} |f_j|.
double M_lambda_dyadic(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x, CellId q0,
                       const Lattice& lattice, const DominatingFunction& lambda);
std::vector<double> M_lambda_dyadic_all(const MetricMeasureSpace& space, const FunctionTuple& f,
                                        CellId q0, const Lattice& lattice,
                                        const DominatingFunction& lambda);

/// Sets over which the density-weighted maximal function takes its supremum.
enum class MaximalFamily { Cells, Balls30, Balls200 };

/// sup over sets S of the family containing x with sigma(S) > 0 of
/// sigma(S)^{-1} int_S |f| sigma dmu, where sigma = density.
double weighted_dyadic_maximal(const MetricMeasureSpace& space, const std::vector<double>& f, PointId x,
                               const std::vector<double>& density, const Lattice& lattice,
                               MaximalFamily family = MaximalFamily::Cells);

/// A(f, Q) = prod_i mu(alpha B(Q))^{-1} int_{30B(Q)} |f_i|.
double bilinear_average_A(const FunctionTuple& f, const Cell& cell, const MetricMeasureSpace& space,
                          double alpha);

struct ComparisonRow {
  PointId x;
  double grand_maximal;
  double t_star;
  double m_lambda;
  double ratio;
};

struct PointwiseComparison {
  double sup_ratio = 0.0;
  std::vector<ComparisonRow> table;  // rows with M_lambda > 0 only
  bool finite = true;
};

/// |M_{T,Q0} f - T* f| / M_lambda f over x in Q0.
PointwiseComparison check_pointwise_comparison(const Kernel& kernel, const MetricMeasureSpace& space,
                                               const FunctionTuple& f, CellId q0, const Lattice& lattice,
                                               const DominatingFunction& lambda,
                                               TruncMode mode = TruncMode::Linf);

struct RecursionRow {
  PointId x;
  double lhs;    // M_{T, Qhat}(f 1_{30B(Qhat)})(x)
  double local;  // M_{T, Q}(f 1_{30B(Q)})(x)
  double min_C;  // smallest admissible constant at x
};

struct RecursionCheck {
  double theta_avg = 0.0;  // Theta(Qhat) A(f, Qhat)
  double min_C = 0.0;
  double C = 1.0;
  bool ok = true;
  std::vector<RecursionRow> rows;
};

/// Evaluates both sides of the two-cell recursion for every x in Q.
RecursionCheck check_recursion(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                               CellId q, CellId qhat, const Lattice& lattice,
                               const DominatingFunction& lambda, double alpha, double C = 1.0);

/// Empirical weak-type constant sup_t t mu{v > t}^{1/m} / prod_j ||f_j||_1 of a
/// pointwise operator output v.
double weak_type_constant(const MetricMeasureSpace& space, const std::vector<double>& values,
                          const FunctionTuple& f);

}  // namespace sdom
