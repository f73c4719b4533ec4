#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sdom/error.hpp"
#include "sdom/report.hpp"

namespace sdom {

using PointId = std::size_t;
/// Sorted, duplicate-free list of point ids.
using PointSet = std::vector<PointId>;

/// Closed ball B(center, radius) = {y : dist(center, y) <= radius}.
struct Ball {
  PointId center = 0;
  double radius = 0.0;
};

/// Finite metric space carrying an atomic measure. Immutable after construction.
///
/// The constructor validates the metric exhaustively (symmetry, zero diagonal,
/// nonnegativity, triangle inequality) and rejects bad data with a diagnostic
/// naming the witness pair or triple.
class MetricMeasureSpace {
 public:
  static constexpr std::size_t kDefaultMaxPoints = 512;

  /// `dist` is the row-major N x N distance matrix.
  MetricMeasureSpace(std::vector<double> masses, std::vector<double> dist,
                     std::vector<std::vector<double>> coords = {},
                     std::size_t max_points = kDefaultMaxPoints);

  /// Euclidean metric derived from coordinates.
  static MetricMeasureSpace from_coords(std::vector<std::vector<double>> coords,
                                        std::vector<double> masses,
                                        std::size_t max_points = kDefaultMaxPoints);

  std::size_t size() const { return masses_.size(); }
  double mass(PointId x) const { return masses_.at(x); }
  const std::vector<double>& masses() const { return masses_; }
  double dist(PointId x, PointId y) const { return dist_[x * size() + y]; }
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<std::vector<double>>& coords() const { return coords_; }

  /// W: points of positive mass.
  const PointSet& support() const { return support_; }
  bool in_support(PointId x) const { return masses_.at(x) > 0.0; }
  double total_mass() const { return total_mass_; }
  double diameter() const { return diameter_; }
  /// Smallest positive distance; 0 for a single-point space.
  double min_positive_distance() const { return min_positive_; }

  bool contains(PointId x) const { return x < size(); }
  void require_point(PointId x) const;

  PointSet ball_points(const Ball& ball) const;
  double ball_measure(PointId center, double radius) const;
  /// Sum of w(y) * mass(y) over the closed ball.
  double ball_integral(PointId center, double radius, std::span<const double> w) const;

  double measure(std::span<const PointId> points) const;

  /// Distinct values {dist(x, y)} sorted ascending; 0 is always first.
  std::vector<double> breakpoint_radii(PointId x) const;
  /// Distinct pairwise distances with 0 prepended.
  std::vector<double> breakpoint_radii() const;

  /// Points ordered by (dist(x, .), id).
  const std::vector<PointId>& by_distance(PointId x) const { return order_[x]; }

 private:
  void validate() const;
  void index();

  std::vector<double> masses_;
  std::vector<double> dist_;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<PointId>> order_;
  PointSet support_;
  double total_mass_ = 0.0;
  double diameter_ = 0.0;
  double min_positive_ = 0.0;
};

/// Dominating function lambda(x, r) of an upper doubling space.
class DominatingFunction {
 public:
  enum class Form { Power, Tabulated };

  /// lambda(x, r) = c * (1 + r)^n.
  static DominatingFunction power(double c, double n, double c_lambda);
  /// Per-point grid of (radius, value) pairs; step function with flat extension
  /// below the first and beyond the last grid radius.
  static DominatingFunction tabulated(std::vector<std::vector<std::pair<double, double>>> grid,
                                      double c_lambda);
  /// Power form with c = 2 * max atom mass and the smallest exponent n for which
  /// mu(B(x, r)) <= lambda(x, r) holds at every breakpoint; C_lambda = 2^n.
  static DominatingFunction fit_power(const MetricMeasureSpace& space);

  double operator()(PointId x, double r) const;
  double c_lambda() const { return c_lambda_; }
  Form form() const { return form_; }
  double c() const { return c_; }
  double n() const { return n_; }
  const std::vector<std::vector<std::pair<double, double>>>& grid() const { return grid_; }

 private:
  Form form_ = Form::Power;
  double c_ = 1.0;
  double n_ = 0.0;
  double c_lambda_ = 1.0;
  std::vector<std::vector<std::pair<double, double>>> grid_;
};

/// Exhaustive check of monotonicity, mu(B) <= lambda <= C_lambda lambda(., r/2),
/// and the symmetry property lambda(x, r) <= C_lambda lambda(y, r) for dist(x, y) <= r,
/// over x in W and every breakpoint radius.
ValidationReport check_upper_doubling(const MetricMeasureSpace& space, const DominatingFunction& lambda);

/// For every ball B(x, R) and r in (0, R] on breakpoints, a greedy maximal
/// r-separated subset (pairwise dist >= r, id order) must have at most C (R/r)^n points.
ValidationReport check_geometric_doubling(const MetricMeasureSpace& space, double n, double C);

/// Sorted union / intersection helpers for PointSet.
bool is_subset(std::span<const PointId> a, std::span<const PointId> b);
bool intersects(std::span<const PointId> a, std::span<const PointId> b);

}  // namespace sdom
