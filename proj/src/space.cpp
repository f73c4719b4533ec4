#include "sdom/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sdom {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << subject << ": " << (ok() ? "pass" : "FAIL") << " (checked=" << checked
     << " skipped=" << skipped << " violations=" << violations.size();
  if (vacuous) os << " vacuous";
  os << ")";
  return os.str();
}

namespace {

// Triangle inequality slack for floating-point distances derived from coordinates.
constexpr double kTriangleRelTol = 1e-12;

}  // namespace

MetricMeasureSpace::MetricMeasureSpace(std::vector<double> masses, std::vector<double> dist,
                                       std::vector<std::vector<double>> coords,
                                       std::size_t max_points)
    : masses_(std::move(masses)), dist_(std::move(dist)), coords_(std::move(coords)) {
  const std::size_t n = masses_.size();
  if (n == 0) throw InvalidInput("space has no points");
  if (n > max_points)
    throw InvalidInput("space has " + std::to_string(n) + " points, cap is " +
                       std::to_string(max_points));
  if (dist_.size() != n * n) throw InvalidInput("distance matrix must be N x N");
  if (!coords_.empty() && coords_.size() != n)
    throw InvalidInput("coordinate count does not match point count");
  validate();
  index();
}

MetricMeasureSpace MetricMeasureSpace::from_coords(std::vector<std::vector<double>> coords,
                                                   std::vector<double> masses,
                                                   std::size_t max_points) {
  const std::size_t n = coords.size();
  if (masses.size() != n) throw InvalidInput("coordinate count does not match mass count");
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (coords[i].size() != coords[0].size())
      throw InvalidInput("point " + std::to_string(i) + " has inconsistent dimension");
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) {
        const double t = coords[i][k] - coords[j][k];
        s += t * t;
      }
      d[i * n + j] = d[j * n + i] = std::sqrt(s);
    }
  }
  return MetricMeasureSpace(std::move(masses), std::move(d), std::move(coords), max_points);
}

void MetricMeasureSpace::validate() const {
  const std::size_t n = size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(masses_[i]) || masses_[i] < 0.0)
      throw InvalidInput("point " + std::to_string(i) + " has invalid mass");
    total += masses_[i];
  }
  if (!(total > 0.0)) throw InvalidInput("total mass must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw InvalidInput("dist(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dist(i, j);
      if (!std::isfinite(d) || d < 0.0)
        throw InvalidInput("invalid distance between " + std::to_string(i) + " and " + std::to_string(j));
      if (d != dist(j, i))
        throw InvalidInput("asymmetric distance between " + std::to_string(i) + " and " +
                           std::to_string(j));
      if (i != j && d == 0.0)
        throw InvalidInput("distinct points " + std::to_string(i) + " and " + std::to_string(j) +
                           " at distance 0");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double lhs = dist(i, k);
        const double rhs = dist(i, j) + dist(j, k);
        if (lhs > rhs * (1.0 + kTriangleRelTol))
          throw InvalidInput("triangle inequality violated by triple (" + std::to_string(i) + ", " +
                             std::to_string(j) + ", " + std::to_string(k) + ")");
      }
}

void MetricMeasureSpace::index() {
  const std::size_t n = size();
  order_.assign(n, {});
  for (std::size_t x = 0; x < n; ++x) {
    auto& o = order_[x];
    o.resize(n);
    std::iota(o.begin(), o.end(), PointId{0});
    std::stable_sort(o.begin(), o.end(),
                     [&](PointId a, PointId b) { return dist(x, a) < dist(x, b); });
  }
  support_.clear();
  total_mass_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total_mass_ += masses_[i];
    if (masses_[i] > 0.0) support_.push_back(i);
  }
  diameter_ = 0.0;
  min_positive_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      diameter_ = std::max(diameter_, dist(i, j));
      min_positive_ = std::min(min_positive_, dist(i, j));
    }
  if (n == 1) min_positive_ = 0.0;
}

void MetricMeasureSpace::require_point(PointId x) const {
  if (!contains(x)) throw InvalidInput("unknown point id " + std::to_string(x));
}

PointSet MetricMeasureSpace::ball_points(const Ball& ball) const {
  require_point(ball.center);
  if (ball.radius < 0.0) throw InvalidInput("ball radius must be nonnegative");
  PointSet out;
  for (PointId y : order_[ball.center]) {
    if (dist(ball.center, y) > ball.radius) break;
    out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double MetricMeasureSpace::ball_measure(PointId center, double radius) const {
  double s = 0.0;
  for (PointId y : order_[center]) {
    if (dist(center, y) > radius) break;
    s += masses_[y];
  }
  return s;
}

double MetricMeasureSpace::ball_integral(PointId center, double radius,
                                         std::span<const double> w) const {
  double s = 0.0;
  for (PointId y : order_[center]) {
    if (dist(center, y) > radius) break;
    s += w[y] * masses_[y];
  }
  return s;
}

double MetricMeasureSpace::measure(std::span<const PointId> points) const {
  double s = 0.0;
  for (PointId y : points) {
    require_point(y);
    s += masses_[y];
  }
  return s;
}

std::vector<double> MetricMeasureSpace::breakpoint_radii(PointId x) const {
  require_point(x);
  std::vector<double> r;
  r.reserve(size());
  for (PointId y : order_[x]) {
    const double d = dist(x, y);
    if (r.empty() || r.back() != d) r.push_back(d);
  }
  return r;
}

std::vector<double> MetricMeasureSpace::breakpoint_radii() const {
  std::vector<double> r{0.0};
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) r.push_back(dist(i, j));
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

// --- dominating function -----------------------------------------------------

DominatingFunction DominatingFunction::power(double c, double n, double c_lambda) {
  if (!(c > 0.0) || !(n >= 0.0)) throw InvalidInput("power dominating function needs c > 0, n >= 0");
  if (!(c_lambda >= 1.0)) throw InvalidInput("C_lambda must be >= 1");
  DominatingFunction f;
  f.form_ = Form::Power;
  f.c_ = c;
  f.n_ = n;
  f.c_lambda_ = c_lambda;
  return f;
}

DominatingFunction DominatingFunction::tabulated(
    std::vector<std::vector<std::pair<double, double>>> grid, double c_lambda) {
  if (!(c_lambda >= 1.0)) throw InvalidInput("C_lambda must be >= 1");
  for (auto& g : grid) {
    if (g.empty()) throw InvalidInput("tabulated dominating function needs a value per point");
    std::sort(g.begin(), g.end());
  }
  DominatingFunction f;
  f.form_ = Form::Tabulated;
  f.grid_ = std::move(grid);
  f.c_lambda_ = c_lambda;
  return f;
}

double DominatingFunction::operator()(PointId x, double r) const {
  if (form_ == Form::Power) return c_ * std::pow(1.0 + r, n_);
  const auto& g = grid_.at(x);
  auto it = std::upper_bound(g.begin(), g.end(), r,
                             [](double v, const std::pair<double, double>& e) { return v < e.first; });
  if (it == g.begin()) return g.front().second;
  return std::prev(it)->second;
}

DominatingFunction DominatingFunction::fit_power(const MetricMeasureSpace& space) {
  double max_mass = 0.0;
  for (double m : space.masses()) max_mass = std::max(max_mass, m);
  const double c = 2.0 * max_mass;
  double n = 0.0;
  for (PointId x : space.support())
    for (double r : space.breakpoint_radii(x)) {
      if (r == 0.0) continue;
      const double mu = space.ball_measure(x, r);
      if (mu > c) n = std::max(n, std::log(mu / c) / std::log1p(r));
    }
  n = n * (1.0 + 1e-9) + 1e-12;
  // Guard against pow rounding at the fitted exponent.
  for (int i = 0; i < 64; ++i) {
    bool ok = true;
    for (PointId x : space.support())
      for (double r : space.breakpoint_radii(x))
        if (space.ball_measure(x, r) > c * std::pow(1.0 + r, n)) ok = false;
    if (ok) break;
    n *= 1.0 + 1e-6;
  }
  return power(c, n, std::pow(2.0, n));
}

ValidationReport check_upper_doubling(const MetricMeasureSpace& space,
                                      const DominatingFunction& lambda) {
  ValidationReport rep;
  rep.subject = "upper-doubling";
  const auto radii = space.breakpoint_radii();
  const double cl = lambda.c_lambda();
  for (PointId x : space.support()) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double r : radii) {
      ++rep.checked;
      const double lam = lambda(x, r);
      if (lam < prev)
        rep.add({"monotone", "lambda decreases in r", {x}, r, lam, prev});
      prev = lam;
      const double mu = space.ball_measure(x, r);
      if (mu > lam) rep.add({"domination", "mu(B(x,r)) > lambda(x,r)", {x}, r, mu, lam});
      const double half = cl * lambda(x, r / 2.0);
      if (lam > half)
        rep.add({"doubling", "lambda(x,r) > C_lambda lambda(x,r/2)", {x}, r, lam, half});
      for (PointId y : space.support()) {
        if (space.dist(x, y) > r) continue;
        const double other = cl * lambda(y, r);
        if (lam > other)
          rep.add({"symmetry", "lambda(x,r) > C_lambda lambda(y,r)", {x, y}, r, lam, other});
      }
    }
  }
  return rep;
}

ValidationReport check_geometric_doubling(const MetricMeasureSpace& space, double n, double C) {
  ValidationReport rep;
  rep.subject = "geometric-doubling";
  if (n < 0.0 || !(C > 0.0)) throw InvalidInput("geometric doubling needs n >= 0 and C > 0");
  const auto radii = space.breakpoint_radii();
  for (PointId x = 0; x < space.size(); ++x) {
    for (double R : space.breakpoint_radii(x)) {
      if (R == 0.0) continue;
      const PointSet ball = space.ball_points({x, R});
      for (double r : radii) {
        if (r == 0.0) continue;
        if (r > R) break;
        ++rep.checked;
        PointSet chosen;
        for (PointId y : ball) {
          bool separated = true;
          for (PointId z : chosen)
            if (space.dist(y, z) < r) {
              separated = false;
              break;
            }
          if (separated) chosen.push_back(y);
        }
        const double bound = C * std::pow(R / r, n);
        const double count = static_cast<double>(chosen.size());
        rep.worst_ratio = std::max(rep.worst_ratio, count / bound);
        if (count > bound) {
          Violation v{"cardinality", "r-separated subset exceeds C (R/r)^n", {x}, R, count, bound};
          v.detail += " (r=" + std::to_string(r) + ")";
          rep.add(std::move(v));
        }
      }
    }
  }
  return rep;
}

bool is_subset(std::span<const PointId> a, std::span<const PointId> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(std::span<const PointId> a, std::span<const PointId> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

}  // namespace sdom
