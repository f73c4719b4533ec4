#include "sdom/operators.hpp"

#include <algorithm>
#include <cmath>

#include "tuples.hpp"

namespace sdom {

using detail::for_each_tuple;
using detail::hits;
using detail::slot_entries;

const char* to_string(TruncMode mode) { return mode == TruncMode::L2 ? "l2" : "linf"; }

TruncMode parse_trunc_mode(const std::string& s) {
  if (s == "l2") return TruncMode::L2;
  if (s == "linf") return TruncMode::Linf;
  throw InvalidInput("unknown truncation mode '" + s + "' (expected l2|linf)");
}

bool FunctionTuple::is_zero() const {
  for (const auto& fj : f)
    for (double v : fj)
      if (v != 0.0) return false;
  return true;
}

FunctionTuple FunctionTuple::abs() const {
  FunctionTuple out = *this;
  for (auto& fj : out.f)
    for (double& v : fj) v = std::abs(v);
  return out;
}

PointSet FunctionTuple::support() const {
  PointSet s;
  for (std::size_t y = 0; y < points(); ++y)
    for (const auto& fj : f)
      if (fj[y] != 0.0) {
        s.push_back(y);
        break;
      }
  return s;
}

FunctionTuple FunctionTuple::restricted(const PointSet& keep) const {
  FunctionTuple out = zeros(m(), points());
  for (int j = 0; j < m(); ++j)
    for (PointId y : keep) out[j][y] = f[j][y];
  return out;
}

void FunctionTuple::validate(const MetricMeasureSpace& space, int m_expected) const {
  if (m() != m_expected)
    throw InvalidInput("function tuple has " + std::to_string(m()) + " slots, kernel expects " +
                       std::to_string(m_expected));
  for (const auto& fj : f) {
    if (fj.size() != space.size()) throw InvalidInput("function tuple size does not match space");
    for (double v : fj)
      if (!std::isfinite(v)) throw InvalidInput("function tuple has non-finite values");
  }
}

namespace {

double trunc_functional(const MetricMeasureSpace& space, PointId x, std::span<const PointId> ys,
                        TruncMode mode) {
  double g = 0.0;
  for (PointId y : ys) {
    const double d = space.dist(x, y);
    g = mode == TruncMode::L2 ? g + d * d : std::max(g, d);
  }
  return g;
}

double threshold(double r, TruncMode mode) { return mode == TruncMode::L2 ? r * r : r; }

PointSet ball_set(const MetricMeasureSpace& space, const Cell& c, double dil) {
  return space.ball_points(c.ball(dil));
}

}  // namespace

double truncated_T(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                   PointId x, double r, TruncMode mode) {
  space.require_point(x);
  if (r < 0.0) throw InvalidInput("truncation radius must be nonnegative");
  const double thr = threshold(r, mode);
  double sum = 0.0;
  for_each_tuple(slot_entries(space, f), [&](std::span<const PointId> ys, double w) {
    if (hits(x, ys)) return;
    if (trunc_functional(space, x, ys, mode) > thr) sum += kernel(space, x, ys) * w;
  });
  return sum;
}

double maximal_T_star(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                      PointId x, TruncMode mode) {
  space.require_point(x);
  std::vector<std::pair<double, double>> terms;
  for_each_tuple(slot_entries(space, f), [&](std::span<const PointId> ys, double w) {
    if (hits(x, ys)) return;
    terms.emplace_back(trunc_functional(space, x, ys, mode), kernel(space, x, ys) * w);
  });
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Suffix sums: T_r for r just above each distinct functional value.
  double best = 0.0;
  double suffix = 0.0;
  for (std::size_t i = terms.size(); i-- > 0;) {
    suffix += terms[i].second;
    if (i == 0 || terms[i - 1].first != terms[i].first) best = std::max(best, std::abs(suffix));
  }
  return best;
}

std::vector<double> maximal_T_star_all(const Kernel& kernel, const MetricMeasureSpace& space,
                                       const FunctionTuple& f, TruncMode mode) {
  std::vector<double> out(space.size());
  for (PointId x = 0; x < space.size(); ++x) out[x] = maximal_T_star(kernel, space, f, x, mode);
  return out;
}

namespace {

double cell_F(const Kernel& kernel, const MetricMeasureSpace& space,
              const std::vector<std::vector<detail::SlotEntry>>& slots, PointId x,
              const std::vector<char>& in30) {
  double sum = 0.0;
  for_each_tuple(slots, [&](std::span<const PointId> ys, double w) {
    if (hits(x, ys)) return;
    bool all_in = true;
    for (PointId y : ys)
      if (!in30[y]) {
        all_in = false;
        break;
      }
    if (!all_in) sum += kernel(space, x, ys) * w;
  });
  return sum;
}

std::vector<char> indicator(const MetricMeasureSpace& space, const PointSet& s) {
  std::vector<char> v(space.size(), 0);
  for (PointId p : s) v[p] = 1;
  return v;
}

}  // namespace

double cell_truncation_F(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                         PointId x, const Cell& cell) {
  if (!cell.contains(x))
    throw InvalidInput("point " + std::to_string(x) + " not in cell " + std::to_string(cell.id));
  return cell_F(kernel, space, slot_entries(space, f), x, indicator(space, ball_set(space, cell, 30.0)));
}

double M_lambda(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
                const DominatingFunction& lambda) {
  space.require_point(x);
  const FunctionTuple a = f.abs();
  double best = 0.0;
  for (double r : space.breakpoint_radii(x)) {
    double prod = 1.0;
    for (int j = 0; j < a.m(); ++j) prod *= space.ball_integral(x, r, a[j]) / lambda(x, r);
    best = std::max(best, prod);
  }
  return best;
}

std::vector<double> grand_maximal_all(const Kernel& kernel, const MetricMeasureSpace& space,
                                      const FunctionTuple& f, CellId q0, const Lattice& lattice) {
  std::vector<double> out(space.size(), 0.0);
  const auto slots = slot_entries(space, f);
  for (CellId pid : lattice.descendants(q0)) {
    const Cell& P = lattice.cell(pid);
    const auto in30 = indicator(space, ball_set(space, P, 30.0));
    double g = 0.0;
    for (PointId y : P.members) g = std::max(g, std::abs(cell_F(kernel, space, slots, y, in30)));
    for (PointId x : P.members) out[x] = std::max(out[x], g);
  }
  return out;
}

double grand_maximal_M_T(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                         PointId x, CellId q0, const Lattice& lattice) {
  if (!lattice.cell(q0).contains(x))
    throw InvalidInput("point " + std::to_string(x) + " not in cell " + std::to_string(q0));
  const auto slots = slot_entries(space, f);
  double best = 0.0;
  for (CellId pid : lattice.chain(q0, x)) {
    const Cell& P = lattice.cell(pid);
    const auto in30 = indicator(space, ball_set(space, P, 30.0));
    for (PointId y : P.members) best = std::max(best, std::abs(cell_F(kernel, space, slots, y, in30)));
  }
  return best;
}

namespace {

double dyadic_product(const MetricMeasureSpace& space, const FunctionTuple& a, const Cell& P,
                      const DominatingFunction& lambda) {
  const double lam = lambda(P.center, P.radius);
  double prod = 1.0;
  for (int j = 0; j < a.m(); ++j) prod *= space.ball_integral(P.center, 30.0 * P.radius, a[j]) / lam;
  return prod;
}

}  // namespace

double M_lambda_dyadic(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x, CellId q0,
                       const Lattice& lattice, const DominatingFunction& lambda) {
  if (!lattice.cell(q0).contains(x))
    throw InvalidInput("point " + std::to_string(x) + " not in cell " + std::to_string(q0));
  const FunctionTuple a = f.abs();
  double best = 0.0;
  for (CellId pid : lattice.chain(q0, x)) best = std::max(best, dyadic_product(space, a, lattice.cell(pid), lambda));
  return best;
}

std::vector<double> M_lambda_dyadic_all(const MetricMeasureSpace& space, const FunctionTuple& f,
                                        CellId q0, const Lattice& lattice,
                                        const DominatingFunction& lambda) {
  const FunctionTuple a = f.abs();
  std::vector<double> out(space.size(), 0.0);
  for (CellId pid : lattice.descendants(q0)) {
    const Cell& P = lattice.cell(pid);
    const double v = dyadic_product(space, a, P, lambda);
    for (PointId x : P.members) out[x] = std::max(out[x], v);
  }
  return out;
}

double weighted_dyadic_maximal(const MetricMeasureSpace& space, const std::vector<double>& f, PointId x,
                               const std::vector<double>& density, const Lattice& lattice,
                               MaximalFamily family) {
  space.require_point(x);
  double best = 0.0;
  for (const Cell& c : lattice.cells()) {
    PointSet set;
    if (family == MaximalFamily::Cells) {
      if (!c.contains(x)) continue;
      set = c.members;
    } else {
      const double dil = family == MaximalFamily::Balls30 ? 30.0 : 200.0;
      if (space.dist(c.center, x) > dil * c.radius) continue;
      set = ball_set(space, c, dil);
    }
    double sigma = 0.0, integral = 0.0;
    for (PointId y : set) {
      sigma += density[y] * space.mass(y);
      integral += std::abs(f[y]) * density[y] * space.mass(y);
    }
    if (sigma > 0.0) best = std::max(best, integral / sigma);
  }
  return best;
}

double bilinear_average_A(const FunctionTuple& f, const Cell& cell, const MetricMeasureSpace& space,
                          double alpha) {
  const double denom = space.ball_measure(cell.center, alpha * cell.radius);
  if (!(denom > 0.0))
    throw InvalidInput("mu(alpha B(Q)) vanishes for cell " + std::to_string(cell.id));
  double prod = 1.0;
  for (int i = 0; i < f.m(); ++i) {
    double s = 0.0;
    for (PointId y : space.by_distance(cell.center)) {
      if (space.dist(cell.center, y) > 30.0 * cell.radius) break;
      s += std::abs(f[i][y]) * space.mass(y);
    }
    prod *= s / denom;
  }
  return prod;
}

PointwiseComparison check_pointwise_comparison(const Kernel& kernel, const MetricMeasureSpace& space,
                                               const FunctionTuple& f, CellId q0, const Lattice& lattice,
                                               const DominatingFunction& lambda, TruncMode mode) {
  PointwiseComparison out;
  const auto gm = grand_maximal_all(kernel, space, f, q0, lattice);
  for (PointId x : lattice.cell(q0).members) {
    const double ml = M_lambda(space, f, x, lambda);
    if (!(ml > 0.0)) continue;
    const double ts = maximal_T_star(kernel, space, f, x, mode);
    const double ratio = std::abs(gm[x] - ts) / ml;
    out.table.push_back({x, gm[x], ts, ml, ratio});
    if (!std::isfinite(ratio)) out.finite = false;
    out.sup_ratio = std::max(out.sup_ratio, ratio);
  }
  return out;
}

RecursionCheck check_recursion(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                               CellId q, CellId qhat, const Lattice& lattice,
                               const DominatingFunction& lambda, double alpha, double C) {
  if (!lattice.is_ancestor(qhat, q))
    throw InvalidInput("cells " + std::to_string(q) + " and " + std::to_string(qhat) + " are not nested");
  const Cell& Q = lattice.cell(q);
  const Cell& Qh = lattice.cell(qhat);
  const FunctionTuple fh = f.restricted(ball_set(space, Qh, 30.0));
  const FunctionTuple fq = f.restricted(ball_set(space, Q, 30.0));
  const auto lhs = grand_maximal_all(kernel, space, fh, qhat, lattice);
  const auto loc = grand_maximal_all(kernel, space, fq, q, lattice);
  RecursionCheck out;
  out.C = C;
  out.theta_avg = theta(Qh, space, lambda, alpha, f.m()) * bilinear_average_A(f, Qh, space, alpha);
  for (PointId x : Q.members) {
    const double excess = lhs[x] - loc[x];
    double min_c = 0.0;
    if (excess > 0.0) min_c = out.theta_avg > 0.0 ? excess / out.theta_avg : INFINITY;
    out.rows.push_back({x, lhs[x], loc[x], min_c});
    out.min_C = std::max(out.min_C, min_c);
    if (lhs[x] > C * out.theta_avg + loc[x]) out.ok = false;
  }
  return out;
}

double weak_type_constant(const MetricMeasureSpace& space, const std::vector<double>& values,
                          const FunctionTuple& f) {
  double norms = 1.0;
  for (int j = 0; j < f.m(); ++j) {
    double s = 0.0;
    for (PointId y = 0; y < space.size(); ++y) s += std::abs(f[j][y]) * space.mass(y);
    norms *= s;
  }
  if (!(norms > 0.0)) return 0.0;
  // mu{v > t} is a step function; sup of t mu{v > t}^{1/m} is approached as t
  // rises to each distinct value.
  std::vector<PointId> idx;
  for (PointId x = 0; x < space.size(); ++x)
    if (space.in_support(x)) idx.push_back(x);
  std::sort(idx.begin(), idx.end(), [&](PointId a, PointId b) { return values[a] > values[b]; });
  double best = 0.0, mass_above = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    mass_above += space.mass(idx[i]);
    if (i + 1 < idx.size() && values[idx[i + 1]] == values[idx[i]]) continue;
    best = std::max(best, values[idx[i]] * std::pow(mass_above, 1.0 / f.m()));
  }
  return best / norms;
}

}  // namespace sdom
