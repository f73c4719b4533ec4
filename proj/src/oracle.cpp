#include "sdom/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace sdom::oracle {

void check_budget(const MetricMeasureSpace& space, int m) {
  const double n = static_cast<double>(space.size());
  bool ok = true;
  if (m <= 2)
    ok = n <= 64;
  else if (m == 3)
    ok = n <= 24;
  else
    ok = std::pow(n, m) <= 24.0 * 24.0 * 24.0;
  if (!ok)
    throw BudgetExceeded("oracle budget exceeded: N = " + std::to_string(space.size()) + ", m = " +
                         std::to_string(m));
}

std::vector<double> dense_radii(std::vector<double> bp) {
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> out;
  if (bp.empty()) return {0.0, 1.0};
  if (bp.front() > 0.0) out.push_back(0.5 * bp.front());
  for (std::size_t i = 0; i < bp.size(); ++i) {
    out.push_back(bp[i]);
    if (i + 1 < bp.size())
      for (int s = 1; s <= 10; ++s) out.push_back(bp[i] + (bp[i + 1] - bp[i]) * s / 11.0);
  }
  out.push_back(bp.back() * 1.5 + 1.0);
  return out;
}

namespace {

std::vector<double> distances_from(const MetricMeasureSpace& space, PointId x) {
  std::vector<double> d;
  for (PointId y = 0; y < space.size(); ++y) d.push_back(space.dist(x, y));
  return d;
}

/// Visits every m-tuple of points (including zero entries of f).
template <class Fn>
void all_tuples(std::size_t n, int m, Fn&& fn) {
  std::vector<PointId> ys(m, 0);
  for (;;) {
    fn(ys);
    int j = m - 1;
    while (j >= 0 && ++ys[j] == n) {
      ys[j] = 0;
      --j;
    }
    if (j < 0) return;
  }
}

double weight(const FunctionTuple& f, const MetricMeasureSpace& space, const std::vector<PointId>& ys) {
  double w = 1.0;
  for (std::size_t j = 0; j < ys.size(); ++j) w *= f[j][ys[j]] * space.mass(ys[j]);
  return w;
}

bool contains_x(PointId x, const std::vector<PointId>& ys) {
  return std::find(ys.begin(), ys.end(), x) != ys.end();
}

bool member(const Cell& c, PointId x) { return std::find(c.members.begin(), c.members.end(), x) != c.members.end(); }

double integral_in_ball(const MetricMeasureSpace& space, const std::vector<double>& g, PointId c, double r) {
  double s = 0.0;
  for (PointId y = 0; y < space.size(); ++y)
    if (space.dist(c, y) <= r) s += g[y] * space.mass(y);
  return s;
}

double mass_in_ball(const MetricMeasureSpace& space, PointId c, double r) {
  double s = 0.0;
  for (PointId y = 0; y < space.size(); ++y)
    if (space.dist(c, y) <= r) s += space.mass(y);
  return s;
}

}  // namespace

double brute_truncated_T(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                         PointId x, double r, TruncMode mode) {
  check_budget(space, f.m());
  double sum = 0.0;
  all_tuples(space.size(), f.m(), [&](const std::vector<PointId>& ys) {
    if (contains_x(x, ys)) return;
    const double w = weight(f, space, ys);
    if (w == 0.0) return;
    bool outside;
    if (mode == TruncMode::L2) {
      double s = 0.0;
      for (PointId y : ys) s += space.dist(x, y) * space.dist(x, y);
      outside = s > r * r;
    } else {
      outside = false;
      for (PointId y : ys) outside = outside || space.dist(x, y) > r;
    }
    if (outside) sum += kernel(space, x, ys) * w;
  });
  return sum;
}

double brute_T_star(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
                    TruncMode mode) {
  check_budget(space, f.m());
  std::vector<double> bp;
  if (mode == TruncMode::Linf) {
    bp = distances_from(space, x);
  } else {
    all_tuples(space.size(), f.m(), [&](const std::vector<PointId>& ys) {
      double s = 0.0;
      for (PointId y : ys) s += space.dist(x, y) * space.dist(x, y);
      bp.push_back(std::sqrt(s));
    });
  }
  double best = 0.0;
  for (double r : dense_radii(bp)) best = std::max(best, std::abs(brute_truncated_T(kernel, space, f, x, r, mode)));
  return best;
}

double brute_M_lambda(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
                      const DominatingFunction& lambda) {
  check_budget(space, f.m());
  double best = 0.0;
  for (double r : dense_radii(distances_from(space, x))) {
    double prod = 1.0;
    for (int j = 0; j < f.m(); ++j) {
      double s = 0.0;
      for (PointId y = 0; y < space.size(); ++y)
        if (space.dist(x, y) <= r) s += std::abs(f[j][y]) * space.mass(y);
      prod *= s / lambda(x, r);
    }
    best = std::max(best, prod);
  }
  return best;
}

double brute_F(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f, PointId x,
               const Cell& cell) {
  check_budget(space, f.m());
  double sum = 0.0;
  all_tuples(space.size(), f.m(), [&](const std::vector<PointId>& ys) {
    if (contains_x(x, ys)) return;
    bool some_out = false;
    for (PointId y : ys) some_out = some_out || space.dist(cell.center, y) > 30.0 * cell.radius;
    if (some_out) sum += kernel(space, x, ys) * weight(f, space, ys);
  });
  return sum;
}

namespace {

std::vector<const Cell*> cells_under(const Lattice& lattice, CellId q0, PointId x) {
  const Cell& Q0 = lattice.cell(q0);
  std::vector<const Cell*> out;
  for (const Cell& P : lattice.cells()) {
    if (P.level < Q0.level || !member(P, x)) continue;
    bool inside = true;
    for (PointId y : P.members) inside = inside && member(Q0, y);
    if (inside) out.push_back(&P);
  }
  return out;
}

}  // namespace

double brute_grand_maximal(const Kernel& kernel, const MetricMeasureSpace& space, const FunctionTuple& f,
                           PointId x, CellId q0, const Lattice& lattice) {
  double best = 0.0;
  for (const Cell* P : cells_under(lattice, q0, x))
    for (PointId y : P->members) best = std::max(best, std::abs(brute_F(kernel, space, f, y, *P)));
  return best;
}

double brute_M_lambda_dyadic(const MetricMeasureSpace& space, const FunctionTuple& f, PointId x, CellId q0,
                             const Lattice& lattice, const DominatingFunction& lambda) {
  check_budget(space, f.m());
  double best = 0.0;
  for (const Cell* P : cells_under(lattice, q0, x)) {
    double prod = 1.0;
    for (int j = 0; j < f.m(); ++j) {
      double s = 0.0;
      for (PointId y = 0; y < space.size(); ++y)
        if (space.dist(P->center, y) <= 30.0 * P->radius) s += std::abs(f[j][y]) * space.mass(y);
      prod *= s / lambda(P->center, P->radius);
    }
    best = std::max(best, prod);
  }
  return best;
}

double brute_weighted_maximal(const MetricMeasureSpace& space, const std::vector<double>& f, PointId x,
                              const std::vector<double>& density, const Lattice& lattice, MaximalFamily family) {
  check_budget(space, 2);
  double best = 0.0;
  for (const Cell& c : lattice.cells()) {
    std::vector<PointId> set;
    if (family == MaximalFamily::Cells) {
      if (!member(c, x)) continue;
      set = c.members;
    } else {
      const double r = (family == MaximalFamily::Balls30 ? 30.0 : 200.0) * c.radius;
      if (space.dist(c.center, x) > r) continue;
      for (PointId y = 0; y < space.size(); ++y)
        if (space.dist(c.center, y) <= r) set.push_back(y);
    }
    double num = 0.0, den = 0.0;
    for (PointId y : set) {
      num += std::abs(f[y]) * density[y] * space.mass(y);
      den += density[y] * space.mass(y);
    }
    if (den > 0.0) best = std::max(best, num / den);
  }
  return best;
}

double brute_A(const FunctionTuple& f, const Cell& cell, const MetricMeasureSpace& space, double alpha) {
  const double den = mass_in_ball(space, cell.center, alpha * cell.radius);
  if (!(den > 0.0)) throw InvalidInput("zero denominator in A for cell " + std::to_string(cell.id));
  double prod = 1.0;
  for (int i = 0; i < f.m(); ++i) {
    std::vector<double> a(space.size());
    for (PointId y = 0; y < space.size(); ++y) a[y] = std::abs(f[i][y]);
    prod *= integral_in_ball(space, a, cell.center, 30.0 * cell.radius) / den;
  }
  return prod;
}

double brute_sparse_operator(const std::vector<SparseFamily>& layers, const FunctionTuple& f, PointId x,
                             const Lattice& lattice, const MetricMeasureSpace& space) {
  double total = 0.0;
  for (const auto& fam : layers) {
    double coeff = 1.0;
    for (int k = 0; k < fam.layer; ++k) coeff /= 100.0;
    for (CellId id : fam.cells) {
      const Cell& Q = lattice.cell(id);
      if (member(Q, x)) total += coeff * brute_A(f, Q, space, fam.alpha);
    }
  }
  return total;
}

namespace {

double harmonic(const std::vector<double>& p) {
  double s = 0.0;
  for (double q : p) s += 1.0 / q;
  return 1.0 / s;
}

}  // namespace

std::vector<double> brute_nu_w(const WeightTuple& w, const ExponentTuple& p) {
  const double pp = harmonic(p.values());
  std::vector<double> out(w[0].size());
  for (std::size_t x = 0; x < out.size(); ++x) {
    double lg = 0.0;
    for (int j = 0; j < w.m(); ++j) lg += pp / p.values()[j] * std::log(w[j][x]);
    out[x] = std::exp(lg);
  }
  return out;
}

double brute_ap_characteristic(const WeightTuple& w, const ExponentTuple& p, double rho,
                               const MetricMeasureSpace& space) {
  check_budget(space, w.m());
  const auto& ps = p.values();
  const double pp = harmonic(ps);
  const auto nu = brute_nu_w(w, p);
  double best = 0.0;
  for (PointId x = 0; x < space.size(); ++x)
    for (double r : dense_radii(distances_from(space, x))) {
      const double den = mass_in_ball(space, x, rho * r);
      if (!(den > 0.0)) continue;
      double v = std::pow(integral_in_ball(space, nu, x, r) / den, 1.0 / pp);
      for (int j = 0; j < w.m(); ++j) {
        if (ps[j] == 1.0) {
          double lo = INFINITY;
          for (PointId y = 0; y < space.size(); ++y)
            if (space.dist(x, y) <= r && space.mass(y) > 0.0) lo = std::min(lo, w[j][y]);
          v /= lo;
        } else {
          const double pc = ps[j] / (ps[j] - 1.0);
          std::vector<double> s(space.size());
          for (PointId y = 0; y < space.size(); ++y) s[y] = std::pow(w[j][y], 1.0 - pc);
          v *= std::pow(integral_in_ball(space, s, x, r) / den, 1.0 / pc);
        }
      }
      best = std::max(best, v);
    }
  return best;
}

double brute_c_omega(const WeightTuple& w, const ExponentTuple& p, double alpha, const MetricMeasureSpace& space,
                     const Lattice& lattice, const std::vector<SparseFamily>& layers) {
  const auto& ps = p.values();
  const int m = static_cast<int>(ps.size());
  const double pp = harmonic(ps);
  std::vector<double> pc(m);
  for (int i = 0; i < m; ++i) pc[i] = ps[i] / (ps[i] - 1.0);
  const auto nu = brute_nu_w(w, p);
  std::vector<std::vector<double>> sig(m, std::vector<double>(space.size()));
  for (int i = 0; i < m; ++i)
    for (PointId y = 0; y < space.size(); ++y) sig[i][y] = std::pow(w[i][y], 1.0 - pc[i]);
  auto set_integral = [&](const std::vector<double>& g, const std::vector<PointId>& s) {
    double t = 0.0;
    for (PointId y : s) t += g[y] * space.mass(y);
    return t;
  };
  const double max_pc = *std::max_element(pc.begin(), pc.end());
  double best = 0.0;
  if (pp <= 1.0) {
    std::size_t i0 = 0;
    for (int i = 1; i < m; ++i)
      if (ps[i] < ps[i0]) i0 = i;
    const double p0c = pc[i0];
    for (const Cell& Q : lattice.cells()) {
      double muQ = 0.0;
      for (PointId y : Q.members) muQ += space.mass(y);
      const double muB = mass_in_ball(space, Q.center, alpha * Q.radius);
      if (!(muQ > 0.0) || !(muB > 0.0)) continue;
      double num = std::pow(set_integral(nu, Q.members), p0c);
      for (int i = 0; i < m; ++i)
        num *= std::pow(integral_in_ball(space, sig[i], Q.center, alpha * Q.radius), pp * p0c / pc[i]);
      const double den = std::pow(muB, m * pp) * std::pow(muQ, m * pp * (p0c - 1.0));
      best = std::max(best, num / den);
    }
    return best;
  }
  const double ppc = pp / (pp - 1.0);
  const bool case2 = pp >= max_pc;
  const double e = case2 ? 1.0 : max_pc;
  for (const auto& fam : layers)
    for (std::size_t k = 0; k < fam.cells.size(); ++k) {
      const Cell& Q = lattice.cell(fam.cells[k]);
      const auto& E = fam.E[k];
      const double muB = mass_in_ball(space, Q.center, alpha * Q.radius);
      const double nuE = set_integral(nu, E);
      if (!(muB > 0.0) || !(nuE > 0.0)) continue;
      double num = std::pow(set_integral(nu, Q.members), e);
      for (int i = 0; i < m; ++i) num *= std::pow(integral_in_ball(space, sig[i], Q.center, alpha * Q.radius), e);
      double den = std::pow(muB, m * e) * std::pow(nuE, e / ppc);
      for (int i = 0; i < m; ++i) den *= std::pow(set_integral(sig[i], E), e / ps[i]);
      best = std::max(best, num / den);
    }
  return best;
}

}  // namespace sdom::oracle
