#include "sdom/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

namespace sdom {

const char* to_string(LatticeMode mode) { return mode == LatticeMode::Strict ? "strict" : "lab"; }

LatticeMode parse_lattice_mode(const std::string& s) {
  if (s == "strict") return LatticeMode::Strict;
  if (s == "lab") return LatticeMode::Lab;
  throw InvalidInput("unknown lattice mode '" + s + "' (expected strict|lab)");
}

double LatticeConstants::scale(int k) const { return std::pow(A0, -static_cast<double>(k)); }

bool Cell::contains(PointId x) const { return std::binary_search(members.begin(), members.end(), x); }

Lattice::Lattice(LatticeConstants constants, std::vector<Cell> cells)
    : constants_(constants), cells_(std::move(cells)) {
  reindex();
}

void Lattice::reindex() {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].id = i;
    cells_[i].children.clear();
  }
  for (auto& c : cells_) {
    if (c.parent) {
      if (*c.parent >= cells_.size()) throw InvalidInput("cell parent id out of range");
      cells_[*c.parent].children.push_back(c.id);
    }
  }
}

std::vector<CellId> Lattice::level(int k) const {
  std::vector<CellId> out;
  for (const auto& c : cells_)
    if (c.level == k) out.push_back(c.id);
  return out;
}

std::optional<CellId> Lattice::cell_of(PointId x, int k) const {
  for (const auto& c : cells_)
    if (c.level == k && c.contains(x)) return c.id;
  return std::nullopt;
}

std::vector<CellId> Lattice::descendants(CellId id) const {
  std::vector<CellId> out{id};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (CellId ch : cells_.at(out[i]).children) out.push_back(ch);
  return out;
}

std::vector<CellId> Lattice::chain(CellId id, PointId x) const {
  std::vector<CellId> out;
  if (!cells_.at(id).contains(x)) return out;
  CellId cur = id;
  out.push_back(cur);
  for (;;) {
    bool found = false;
    for (CellId ch : cells_[cur].children)
      if (cells_[ch].contains(x)) {
        cur = ch;
        out.push_back(cur);
        found = true;
        break;
      }
    if (!found) break;
  }
  return out;
}

bool Lattice::is_ancestor(CellId ancestor, CellId cell) const {
  std::optional<CellId> cur = cell;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = cells_.at(*cur).parent;
  }
  return false;
}

LatticeConstants default_constants(const MetricMeasureSpace& space, LatticeMode mode, double C0,
                                   double A0) {
  LatticeConstants c;
  c.mode = mode;
  c.C0 = C0;
  c.A0 = A0;
  if (!(A0 > 1.0)) throw InvalidInput("A0 must exceed 1");
  const double diam = space.diameter();
  int k = 0;
  while (c.scale(k) < diam) --k;
  while (c.scale(k + 1) >= diam && diam > 0.0) ++k;
  c.k_min = k;
  const double mind = space.min_positive_distance();
  int kmax = c.k_min;
  if (mind > 0.0)
    while (!(10.0 * C0 * c.scale(kmax) < mind)) ++kmax;
  c.k_max = kmax;
  return c;
}

namespace {

struct Proto {
  PointId center;
  double radius;
  PointSet members;
  std::vector<std::size_t> children;  // indices into the finer level
};

bool ball_doubling(const MetricMeasureSpace& space, PointId z, double r, double C0) {
  return space.ball_measure(z, 100.0 * r) <= C0 * space.ball_measure(z, r);
}

double doubling_radius(const MetricMeasureSpace& space, PointId z, double s, double C0) {
  std::vector<double> cand{s};
  const double top = C0 * s;
  for (PointId y = 0; y < space.size(); ++y) {
    const double d = space.dist(z, y);
    if (d > s && d <= top) cand.push_back(d);
    const double d100 = d / 100.0;
    if (d100 > s && d100 <= top) cand.push_back(d100);
  }
  std::sort(cand.begin(), cand.end());
  for (double r : cand)
    if (ball_doubling(space, z, r, C0)) return r;
  return s;
}

// Smallest r >= lo with dist(z, p) <= 30 r for all p in `ball`.
double covering_radius(const MetricMeasureSpace& space, PointId z, const PointSet& ball, double lo) {
  double r = lo;
  for (PointId p : ball) {
    const double d = space.dist(z, p);
    if (30.0 * r < d) {
      r = d / 30.0;
      while (30.0 * r < d) r = std::nextafter(r, std::numeric_limits<double>::infinity());
    }
  }
  return r;
}

}  // namespace

Lattice build_lattice(const MetricMeasureSpace& space, const LatticeConstants& constants,
                      std::uint64_t tie_break_seed) {
  const double C0 = constants.C0;
  const double A0 = constants.A0;
  if (!(C0 > 1.0)) throw InvalidInput("C0 must exceed 1");
  if (constants.mode == LatticeMode::Strict && !(A0 > 5000.0 * C0))
    throw InvalidInput("strict mode requires A0 > 5000 C0");
  if (!(A0 > 1.0)) throw InvalidInput("A0 must exceed 1");
  if (constants.k_max < constants.k_min) throw InvalidInput("k_max must be >= k_min");

  // Center preference: mass descending, then a seeded key among exact ties, then id.
  std::vector<PointId> order(space.support().begin(), space.support().end());
  std::vector<std::uint64_t> key(space.size(), 0);
  if (tie_break_seed != 0) {
    std::mt19937_64 rng(tie_break_seed);
    for (auto& k : key) k = rng();
  }
  std::stable_sort(order.begin(), order.end(), [&](PointId a, PointId b) {
    if (space.mass(a) != space.mass(b)) return space.mass(a) > space.mass(b);
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });

  // Pseudo-level below k_max: one singleton per support point.
  std::vector<Proto> finer;
  for (PointId p : space.support()) finer.push_back({p, 0.0, {p}, {}});

  std::vector<std::vector<Proto>> levels;  // finest first
  for (int k = constants.k_max; k >= constants.k_min; --k) {
    const double s = constants.scale(k);
    const double sep = 10.0 * C0 * s;
    std::vector<PointId> centers;
    for (PointId z : order) {
      bool far = true;
      for (PointId c : centers)
        if (!(space.dist(z, c) > sep)) {
          far = false;
          break;
        }
      if (far) centers.push_back(z);
    }
    std::sort(centers.begin(), centers.end());
    std::vector<Proto> cur;
    for (PointId z : centers) cur.push_back({z, s, {}, {}});
    for (std::size_t ci = 0; ci < finer.size(); ++ci) {
      const PointId zc = finer[ci].center;
      std::size_t best = 0;
      for (std::size_t j = 1; j < cur.size(); ++j)
        if (space.dist(zc, cur[j].center) < space.dist(zc, cur[best].center)) best = j;
      cur[best].children.push_back(ci);
      cur[best].members.insert(cur[best].members.end(), finer[ci].members.begin(),
                               finer[ci].members.end());
    }
    for (auto& q : cur) {
      std::sort(q.members.begin(), q.members.end());
      double r = doubling_radius(space, q.center, s, C0);
      for (std::size_t ci : q.children) {
        const Proto& ch = finer[ci];
        r = covering_radius(space, q.center, space.ball_points({ch.center, 30.0 * ch.radius}), r);
      }
      q.radius = r;
    }
    levels.push_back(cur);
    finer = std::move(cur);
  }

  // Assign ids coarse to fine.
  std::vector<Cell> cells;
  std::vector<std::vector<CellId>> ids(levels.size());
  for (std::size_t li = levels.size(); li-- > 0;) {
    const int k = constants.k_max - static_cast<int>(li);
    for (auto& q : levels[li]) {
      Cell c;
      c.id = cells.size();
      c.level = k;
      c.members = q.members;
      c.center = q.center;
      c.radius = q.radius;
      ids[li].push_back(c.id);
      cells.push_back(std::move(c));
    }
  }
  for (std::size_t li = 1; li < levels.size(); ++li)
    for (std::size_t qi = 0; qi < levels[li].size(); ++qi)
      for (std::size_t ci : levels[li][qi].children) cells[ids[li - 1][ci]].parent = ids[li][qi];

  Lattice lattice(constants, std::move(cells));
  lattice = classify_doubling(std::move(lattice), space, C0);
  const auto rep = check_lattice(lattice, space);
  if (!rep.ok()) {
    int lvl = 0;
    if (!rep.violations.front().ids.empty() && rep.violations.front().ids.front() < lattice.size())
      lvl = lattice.cell(rep.violations.front().ids.front()).level;
    throw InfeasibleConstants("lattice constants infeasible: " + rep.violations.front().kind + " (" +
                                  rep.violations.front().detail + ") at level " + std::to_string(lvl),
                              lvl);
  }
  return lattice;
}

Lattice classify_doubling(Lattice lattice, const MetricMeasureSpace& space, double C0) {
  for (auto& c : lattice.mutable_cells()) c.is_doubling = ball_doubling(space, c.center, c.radius, C0);
  return lattice;
}

ValidationReport check_lattice(const Lattice& lattice, const MetricMeasureSpace& space) {
  ValidationReport rep;
  const auto& K = lattice.constants();
  rep.subject = std::string("lattice (") + to_string(K.mode) + " mode)";
  if (!(K.C0 > 1.0)) rep.add({"constants", "C0 must exceed 1", {}});
  if (K.mode == LatticeMode::Strict && !(K.A0 > 5000.0 * K.C0))
    rep.add({"constants", "strict mode requires A0 > 5000 C0", {}});

  const auto& cells = lattice.cells();
  const std::size_t n = space.size();
  for (const auto& c : cells) {
    ++rep.checked;
    if (!std::is_sorted(c.members.begin(), c.members.end()) ||
        std::adjacent_find(c.members.begin(), c.members.end()) != c.members.end())
      rep.add({"members", "member list not sorted/unique", {c.id}});
    for (PointId p : c.members)
      if (p >= n || !space.in_support(p)) rep.add({"members", "member outside W", {c.id, p}});
    if (c.level < K.k_min || c.level > K.k_max) rep.add({"level", "level outside [k_min, k_max]", {c.id}});
  }

  // Per-level partition of W.
  for (int k = K.k_min; k <= K.k_max; ++k) {
    std::vector<int> count(n, 0);
    std::vector<CellId> owner(n, 0);
    for (const auto& c : cells) {
      if (c.level != k) continue;
      for (PointId p : c.members)
        if (p < n) {
          if (count[p] > 0) rep.add({"partition", "point in two cells of level " + std::to_string(k), {owner[p], c.id, p}});
          ++count[p];
          owner[p] = c.id;
        }
    }
    for (PointId p : space.support())
      if (count[p] == 0) rep.add({"partition", "point of W uncovered at level " + std::to_string(k), {p}});
  }

  for (const auto& c : cells) {
    const double s = K.scale(c.level);
    // Nesting and hierarchy consistency.
    if (c.level > K.k_min) {
      if (!c.parent) {
        rep.add({"nesting", "cell below k_min without parent", {c.id}});
      } else {
        const Cell& par = cells.at(*c.parent);
        if (par.level != c.level - 1) rep.add({"nesting", "parent not on the next coarser level", {c.id, par.id}});
        if (!is_subset(c.members, par.members)) rep.add({"nesting", "cell not contained in its parent", {c.id, par.id}});
        // 30B monotonicity.
        const auto inner = space.ball_points(c.ball(30.0));
        const auto outer = space.ball_points(par.ball(30.0));
        if (!is_subset(inner, outer)) rep.add({"30B-monotone", "30B(Q) not inside 30B(parent)", {c.id, par.id}});
      }
    }
    if (!c.children.empty()) {
      PointSet u;
      for (CellId ch : c.children) u.insert(u.end(), cells.at(ch).members.begin(), cells.at(ch).members.end());
      std::sort(u.begin(), u.end());
      if (u != c.members) rep.add({"children", "children do not partition the cell", {c.id}});
    }
    // Radius band.
    if (!(c.radius >= s && c.radius <= K.C0 * s))
      rep.add({"radius band", "r(Q) outside [A0^-k, C0 A0^-k]", {c.id}, c.radius, c.radius, K.C0 * s});
    if (c.center >= n || !space.in_support(c.center)) {
      rep.add({"center", "center not in W", {c.id}});
      continue;
    }
    // W cap B(Q) within Q within 28B(Q).
    for (PointId p : space.ball_points(c.ball()))
      if (space.in_support(p) && !c.contains(p)) rep.add({"sandwich-inner", "point of W cap B(Q) outside Q", {c.id, p}});
    for (PointId p : c.members)
      if (p < n && space.dist(c.center, p) > 28.0 * c.radius)
        rep.add({"sandwich-outer", "member outside 28B(Q)", {c.id, p}});
    const bool dbl = ball_doubling(space, c.center, c.radius, K.C0);
    if (dbl != c.is_doubling) rep.add({"doubling-flag", "doubling flag inconsistent with mu(100B) <= C0 mu(B)", {c.id}});
    if (K.mode == LatticeMode::Strict && !dbl) {
      if (c.radius != s) rep.add({"non-doubling radius", "non-doubling cell with r(Q) != A0^-k", {c.id}, c.radius});
      std::vector<double> cs;
      for (int i = 1; i <= static_cast<int>(std::ceil(K.C0)); ++i) cs.push_back(i);
      cs.push_back(K.C0);
      for (double cc : cs) {
        const double lhs = space.ball_measure(c.center, cc * c.radius);
        const double rhs = space.ball_measure(c.center, 100.0 * cc * c.radius) / K.C0;
        if (lhs > rhs) rep.add({"non-doubling decay", "mu(cB) > mu(100cB)/C0", {c.id}, cc * c.radius, lhs, rhs});
      }
    }
  }

  // 5B(Q) pairwise disjoint within each level (as point sets of X).
  for (int k = K.k_min; k <= K.k_max; ++k) {
    const auto ids = lattice.level(k);
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        const Cell& A = cells[ids[a]];
        const Cell& B = cells[ids[b]];
        if (A.center >= n || B.center >= n) continue;
        for (PointId p = 0; p < n; ++p)
          if (space.dist(p, A.center) <= 5.0 * A.radius && space.dist(p, B.center) <= 5.0 * B.radius) {
            rep.add({"5B-disjoint", "5B(Q) balls intersect", {A.id, B.id, p}});
            break;
          }
      }
  }
  return rep;
}

double theta(const Cell& cell, const MetricMeasureSpace& space, const DominatingFunction& lambda,
             double alpha, int m) {
  const double lam = lambda(cell.center, cell.radius);
  if (!(lam > 0.0)) throw InvalidInput("dominating function vanishes at cell " + std::to_string(cell.id));
  const double mu = space.ball_measure(cell.center, alpha * cell.radius);
  return std::pow(mu / lam, m);
}

ThetaDecayReport theta_decay_check(const Lattice& lattice, const MetricMeasureSpace& space,
                                   const DominatingFunction& lambda, double alpha, int m, int lab_l0,
                                   double comparability) {
  ThetaDecayReport rep;
  const auto& K = lattice.constants();
  rep.mode = K.mode;
  int l0 = 0;
  while (std::pow(100.0, l0 + 1) < K.C0 / alpha) ++l0;
  rep.l0 = l0 > 0 ? l0 : lab_l0;

  std::vector<double> th(lattice.size());
  for (const auto& c : lattice.cells()) {
    th[c.id] = theta(c, space, lambda, alpha, m);
    rep.sup_theta = std::max(rep.sup_theta, th[c.id]);
  }

  std::function<void(std::vector<CellId>&)> walk = [&](std::vector<CellId>& path) {
    bool extended = false;
    for (CellId ch : lattice.cell(path.back()).children) {
      if (lattice.cell(ch).is_doubling) continue;
      extended = true;
      path.push_back(ch);
      walk(path);
      path.pop_back();
    }
    if (!extended && path.size() > 1) {
      ThetaChain chain;
      chain.cells = path;
      for (std::size_t k = 0; k < path.size(); ++k) {
        const double ratio = th[path[0]] > 0.0 ? th[path[k]] / th[path[0]] : (th[path[k]] > 0.0 ? INFINITY : 1.0);
        const double bound = comparability * std::pow(K.C0, -static_cast<double>(k) * rep.l0);
        chain.ratios.push_back(ratio);
        chain.bounds.push_back(bound);
        if (ratio > bound) chain.ok = false;
      }
      if (!chain.ok) ++rep.violations;
      rep.chains.push_back(std::move(chain));
    }
  };
  for (const auto& c : lattice.cells()) {
    if (!(c.is_doubling || !c.parent)) continue;
    std::vector<CellId> path{c.id};
    walk(path);
  }
  return rep;
}

}  // namespace sdom
