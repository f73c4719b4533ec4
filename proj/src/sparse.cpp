#include "sdom/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kernel_table.hpp"
#include "tuples.hpp"

namespace sdom {

using detail::for_each_tuple;
using detail::hits;
using detail::KernelTable;
using detail::slot_entries;

double SparseFamily::coefficient() const { return std::pow(100.0, -static_cast<double>(layer)); }

double sparse_operator(const SparseFamily& family, const FunctionTuple& f, PointId x, const Lattice& lattice,
                       const MetricMeasureSpace& space) {
  double sum = 0.0;
  for (CellId id : family.cells) {
    const Cell& Q = lattice.cell(id);
    if (Q.contains(x)) sum += bilinear_average_A(f, Q, space, family.alpha);
  }
  return sum;
}

double sparse_operator(const std::vector<SparseFamily>& layers, const FunctionTuple& f, PointId x,
                       const Lattice& lattice, const MetricMeasureSpace& space) {
  double sum = 0.0;
  for (const auto& fam : layers)
    if (!fam.cells.empty()) sum += fam.coefficient() * sparse_operator(fam, f, x, lattice, space);
  return sum;
}

ValidationReport check_sparseness(const SparseFamily& family, const Lattice& lattice,
                                  const MetricMeasureSpace& space, double eta_min) {
  ValidationReport rep;
  rep.subject = "sparse family layer " + std::to_string(family.layer);
  rep.worst_ratio = 1.0;
  if (family.E.size() != family.cells.size()) {
    rep.add({"shape", "E has " + std::to_string(family.E.size()) + " sets for " +
                          std::to_string(family.cells.size()) + " cells", {}});
    return rep;
  }
  std::vector<long> owner(space.size(), -1);
  for (std::size_t i = 0; i < family.cells.size(); ++i) {
    const CellId id = family.cells[i];
    if (id >= lattice.size()) {
      rep.add({"cell", "unknown cell " + std::to_string(id), {id}});
      continue;
    }
    const Cell& Q = lattice.cell(id);
    const PointSet& E = family.E[i];
    ++rep.checked;
    if (!is_subset(E, Q.members)) rep.add({"containment", "E(Q) not inside Q", {id}});
    for (PointId p : E) {
      if (p >= space.size()) {
        rep.add({"containment", "E(Q) has unknown point " + std::to_string(p), {id}});
        continue;
      }
      if (owner[p] >= 0) {
        const CellId other = family.cells[owner[p]];
        rep.add({"disjointness",
                 "E sets of cells " + std::to_string(other) + " and " + std::to_string(id) + " share point " +
                     std::to_string(p),
                 {other, id, p}});
      } else {
        owner[p] = static_cast<long>(i);
      }
    }
    const double mq = space.measure(Q.members);
    const double me = space.measure(E);
    const double ratio = mq > 0.0 ? me / mq : 1.0;
    if (ratio < rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_witness = {id};
    }
    if (me < eta_min * mq) {
      Violation v{"measure", "mu(E(Q)) below eta mu(Q)", {id}};
      v.value = me;
      v.bound = eta_min * mq;
      rep.add(std::move(v));
    }
  }
  return rep;
}

namespace {

/// Per-cell sup values over descendants of q0 (NaN elsewhere).
using CellValues = std::vector<double>;

CellValues cell_values_T(const KernelTable& table, const MetricMeasureSpace& space, const FunctionTuple& f,
                         CellId q0, const Lattice& lattice) {
  CellValues G(lattice.size(), NAN);
  const auto slots = slot_entries(space, f);
  std::vector<char> in30(space.size());
  for (CellId pid : lattice.descendants(q0)) {
    const Cell& P = lattice.cell(pid);
    std::fill(in30.begin(), in30.end(), 0);
    for (PointId y : space.ball_points(P.ball(30.0))) in30[y] = 1;
    double g = 0.0;
    for (PointId x : P.members) {
      double sum = 0.0;
      for_each_tuple(slots, [&](std::span<const PointId> ys, double w) {
        if (hits(x, ys)) return;
        for (PointId y : ys)
          if (!in30[y]) {
            sum += table(x, ys) * w;
            return;
          }
      });
      g = std::max(g, std::abs(sum));
    }
    G[pid] = g;
  }
  return G;
}

CellValues cell_values_dyadic(const MetricMeasureSpace& space, const FunctionTuple& f, CellId q0,
                              const Lattice& lattice, const DominatingFunction& lambda) {
  CellValues G(lattice.size(), NAN);
  const FunctionTuple a = f.abs();
  for (CellId pid : lattice.descendants(q0)) {
    const Cell& P = lattice.cell(pid);
    const double lam = lambda(P.center, P.radius);
    double prod = 1.0;
    for (int j = 0; j < a.m(); ++j) prod *= space.ball_integral(P.center, 30.0 * P.radius, a[j]) / lam;
    G[pid] = prod;
  }
  return G;
}

double chain_max(const CellValues& G, const Lattice& lattice, CellId from, PointId x) {
  double best = 0.0;
  for (CellId c : lattice.chain(from, x)) best = std::max(best, G[c]);
  return best;
}

void require_root(const FunctionTuple& f, CellId q0, const Lattice& lattice, const MetricMeasureSpace& space) {
  const Cell& Q0 = lattice.cell(q0);
  if (!Q0.is_doubling) throw InvalidInput("cell " + std::to_string(q0) + " is not doubling");
  const PointSet ball = space.ball_points(Q0.ball(30.0));
  if (!is_subset(f.support(), ball))
    throw InvalidInput("support of f is not inside 30B of cell " + std::to_string(q0));
}

StoppingTimeResult decompose(const CellValues& G, const FunctionTuple& f, CellId q0, const Lattice& lattice,
                             const MetricMeasureSpace& space, double alpha, double M_init) {
  if (!(M_init > 0.0) || !std::isfinite(M_init)) throw InvalidInput("M_init must be positive and finite");
  const Cell& Q0 = lattice.cell(q0);
  StoppingTimeResult res;
  res.root = q0;
  res.average = bilinear_average_A(f, Q0, space, alpha);
  res.mu_root = space.measure(Q0.members);

  std::vector<double> v(space.size(), 0.0);
  for (PointId x : Q0.members) v[x] = chain_max(G, lattice, q0, x);

  double M = M_init;
  for (int iter = 0;; ++iter) {
    res.omega.clear();
    for (PointId x : Q0.members)
      if (v[x] > M * res.average) res.omega.push_back(x);
    res.mu_omega = space.measure(res.omega);
    if (res.mu_omega <= 0.5 * res.mu_root) break;
    M *= 2.0;
    if (iter > 4000 || !std::isfinite(M))
      throw BudgetExceeded("stopping time on cell " + std::to_string(q0) + ": no threshold M reaches mu(Omega) <= mu(Q0)/2");
  }
  res.M = M;

  std::vector<char> in_omega(space.size(), 0);
  for (PointId x : res.omega) in_omega[x] = 1;
  auto inside_omega = [&](const Cell& c) {
    for (PointId x : c.members)
      if (!in_omega[x]) return false;
    return true;
  };

  std::vector<CellId> stack(Q0.children.rbegin(), Q0.children.rend());
  while (!stack.empty()) {
    const CellId id = stack.back();
    stack.pop_back();
    ++res.cells_visited;
    const Cell& c = lattice.cell(id);
    bool any = false;
    for (PointId x : c.members) any = any || in_omega[x];
    if (!any) continue;
    if (inside_omega(c)) {
      res.maximal.push_back(id);
      continue;
    }
    for (auto it = c.children.rbegin(); it != c.children.rend(); ++it) stack.push_back(*it);
  }
  std::sort(res.maximal.begin(), res.maximal.end());

  std::vector<char> covered(space.size(), 0);
  for (CellId id : res.maximal)
    for (PointId x : lattice.cell(id).members) covered[x] = 1;
  for (PointId x : res.omega)
    if (!covered[x]) res.uncovered.push_back(x);

  std::vector<CellId> current;
  for (CellId id : res.maximal) (lattice.cell(id).is_doubling ? res.F : current).push_back(id);
  while (!current.empty()) {
    res.C.push_back(current);
    std::vector<CellId> next;
    for (CellId id : current)
      for (CellId ch : lattice.cell(id).children) {
        ++res.cells_visited;
        (lattice.cell(ch).is_doubling ? res.F : next).push_back(ch);
      }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  std::sort(res.F.begin(), res.F.end());

  res.property1 = res.mu_omega <= 0.5 * res.mu_root;

  bool p2 = true;
  auto disjoint_all = [&](const std::vector<CellId>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (intersects(lattice.cell(ids[i]).members, lattice.cell(ids[j]).members)) return false;
    return true;
  };
  for (CellId id : res.F) p2 = p2 && inside_omega(lattice.cell(id));
  p2 = p2 && disjoint_all(res.F);
  for (const auto& cn : res.C) {
    p2 = p2 && disjoint_all(cn);
    for (CellId q : cn) {
      const Cell& Q = lattice.cell(q);
      p2 = p2 && inside_omega(Q);
      for (CellId pid : res.F) {
        const Cell& P = lattice.cell(pid);
        if (!is_subset(P.members, Q.members) && intersects(P.members, Q.members)) p2 = false;
      }
    }
  }
  res.property2 = p2;

  std::map<CellId, double> avg;
  for (const auto& cn : res.C)
    for (CellId q : cn) avg[q] = bilinear_average_A(f, lattice.cell(q), space, alpha);
  std::vector<double> fsum(space.size(), 0.0), csum(space.size(), res.average);
  for (CellId pid : res.F)
    for (PointId x : lattice.cell(pid).members) fsum[x] += chain_max(G, lattice, pid, x);
  for (std::size_t n = 0; n < res.C.size(); ++n) {
    const double coeff = std::pow(100.0, -static_cast<double>(n + 1));
    for (CellId q : res.C[n])
      for (PointId x : lattice.cell(q).members) csum[x] += coeff * avg[q];
  }
  double constant = 0.0;
  for (PointId x : Q0.members) {
    const double excess = v[x] - fsum[x];
    if (excess <= 0.0) continue;
    constant = std::max(constant, csum[x] > 0.0 ? excess / csum[x] : INFINITY);
  }
  res.constant = constant;
  bool p3 = std::isfinite(constant);
  if (p3)
    for (PointId x : Q0.members)
      if (v[x] > (fsum[x] + constant * csum[x]) * (1.0 + 1e-12)) p3 = false;
  res.property3 = p3;
  return res;
}

}  // namespace

StoppingTimeResult stopping_time_decompose(const Kernel& kernel, const FunctionTuple& f, CellId q0,
                                           const Lattice& lattice, const MetricMeasureSpace& space,
                                           const DominatingFunction& lambda, double alpha, double M_init) {
  (void)lambda;
  f.validate(space, kernel.m());
  require_root(f, q0, lattice, space);
  const KernelTable table(kernel, space);
  return decompose(cell_values_T(table, space, f, q0, lattice), f, q0, lattice, space, alpha, M_init);
}

StoppingTimeResult stopping_time_decompose_maximal(const FunctionTuple& f, CellId q0, const Lattice& lattice,
                                                   const MetricMeasureSpace& space,
                                                   const DominatingFunction& lambda, double alpha,
                                                   double M_init) {
  f.validate(space, f.m());
  require_root(f, q0, lattice, space);
  return decompose(cell_values_dyadic(space, f, q0, lattice, lambda), f, q0, lattice, space, alpha, M_init);
}

bool DominationResult::certificates_ok() const {
  for (const auto& c : certificates)
    if (!c.ok()) return false;
  return true;
}

CellId select_root(const Lattice& lattice, const MetricMeasureSpace& space, const PointSet& domain,
                   const FunctionTuple& f) {
  PointSet dom_w;
  for (PointId x : domain)
    if (space.in_support(x)) dom_w.push_back(x);
  if (dom_w.empty()) throw InvalidInput("domain contains no point of positive mass");
  PointSet need = domain;
  const PointSet supp = f.support();
  need.insert(need.end(), supp.begin(), supp.end());
  std::sort(need.begin(), need.end());
  need.erase(std::unique(need.begin(), need.end()), need.end());
  const auto& K = lattice.constants();
  for (int k = K.k_max; k >= K.k_min; --k)
    for (CellId id : lattice.level(k)) {
      const Cell& c = lattice.cell(id);
      if (!c.is_doubling || !is_subset(dom_w, c.members)) continue;
      if (is_subset(need, space.ball_points(c.ball(30.0)))) return id;
    }
  throw InvalidInput("no doubling cell Q0 with the domain inside 30B(Q0); lower lattice.k_min to add coarser levels");
}

namespace {

double t_star_table(const KernelTable& table, const MetricMeasureSpace& space,
                    const std::vector<std::vector<detail::SlotEntry>>& slots, PointId x, TruncMode mode) {
  std::vector<std::pair<double, double>> terms;
  for_each_tuple(slots, [&](std::span<const PointId> ys, double w) {
    if (hits(x, ys)) return;
    double g = 0.0;
    for (PointId y : ys) {
      const double d = space.dist(x, y);
      g = mode == TruncMode::L2 ? g + d * d : std::max(g, d);
    }
    terms.emplace_back(g, table(x, ys) * w);
  });
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = 0.0, suffix = 0.0;
  for (std::size_t i = terms.size(); i-- > 0;) {
    suffix += terms[i].second;
    if (i == 0 || terms[i - 1].first != terms[i].first) best = std::max(best, std::abs(suffix));
  }
  return best;
}

SlackRow slack_row(PointId x, double t, double s) {
  double ratio = 0.0;
  if (t > 0.0) ratio = s > 0.0 ? t / s : INFINITY;
  return {x, t, s, ratio};
}

}  // namespace

DominationResult build_sparse_domination(const Kernel& kernel, const FunctionTuple& f, PointSet domain,
                                         const Lattice& lattice, const MetricMeasureSpace& space,
                                         const DominatingFunction& lambda, double alpha,
                                         const DominationConfig& config) {
  (void)lambda;
  f.validate(space, kernel.m());
  for (const auto& fj : f.f)
    for (double v : fj)
      if (v < 0.0) throw InvalidInput("sparse domination requires a nonnegative function tuple");
  if (config.K_max < 1) throw InvalidInput("K_max must be at least 1");
  if (domain.empty())
    for (PointId x = 0; x < space.size(); ++x) domain.push_back(x);
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  for (PointId x : domain) space.require_point(x);

  DominationResult out;
  out.alpha = alpha;
  out.domain = domain;
  out.root = select_root(lattice, space, domain, f);
  const KernelTable table(kernel, space);

  struct Node {
    CellId cell;
    int depth;
  };
  struct Pending {
    CellId cell;
    int n;
    std::vector<CellId> inner_f;  // F cells of the same node inside this cell
  };
  std::vector<Node> queue{{out.root, 0}};
  std::map<CellId, PointSet> omega_of;
  std::vector<CellId> layer0;
  std::vector<Pending> pending;

  for (std::size_t head = 0; head < queue.size(); ++head) {
    if (queue.size() > config.max_nodes)
      throw BudgetExceeded("sparse domination exceeded " + std::to_string(config.max_nodes) + " recursion nodes");
    const Node node = queue[head];
    const Cell& R = lattice.cell(node.cell);
    const FunctionTuple fn = f.restricted(space.ball_points(R.ball(30.0)));
    StoppingTimeResult st =
        decompose(cell_values_T(table, space, fn, node.cell, lattice), fn, node.cell, lattice, space, alpha,
                  config.M_init);
    out.cells_visited += st.cells_visited;
    out.depth = std::max(out.depth, node.depth);
    layer0.push_back(node.cell);
    omega_of[node.cell] = st.omega;
    for (std::size_t n = 0; n < st.C.size(); ++n)
      for (CellId q : st.C[n]) {
        Pending p{q, static_cast<int>(n + 1), {}};
        const Cell& Q = lattice.cell(q);
        for (CellId pid : st.F)
          if (is_subset(lattice.cell(pid).members, Q.members)) p.inner_f.push_back(pid);
        pending.push_back(std::move(p));
      }
    for (CellId pid : st.F) queue.push_back({pid, node.depth + 1});
    out.certificates.push_back(std::move(st));
  }
  out.nodes = queue.size();

  int top = 0;
  for (const auto& p : pending) top = std::max(top, std::min(p.n, config.K_max));
  out.layers.resize(top + 1);
  for (int k = 0; k <= top; ++k) {
    out.layers[k].layer = k;
    out.layers[k].alpha = alpha;
  }
  auto minus = [](const PointSet& a, const PointSet& b) {
    PointSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
  };
  for (CellId id : layer0) {
    out.layers[0].cells.push_back(id);
    out.layers[0].E.push_back(minus(lattice.cell(id).members, omega_of[id]));
  }
  for (const auto& p : pending) {
    PointSet E = lattice.cell(p.cell).members;
    for (CellId pid : p.inner_f) E = minus(E, omega_of[pid]);
    const int k = std::min(p.n, config.K_max);
    if (p.n > config.K_max) ++out.merged_cells;
    out.layers[k].cells.push_back(p.cell);
    out.layers[k].E.push_back(std::move(E));
  }
  // Cells folded into the last layer can be nested; outer E sets give up the inner cells.
  for (auto& fam : out.layers) {
    for (std::size_t i = 0; i < fam.cells.size(); ++i)
      for (std::size_t j = 0; j < fam.cells.size(); ++j)
        if (i != j && lattice.is_ancestor(fam.cells[i], fam.cells[j]))
          fam.E[i] = minus(fam.E[i], lattice.cell(fam.cells[j]).members);
    double eta = 1.0;
    for (std::size_t i = 0; i < fam.cells.size(); ++i) {
      const double mq = space.measure(lattice.cell(fam.cells[i]).members);
      if (mq > 0.0) eta = std::min(eta, space.measure(fam.E[i]) / mq);
    }
    fam.eta = eta;
  }

  const auto slots = slot_entries(space, f);
  for (PointId x : domain) {
    if (!space.in_support(x)) continue;
    const double t = t_star_table(table, space, slots, x, config.mode);
    const double s = sparse_operator(out.layers, f, x, lattice, space);
    out.slack.push_back(slack_row(x, t, s));
    out.C_dom = std::max(out.C_dom, out.slack.back().ratio);
  }
  return out;
}

DominationCheck verify_domination(const Kernel& kernel, const FunctionTuple& f, const DominationResult& result,
                                  const Lattice& lattice, const MetricMeasureSpace& space, TruncMode mode) {
  DominationCheck out;
  for (PointId x : result.domain) {
    if (!space.in_support(x)) continue;
    const double t = maximal_T_star(kernel, space, f, x, mode);
    const double s = sparse_operator(result.layers, f, x, lattice, space);
    out.rows.push_back(slack_row(x, t, s));
    if (out.rows.size() == 1 || out.rows.back().ratio > out.min_C) {
      out.min_C = out.rows.back().ratio;
      out.worst = x;
    }
  }
  return out;
}

}  // namespace sdom
