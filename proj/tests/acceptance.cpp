// Acceptance suite: one PASS/FAIL line per criterion, details in acceptance_log.txt.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "sdom/generators.hpp"
#include "sdom/io.hpp"
#include "sdom/oracle.hpp"
#include "sdom/sparse.hpp"
#include "sdom/weights.hpp"

using namespace sdom;

namespace {

std::ofstream g_log;
std::string g_cli;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Stats {
  std::vector<double> v;
  void add(double x) { v.push_back(x); }
  std::string describe() {
    if (v.empty()) return "n=0";
    std::sort(v.begin(), v.end());
    return "n=" + std::to_string(v.size()) + " min=" + num(v.front()) + " median=" + num(v[v.size() / 2]) +
           " max=" + num(v.back());
  }
};

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

Kernel lambda_kernel(const DominatingFunction& lambda, int m) {
  return Kernel::builtin(KernelFamily::LambdaSum, lambda, m);
}

FunctionTuple signed_ftuple(const MetricMeasureSpace& space, int m, std::mt19937_64& rng) {
  FunctionTuple f = FunctionTuple::zeros(m, space.size());
  for (int j = 0; j < m; ++j)
    for (PointId x = 0; x < space.size(); ++x) f[j][x] = gen::uniform(rng, -1.0, 1.0);
  return f;
}

// 1 ---------------------------------------------------------------------------

Outcome lattice_validity() {
  Outcome out;
  std::size_t lab = 0, strict = 0, single_levels = 0;
  for (const auto& fx : fixtures::named()) {
    const auto rep = check_lattice(fixtures::lab_lattice(fx.space), fx.space);
    ++lab;
    if (!rep.ok()) {
      out.pass = false;
      g_log << "lattice lab " << fx.name << ": " << rep.summary() << "\n";
    }
  }
  for (int i = 0; i < 100; ++i) {
    std::mt19937_64 rng(1000 + i);
    const std::size_t n = 2 + rng() % 63;
    const auto space = gen::random_cloud(n, 5000 + i);
    try {
      const auto rep = check_lattice(fixtures::lab_lattice(space, i), space);
      ++lab;
      if (!rep.ok()) {
        out.pass = false;
        g_log << "lattice lab random " << i << " n=" << n << ": " << rep.summary() << "\n";
      }
    } catch (const InfeasibleConstants& e) {
      out.pass = false;
      g_log << "lattice lab random " << i << " n=" << n << ": " << e.what() << "\n";
    }
  }
  std::vector<fixtures::Named> small = {{"uniform-line-10", gen::uniform_line(10)},
                                        {"geometric-mass-line-8", gen::geometric_mass_line(8)}};
  for (auto& fx : fixtures::named())
    if (fx.space.diameter() <= 10.0) small.push_back(fx);
  for (const auto& fx : small) {
    const Lattice lat = fixtures::strict_lattice(fx.space);
    const auto rep = check_lattice(lat, fx.space);
    ++strict;
    const auto& K = lat.constants();
    std::size_t singles = 0;
    for (int k = K.k_min; k <= K.k_max; ++k) singles += lat.level(k).size() == 1;
    single_levels += singles;
    g_log << "lattice strict " << fx.name << ": levels " << K.k_min << ".." << K.k_max << ", single-cell levels "
          << singles << ", " << rep.summary() << "\n";
    if (!rep.ok()) out.pass = false;
  }
  out.detail = std::to_string(lab) + " lab lattices, " + std::to_string(strict) + " strict lattices (" +
               std::to_string(single_levels) + " single-cell levels)";
  return out;
}

// 2, 3, 4 -----------------------------------------------------------------------

struct DominationSweep {
  std::size_t runs = 0, failures = 0, points = 0;
  std::size_t nodes = 0, node_failures = 0;
  std::size_t p1 = 0, p2 = 0, p3 = 0;
  std::size_t layers = 0, layer_failures = 0;
  double min_eta = 1.0;
  Stats cdom, constants;
  bool done = false;
};

DominationSweep& sweep() {
  static DominationSweep s;
  if (s.done) return s;
  s.done = true;
  const std::vector<fixtures::Named> spaces = {{"uniform-line-32", gen::uniform_line(32)},
                                               {"random-cloud-32-s7", gen::random_cloud(32, 7)}};
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const auto& space = spaces[si].space;
    const Lattice lat = fixtures::lab_lattice(space);
    const auto lambda = DominatingFunction::fit_power(space);
    const Kernel kernel = lambda_kernel(lambda, 2);
    for (double M_init : {1.0, 1.0 / 1024.0}) {
      DominationConfig cfg;
      cfg.M_init = M_init;
      for (int t = 0; t < 100; ++t) {
        std::mt19937_64 rng(100000 * si + 1000 * (M_init == 1.0) + t);
        const FunctionTuple f = gen::random_ftuple(space, 2, rng);
        ++s.runs;
        const auto res = build_sparse_domination(kernel, f, {}, lat, space, lambda, 4.0, cfg);
        const auto chk = verify_domination(kernel, f, res, lat, space, cfg.mode);
        s.cdom.add(res.C_dom);
        bool ok = std::isfinite(res.C_dom);
        for (const auto& row : chk.rows) {
          ++s.points;
          if (!(row.t_star <= res.C_dom * row.sparse * (1.0 + 1e-12))) ok = false;
        }
        if (!ok) {
          ++s.failures;
          g_log << "domination failure " << spaces[si].name << " M_init=" << M_init << " trial " << t
                << " Cdom=" << num(res.C_dom) << " recomputed=" << num(chk.min_C) << "\n";
        }
        for (const auto& c : res.certificates) {
          ++s.nodes;
          s.p1 += !c.property1;
          s.p2 += !c.property2;
          s.p3 += !c.property3;
          if (!c.ok()) ++s.node_failures;
          s.constants.add(c.constant);
        }
        for (const auto& fam : res.layers) {
          ++s.layers;
          const auto rep = check_sparseness(fam, lat, space, 0.4);
          s.min_eta = std::min(s.min_eta, rep.worst_ratio);
          if (!rep.ok()) {
            ++s.layer_failures;
            g_log << "sparseness failure " << spaces[si].name << " trial " << t << ": " << rep.summary() << "\n";
          }
        }
      }
    }
  }
  g_log << "Cdom distribution: " << s.cdom.describe() << "\n";
  g_log << "stopping-time constants: " << s.constants.describe() << "\n";
  return s;
}

Outcome sparse_domination() {
  auto& s = sweep();
  Outcome out;
  out.pass = s.failures == 0;
  out.detail = std::to_string(s.runs) + " runs, " + std::to_string(s.points) + " points, " +
               std::to_string(s.failures) + " failures; Cdom " + s.cdom.describe();
  return out;
}

Outcome stopping_time() {
  auto& s = sweep();
  Outcome out;
  out.pass = s.node_failures == 0 && s.nodes > 0;
  out.detail = std::to_string(s.nodes) + " nodes, property failures (1)=" + std::to_string(s.p1) +
               " (2)=" + std::to_string(s.p2) + " (3)=" + std::to_string(s.p3) + "; constant " +
               s.constants.describe();
  return out;
}

Outcome sparseness() {
  auto& s = sweep();
  Outcome out;
  out.pass = s.layer_failures == 0 && s.layers > 0;
  out.detail = std::to_string(s.layers) + " layers, " + std::to_string(s.layer_failures) + " failures, min eta " +
               num(s.min_eta);
  return out;
}

// 5 -------------------------------------------------------------------------------

Outcome pointwise_comparison() {
  Outcome out;
  std::string parts;
  for (const auto& fx : fixtures::named()) {
    const Lattice lat = fixtures::lab_lattice(fx.space);
    const auto lambda = DominatingFunction::fit_power(fx.space);
    const Kernel kernel = lambda_kernel(lambda, 2);
    std::mt19937_64 rng(77);
    const FunctionTuple f = gen::random_ftuple(fx.space, 2, rng);
    double sup = 0.0;
    bool finite = true;
    for (CellId q0 : lat.level(lat.constants().k_min)) {
      const auto cmp = check_pointwise_comparison(kernel, fx.space, f, q0, lat, lambda);
      finite = finite && cmp.finite && !std::isnan(cmp.sup_ratio);
      sup = std::max(sup, cmp.sup_ratio);
    }
    g_log << "pointwise comparison " << fx.name << ": sup ratio " << num(sup) << "\n";
    parts += (parts.empty() ? "" : ", ") + fx.name + "=" + num(sup);
    out.pass = out.pass && finite && std::isfinite(sup);
  }
  out.detail = "sup ratios " + parts;
  return out;
}

// 6 -------------------------------------------------------------------------------

ExponentTuple random_exponents(std::mt19937_64& rng, int m, double lo, double hi) {
  std::vector<double> p(m);
  for (double& q : p) q = gen::uniform(rng, lo, hi);
  return ExponentTuple(p);
}

Outcome weight_duality() {
  Outcome out;
  const auto fx = fixtures::named();
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::mt19937_64 rng(3000 + t);
    const int m = 2 + t % 2;
    const auto& space = fx[t % fx.size()].space;
    ExponentTuple P = random_exponents(rng, m, 1.1, 8.0);
    while (!(P.p() > 1.0)) P = random_exponents(rng, m, 1.1, 8.0);
    const WeightTuple w = gen::random_weights(space.size(), m, rng, 2.0);
    const int i = static_cast<int>(rng() % m);
    const auto d = check_duality_identity(w, P, i, 1.0 + static_cast<double>(rng() % 3), space, 1e-9);
    worst = std::max(worst, d.max_rel_err);
    if (!d.ok) {
      out.pass = false;
      g_log << "duality failure trial " << t << " err " << num(d.max_rel_err) << "\n";
    }
  }
  out.detail = "100 instances, max relative error " + num(worst);
  return out;
}

// 7 -------------------------------------------------------------------------------

Outcome weighted_bounds() {
  Outcome out;
  const std::vector<fixtures::Named> spaces = {{"uniform-line-32", gen::uniform_line(32)},
                                               {"random-cloud-32-s7", gen::random_cloud(32, 7)}};
  std::vector<Lattice> lats;
  for (const auto& s : spaces) lats.push_back(fixtures::lab_lattice(s.space));
  const double alpha = 4.0, slack = 64.0;
  std::string parts;
  for (Regime regime : {Regime::Case1, Regime::Case2, Regime::Case3}) {
    double max_sparse = 0.0, max_T = 0.0;
    std::size_t fails = 0;
    for (int t = 0; t < 100; ++t) {
      std::mt19937_64 rng(7000 + 1000 * static_cast<int>(regime) + t);
      const std::size_t si = t % spaces.size();
      const auto& space = spaces[si].space;
      const auto lambda = DominatingFunction::fit_power(space);
      const Kernel kernel = lambda_kernel(lambda, 2);
      const double lo = regime == Regime::Case2 ? 2.0 : 1.1;
      const double hi = regime == Regime::Case1 ? 3.0 : 10.0;
      ExponentTuple P = random_exponents(rng, 2, lo, hi);
      while (P.regime() != regime) P = random_exponents(rng, 2, lo, hi);
      const FunctionTuple f = gen::random_ftuple(space, 2, rng);
      const WeightTuple w = gen::random_weights(space.size(), 2, rng);
      DominationConfig cfg;
      cfg.M_init = 1.0 / 1024.0;
      const auto dom = build_sparse_domination(kernel, f, {}, lats[si], space, lambda, alpha, cfg);
      const auto sb = verify_sparse_weighted_bound(dom.layers, f, w, P, alpha, space, lats[si], slack);
      const auto tb = verify_T_weighted_bound(kernel, f, w, P, dom, lats[si], space, cfg.mode, slack);
      max_sparse = std::max(max_sparse, sb.ratio);
      max_T = std::max(max_T, tb.ratio);
      if (!sb.ok || !tb.ok) {
        ++fails;
        g_log << "weighted bound failure " << to_string(regime) << " trial " << t << " sparse " << num(sb.ratio)
              << " T " << num(tb.ratio) << "\n";
      }
    }
    g_log << "weighted bounds " << to_string(regime) << ": max sparse ratio " << num(max_sparse) << ", max T ratio "
          << num(max_T) << "\n";
    parts += std::string(parts.empty() ? "" : ", ") + to_string(regime) + " max " + num(std::max(max_sparse, max_T));
    out.pass = out.pass && fails == 0;
  }

  // Doubling-measure specialization on the uniform line.
  const auto& line = spaces[0].space;
  const auto lambda = DominatingFunction::fit_power(line);
  const Kernel kernel = lambda_kernel(lambda, 2);
  const FunctionTuple ones(std::vector<std::vector<double>>(2, std::vector<double>(line.size(), 1.0)));
  const auto dom = build_sparse_domination(kernel, ones, {}, lats[0], line, lambda, alpha);
  const std::vector<double> grid = {1.25, 1.5, 2.0, 3.0, 6.0};
  double worst = 0.0;
  std::size_t checks = 0, fails = 0;
  for (double p1 : grid)
    for (double p2 : grid) {
      const ExponentTuple P({p1, p2});
      double e = 1.0;
      for (int i = 0; i < 2; ++i) e = std::max(e, P.conj(i) / P.p());
      for (int k = 0; k < 5; ++k) {
        std::mt19937_64 rng(9000 + k);
        const WeightTuple w = k == 0 ? WeightTuple::ones(2, line.size()) : gen::random_weights(line.size(), 2, rng);
        const double wchar = ap_characteristic(w, P, 1.0, line).power_normalized(P);
        const double c = c_omega(w, P, alpha, line, lats[0], dom.layers).value;
        const double ratio = std::pow(c, 1.0 / P.p()) / std::pow(wchar, e);
        worst = std::max(worst, ratio);
        ++checks;
        if (!(ratio <= 8.0)) {
          ++fails;
          g_log << "doubling check p=(" << p1 << "," << p2 << ") weights " << k << ": C^(1/p)/[w]^e = " << num(ratio)
                << "\n";
        }
      }
    }
  g_log << "doubling check: " << checks << " cases, worst C^(1/p)/[w]^e = " << num(worst) << "\n";
  out.pass = out.pass && fails == 0;
  out.detail = parts + "; doubling grid worst " + num(worst) + " (" + std::to_string(fails) + "/" +
               std::to_string(checks) + " above 8)";
  return out;
}

// 8 -------------------------------------------------------------------------------

struct Instance {
  MetricMeasureSpace space;
  int m;
  Lattice lattice;
  DominatingFunction lambda;
  Kernel kernel;
  FunctionTuple f;
  std::mt19937_64 rng;
};

Instance make_instance(int seed) {
  std::mt19937_64 rng(seed);
  const int m = seed % 4 == 3 ? 3 : 2;
  const std::size_t n = m == 2 ? 4 + rng() % 29 : 3 + rng() % 14;
  const auto& names = gen::generator_names();
  auto space = gen::make_space(names[rng() % names.size()], n, seed);
  Lattice lat = fixtures::lab_lattice(space);
  auto lambda = DominatingFunction::fit_power(space);
  Kernel kernel = lambda_kernel(lambda, m);
  FunctionTuple f = signed_ftuple(space, m, rng);
  return {std::move(space), m, std::move(lat), lambda, std::move(kernel), std::move(f), std::move(rng)};
}

Outcome oracle_equivalence() {
  Outcome out;
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // checks, mismatches
  auto record = [&](const std::string& op, double main, double oracle) {
    auto& t = tally[op];
    ++t.first;
    if (!close(main, oracle)) {
      ++t.second;
      g_log << "oracle mismatch " << op << ": " << io::fmt(main) << " vs " << io::fmt(oracle) << "\n";
    }
  };
  for (int seed = 1; seed <= 100; ++seed) {
    Instance in = make_instance(seed);
    const auto& S = in.space;
    const auto& L = in.lattice;
    for (int k = 0; k < 3; ++k) {
      const PointId x = S.support()[in.rng() % S.support().size()];
      const auto radii = S.breakpoint_radii(x);
      const double r = radii[in.rng() % radii.size()] * (in.rng() % 2 ? 1.0 : 1.37);
      for (TruncMode mode : {TruncMode::Linf, TruncMode::L2})
        record("truncated_T", truncated_T(in.kernel, S, in.f, x, r, mode),
               oracle::brute_truncated_T(in.kernel, S, in.f, x, r, mode));
      record("T_star", maximal_T_star(in.kernel, S, in.f, x, TruncMode::Linf),
             oracle::brute_T_star(in.kernel, S, in.f, x, TruncMode::Linf));
      if (S.size() <= (in.m == 2 ? 10u : 6u))
        record("T_star", maximal_T_star(in.kernel, S, in.f, x, TruncMode::L2),
               oracle::brute_T_star(in.kernel, S, in.f, x, TruncMode::L2));
      record("M_lambda", M_lambda(S, in.f, x, in.lambda), oracle::brute_M_lambda(S, in.f, x, in.lambda));
      std::vector<CellId> holders;
      for (const auto& c : L.cells())
        if (c.contains(x)) holders.push_back(c.id);
      const CellId q = holders[in.rng() % holders.size()];
      record("F", cell_truncation_F(in.kernel, S, in.f, x, L.cell(q)), oracle::brute_F(in.kernel, S, in.f, x, L.cell(q)));
      record("grand_maximal", grand_maximal_M_T(in.kernel, S, in.f, x, q, L),
             oracle::brute_grand_maximal(in.kernel, S, in.f, x, q, L));
      record("M_lambda_dyadic", M_lambda_dyadic(S, in.f, x, q, L, in.lambda),
             oracle::brute_M_lambda_dyadic(S, in.f, x, q, L, in.lambda));
      std::vector<double> density(S.size());
      for (double& d : density) d = std::exp(gen::uniform(in.rng, -1.0, 1.0));
      for (auto fam : {MaximalFamily::Cells, MaximalFamily::Balls30, MaximalFamily::Balls200})
        record("weighted_maximal", weighted_dyadic_maximal(S, in.f[0], x, density, L, fam),
               oracle::brute_weighted_maximal(S, in.f[0], x, density, L, fam));
      record("A", bilinear_average_A(in.f, L.cell(q), S, 4.0), oracle::brute_A(in.f, L.cell(q), S, 4.0));
    }
    const FunctionTuple fa = in.f.abs();
    try {
      const auto dom = build_sparse_domination(in.kernel, fa, {}, L, S, in.lambda, 4.0);
      for (PointId x : S.support())
        record("sparse_operator", sparse_operator(dom.layers, fa, x, L, S),
               oracle::brute_sparse_operator(dom.layers, fa, x, L, S));
      ExponentTuple P = random_exponents(in.rng, in.m, 1.1, 8.0);
      const WeightTuple w = gen::random_weights(S.size(), in.m, in.rng);
      const auto nu = nu_w(w, P);
      const auto bnu = oracle::brute_nu_w(w, P);
      for (PointId x = 0; x < S.size(); ++x) record("nu_w", nu[x], bnu[x]);
      const double rho = 1.0 + static_cast<double>(in.rng() % 3);
      record("ap_characteristic", ap_characteristic(w, P, rho, S).value, oracle::brute_ap_characteristic(w, P, rho, S));
      record("c_omega", c_omega(w, P, 4.0, S, L, dom.layers).value, oracle::brute_c_omega(w, P, 4.0, S, L, dom.layers));
    } catch (const InvalidInput& e) {
      g_log << "oracle instance " << seed << ": no doubling root (" << e.what() << ")\n";
    }
  }
  std::string parts;
  std::size_t bad = 0;
  for (const auto& [op, t] : tally) {
    bad += t.second;
    g_log << "oracle " << op << ": " << t.first << " checks, " << t.second << " mismatches\n";
    parts += (parts.empty() ? "" : " ") + op + "=" + std::to_string(t.first);
  }
  out.pass = bad == 0;
  out.detail = std::to_string(bad) + " mismatches; checks " + parts;
  return out;
}

// 9 -------------------------------------------------------------------------------

Outcome suprema_exactness() {
  Outcome out;
  std::size_t checks = 0, below = 0;
  double worst = 0.0;
  auto compare = [&](const std::string& what, double main, double dense) {
    ++checks;
    const double gap = (dense - main) / (1.0 + std::abs(dense));
    worst = std::max(worst, gap);
    if (gap > 1e-12) {
      ++below;
      g_log << "supremum below dense sweep: " << what << " " << io::fmt(main) << " < " << io::fmt(dense) << "\n";
    }
  };
  std::vector<fixtures::Named> all = fixtures::named();
  for (const auto& name : gen::generator_names()) all.push_back({name + "-10", gen::make_space(name, 10, 7)});
  for (const auto& fx : all) {
    const auto& S = fx.space;
    const auto lambda = DominatingFunction::fit_power(S);
    const Kernel kernel = lambda_kernel(lambda, 2);
    std::mt19937_64 rng(4242);
    const FunctionTuple f = signed_ftuple(S, 2, rng);
    for (PointId x = 0; x < S.size(); ++x) {
      compare(fx.name + " T*", maximal_T_star(kernel, S, f, x, TruncMode::Linf),
              oracle::brute_T_star(kernel, S, f, x, TruncMode::Linf));
      if (S.size() <= 10)
        compare(fx.name + " T* l2", maximal_T_star(kernel, S, f, x, TruncMode::L2),
                oracle::brute_T_star(kernel, S, f, x, TruncMode::L2));
      compare(fx.name + " M_lambda", M_lambda(S, f, x, lambda), oracle::brute_M_lambda(S, f, x, lambda));
    }
    for (int k = 0; k < 3; ++k) {
      const ExponentTuple P({1.5 + k, 3.0});
      const WeightTuple w = k == 0 ? WeightTuple::ones(2, S.size()) : gen::random_weights(S.size(), 2, rng);
      for (double rho : {1.0, 2.0})
        compare(fx.name + " A_P", ap_characteristic(w, P, rho, S).value, oracle::brute_ap_characteristic(w, P, rho, S));
    }
  }
  out.pass = below == 0;
  out.detail = std::to_string(checks) + " suprema, " + std::to_string(below) + " below the dense sweep (worst gap " +
               num(worst) + ")";
  return out;
}

// 10 ------------------------------------------------------------------------------

Outcome determinism() {
  Outcome out;
  if (g_cli.empty()) {
    out.pass = false;
    out.detail = "no CLI path given";
    return out;
  }
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "sdom_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg = root / "experiment.ini";
  std::ofstream(cfg) << "exponents = [1.5, 6]\nrho = 2\n[space]\ngenerator = random-cloud\nn = 24\n"
                        "[domination]\nM_init = 0.0009765625\n[trials]\ncount = 12\n";
  std::vector<std::string> files;
  for (const char* run : {"a", "b"}) {
    for (const char* cmd : {"gen-space", "lattice", "dominate", "weights", "verify"}) {
      const std::string line = "\"" + g_cli + "\" " + cmd + " --config \"" + cfg.string() + "\" --out \"" +
                               (root / "out").string() + "\" --seed 11 --jobs 4 > \"" + (root / run).string() + "_" +
                               cmd + ".stdout\" 2>&1";
      const int rc = std::system(line.c_str());
      if (rc != 0) {
        out.pass = false;
        g_log << "determinism: command " << cmd << " exited with " << rc << "\n";
      }
    }
    fs::rename(root / "out", root / run);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const auto other = root / "b" / entry.path().filename();
    ++compared;
    if (!fs::exists(other) || io::read_file(entry.path().string()) != io::read_file(other.string())) {
      out.pass = false;
      g_log << "determinism: " << entry.path().filename() << " differs\n";
    }
  }
  for (const char* cmd : {"gen-space", "lattice", "dominate", "weights", "verify"}) {
    ++compared;
    const auto a = root / (std::string("a_") + cmd + ".stdout");
    const auto b = root / (std::string("b_") + cmd + ".stdout");
    if (io::read_file(a.string()) != io::read_file(b.string())) {
      out.pass = false;
      g_log << "determinism: stdout of " << cmd << " differs\n";
    }
  }
  out.pass = out.pass && compared > 5;
  out.detail = std::to_string(compared) + " artifacts compared byte for byte";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  g_log.open("acceptance_log.txt");
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "lattice validity", 120, lattice_validity},
      {2, "sparse domination", 600, sparse_domination},
      {3, "stopping-time certificates", 600, stopping_time},
      {4, "sparseness", 600, sparseness},
      {5, "pointwise comparison", 600, pointwise_comparison},
      {6, "weight duality", 60, weight_duality},
      {7, "weighted bounds", 600, weighted_bounds},
      {8, "oracle equivalence", 900, oracle_equivalence},
      {9, "exactness of suprema", 600, suprema_exactness},
      {10, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + num(c.budget_s) + " s budget";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << num(secs) << " s]" << std::endl;
    g_log << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "\n";
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
