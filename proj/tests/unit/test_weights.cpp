#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "sdom/generators.hpp"
#include "sdom/oracle.hpp"
#include "sdom/weights.hpp"

using namespace sdom;

namespace {

Lattice one_cell(const MetricMeasureSpace& S) {
  LatticeConstants K;
  K.k_min = K.k_max = -4;
  return build_lattice(S, K);
}

SparseFamily family_of(const Lattice& lat, CellId c, PointSet E, double alpha) {
  SparseFamily fam;
  fam.cells = {c};
  fam.E = {std::move(E)};
  fam.alpha = alpha;
  return fam;
}

WeightTuple power_weights(std::size_t n, int m) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + std::abs(double(i) - 5.0);
  return WeightTuple(std::vector<std::vector<double>>(m, w));
}

Regime by_definition(const std::vector<double>& p) {
  double inv = 0.0, maxc = 0.0;
  for (double q : p) inv += 1.0 / q, maxc = std::max(maxc, q / (q - 1.0));
  const double P = 1.0 / inv;
  if (P <= 1.0) return Regime::Case1;
  return P >= maxc ? Regime::Case2 : Regime::Case3;
}

}  // namespace

TEST_CASE("exponent tuples and regimes") {
  CHECK(ExponentTuple({2, 2}).regime() == Regime::Case1);
  CHECK(ExponentTuple({4, 4}).regime() == Regime::Case2);
  const ExponentTuple c3({1.5, 6});
  CHECK(c3.regime() == Regime::Case3);
  CHECK(c3.p() == doctest::Approx(1.2));
  CHECK(c3.conj(c3.max_conj_slot()) == doctest::Approx(3.0));
  CHECK(ExponentTuple({3, 3}).regime() == Regime::Case2);  // p = max p' = 3/2
  CHECK_THROWS_AS(ExponentTuple({0.5, 2}), InvalidInput);
  CHECK_THROWS_AS(ExponentTuple({1.0, 1.0, 1.0}), InvalidInput);  // p = 1/3 = 1/m

  const std::vector<double> grid = {1.05, 1.25, 1.5, 2, 2.5, 3, 4, 6, 10, 40};
  for (double a : grid)
    for (double b : grid) {
      CHECK(ExponentTuple({a, b}).regime() == by_definition({a, b}));
      for (double c : {1.5, 3.0, 12.0}) CHECK(ExponentTuple({a, b, c}).regime() == by_definition({a, b, c}));
    }
}

TEST_CASE("nu_w") {
  const ExponentTuple P({2, 2});
  for (double v : nu_w(WeightTuple::ones(2, 5), P)) CHECK(v == 1.0);
  const WeightTuple w(std::vector<std::vector<double>>{{4.0}, {9.0}});
  CHECK(nu_w(w, P)[0] == doctest::Approx(6.0));
  std::mt19937_64 rng(1);
  const auto r = gen::random_weights(20, 3, rng, 2.0);
  const ExponentTuple Q({1.5, 3, 7});
  const auto a = nu_w(r, Q), b = oracle::brute_nu_w(r, Q);
  for (std::size_t x = 0; x < 20; ++x) CHECK(a[x] == doctest::Approx(b[x]).epsilon(1e-13));
  CHECK_THROWS_AS(nu_w(WeightTuple(std::vector<std::vector<double>>{{1.0, 0.0}, {1.0, 1.0}}), P), InvalidInput);
}

TEST_CASE("A_P characteristic") {
  const auto line = gen::uniform_line(10);
  for (auto p : std::vector<std::vector<double>>{{2, 2}, {1, 3}, {1.5, 6}, {4, 4, 4}})
    CHECK(ap_characteristic(WeightTuple::ones(int(p.size()), 10), ExponentTuple(p), 1.0, line).value ==
          doctest::Approx(1.0).epsilon(1e-14));

  const ExponentTuple P({2, 2});
  const auto two = ap_characteristic(WeightTuple::ones(2, 10), P, 2.0, line);
  CHECK(two.value <= 1.0 + 1e-14);
  CHECK(two.value == doctest::Approx(oracle::brute_ap_characteristic(WeightTuple::ones(2, 10), P, 2.0, line)));
  const Ball b = two.argmax;
  CHECK(line.ball_measure(b.center, b.radius) == line.ball_measure(b.center, 2.0 * b.radius));

  const auto pw = power_weights(10, 2);
  CHECK(ap_characteristic(pw, P, 1.0, line).value ==
        doctest::Approx(oracle::brute_ap_characteristic(pw, P, 1.0, line)).epsilon(1e-12));
  CHECK(oracle::brute_ap_characteristic(WeightTuple::ones(2, 10), P, 1.0, line) == doctest::Approx(1.0));
}

TEST_CASE("A_P characteristic: monotone in rho and scale invariant") {
  std::mt19937_64 rng(2);
  for (const auto& fx : fixtures::named()) {
    const auto w = gen::random_weights(fx.space.size(), 2, rng);
    const ExponentTuple P({1.5, 4});
    double prev = INFINITY;
    for (double rho : {1.0, 1.5, 2.0, 4.0}) {
      const double v = ap_characteristic(w, P, rho, fx.space).value;
      CHECK(v <= prev * (1.0 + 1e-12));
      prev = v;
    }
    auto scaled = w;
    for (auto& v : scaled.w[1]) v *= 7.5;
    CHECK(ap_characteristic(scaled, P, 1.0, fx.space).value ==
          doctest::Approx(ap_characteristic(w, P, 1.0, fx.space).value).epsilon(1e-12));
  }
}

TEST_CASE("dual weights") {
  const ExponentTuple P({4, 4});
  const auto [w1, P1] = dual_weight_tuple(WeightTuple::ones(2, 6), P, 0);
  for (int j = 0; j < 2; ++j)
    for (double v : w1[j]) CHECK(v == doctest::Approx(1.0));
  CHECK(P1.values() == std::vector<double>{2.0, 4.0});
  CHECK_THROWS_AS(dual_weight_tuple(WeightTuple::ones(2, 6), ExponentTuple({2, 2}), 0), InvalidInput);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const ExponentTuple Q({gen::uniform(rng, 2.1, 8), gen::uniform(rng, 2.1, 8)});
    const auto w = gen::random_weights(10, 2, rng, 2.0);
    const int i = t % 2;
    const auto [wi, Qi] = dual_weight_tuple(w, Q, i);
    const auto [back, Qb] = dual_weight_tuple(wi, Qi, i);
    CHECK(Qb.p(i) == doctest::Approx(Q.p(i)).epsilon(1e-12));
    for (std::size_t x = 0; x < 10; ++x) CHECK(back[i][x] == doctest::Approx(w[i][x]).epsilon(1e-10));
  }
}

TEST_CASE("duality identity") {
  const auto line = gen::uniform_line(10);
  const auto id = check_duality_identity(WeightTuple::ones(2, 10), ExponentTuple({3, 3}), 1, 1.0, line);
  CHECK(id.ok);
  CHECK(id.lhs == doctest::Approx(1.0));
  CHECK(id.rhs == doctest::Approx(1.0));

  const auto pw = check_duality_identity(power_weights(10, 2), ExponentTuple({4, 4}), 1, 1.0, line);
  CHECK(pw.ok);
  CHECK(pw.max_rel_err <= 1e-9);
  CHECK(pw.lhs == doctest::Approx(pw.rhs).epsilon(1e-9));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 2;
    std::vector<double> p(m);
    do
      for (double& q : p) q = gen::uniform(rng, 1.1, 8.0);
    while (!(ExponentTuple(p).p() > 1.0));
    const auto S = gen::random_cloud(12, 40 + t);
    const auto d = check_duality_identity(gen::random_weights(12, m, rng, 2.0), ExponentTuple(p), t % m, 1.5, S);
    CHECK(d.ok);
  }
}

TEST_CASE("C_omega closed forms on four uniform points") {
  const auto S = gen::uniform_line(4);
  const Lattice lat = one_cell(S);
  const double alpha = 100.0;  // alpha B covers the space
  const auto w = WeightTuple::ones(2, 4);
  const auto full = std::vector<SparseFamily>{family_of(lat, 0, {0, 1, 2, 3}, alpha)};
  const auto half = std::vector<SparseFamily>{family_of(lat, 0, {0, 1}, alpha)};

  const auto c1 = c_omega(w, ExponentTuple({2, 2}), alpha, S, lat, full);
  CHECK(c1.regime == Regime::Case1);
  CHECK(c1.value == doctest::Approx(1.0));

  // Case 2: mu(Q) / mu(E).  Case 3 with p0' = 3: (mu(Q) / mu(E))^3.
  CHECK(c_omega(w, ExponentTuple({4, 4}), alpha, S, lat, full).value == doctest::Approx(1.0));
  CHECK(c_omega(w, ExponentTuple({4, 4}), alpha, S, lat, half).value == doctest::Approx(2.0));
  CHECK(c_omega(w, ExponentTuple({1.5, 6}), alpha, S, lat, full).value == doctest::Approx(1.0));
  CHECK(c_omega(w, ExponentTuple({1.5, 6}), alpha, S, lat, half).value == doctest::Approx(8.0));

  CHECK_THROWS_AS(c_omega(w, ExponentTuple({4, 4}), alpha, S, lat, {}), InvalidInput);
  CHECK_THROWS_AS(c_omega(w, ExponentTuple({1, 4}), alpha, S, lat, full), InvalidInput);
}

TEST_CASE("C_omega matches the oracle") {
  std::mt19937_64 rng(5);
  const auto S = gen::random_cloud(16, 2);
  const Lattice lat = fixtures::lab_lattice(S);
  const auto lambda = DominatingFunction::fit_power(S);
  const auto K = Kernel::builtin(KernelFamily::LambdaSum, lambda, 2);
  DominationConfig cfg;
  cfg.M_init = 1.0 / 1024;
  const auto dom = build_sparse_domination(K, gen::random_ftuple(S, 2, rng), {}, lat, S, lambda, 4.0, cfg);
  for (auto p : std::vector<std::vector<double>>{{2, 2}, {1.3, 2.5}, {4, 4}, {5, 9}, {1.5, 6}, {1.1, 20}}) {
    const auto w = gen::random_weights(16, 2, rng);
    const ExponentTuple P(p);
    CHECK(c_omega(w, P, 4.0, S, lat, dom.layers).value ==
          doctest::Approx(oracle::brute_c_omega(w, P, 4.0, S, lat, dom.layers)).epsilon(1e-10));
  }
}

TEST_CASE("weighted bounds: closed forms and trivial inputs") {
  const auto S = gen::uniform_line(4);
  const Lattice lat = one_cell(S);
  const auto fam = std::vector<SparseFamily>{family_of(lat, 0, {0, 1, 2, 3}, 100.0)};
  const auto w = WeightTuple::ones(2, 4);
  const FunctionTuple ones(std::vector<std::vector<double>>(2, std::vector<double>(4, 1.0)));
  for (auto p : std::vector<std::vector<double>>{{2, 2}, {4, 4}, {1.5, 6}}) {
    const auto b = verify_sparse_weighted_bound(fam, ones, w, ExponentTuple(p), 100.0, S, lat);
    CHECK(b.lhs == doctest::Approx(4.0));
    CHECK(b.rhs == doctest::Approx(4.0));
    CHECK(b.ratio == doctest::Approx(1.0));
    CHECK(b.ok);
    const auto z = verify_sparse_weighted_bound(fam, FunctionTuple::zeros(2, 4), w, ExponentTuple(p), 100.0, S, lat);
    CHECK(z.lhs == 0.0);
    CHECK(z.ok);
  }

  const auto line = gen::uniform_line(12);
  const auto lambda = DominatingFunction::fit_power(line);
  const auto K = Kernel::builtin(KernelFamily::LambdaSum, lambda, 2);
  const Lattice ll = fixtures::lab_lattice(line);
  const auto zero = verify_T_weighted_bound(K, FunctionTuple::zeros(2, 12), WeightTuple::ones(2, 12),
                                            ExponentTuple({2, 2}), ll, line, lambda, 4.0);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.ok);

  auto atom = FunctionTuple::zeros(2, 12);
  atom[0][4] = atom[1][4] = 1.0;
  for (auto p : std::vector<std::vector<double>>{{2, 2}, {4, 4}, {1.5, 6}}) {
    const auto b = verify_T_weighted_bound(K, atom, WeightTuple::ones(2, 12), ExponentTuple(p), ll, line, lambda, 4.0);
    CHECK(std::isfinite(b.ratio));
    CHECK(b.ok);
  }
}

TEST_CASE("doubling measure: C_omega against the characteristic") {
  const auto line = gen::uniform_line(32);
  const auto lambda = DominatingFunction::fit_power(line);
  const auto K = Kernel::builtin(KernelFamily::LambdaSum, lambda, 2);
  const Lattice lat = fixtures::lab_lattice(line);
  const FunctionTuple ones(std::vector<std::vector<double>>(2, std::vector<double>(32, 1.0)));
  const auto dom = build_sparse_domination(K, ones, {}, lat, line, lambda, 4.0);
  for (double a : {1.25, 2.0, 6.0})
    for (double b : {1.5, 3.0}) {
      const ExponentTuple P({a, b});
      const auto w = WeightTuple::ones(2, 32);
      const double e = std::max({1.0, P.conj(0) / P.p(), P.conj(1) / P.p()});
      const double wc = ap_characteristic(w, P, 1.0, line).power_normalized(P);
      CHECK(std::pow(c_omega(w, P, 4.0, line, lat, dom.layers).value, 1.0 / P.p()) <= 8.0 * std::pow(wc, e));
    }
}
