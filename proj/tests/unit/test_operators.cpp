#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "sdom/generators.hpp"
#include "sdom/oracle.hpp"

using namespace sdom;

namespace {

Lattice coarse_lattice(const MetricMeasureSpace& S) {
  LatticeConstants K;
  K.k_min = K.k_max = -4;  // scale 256 exceeds every fixture diameter used here
  return build_lattice(S, K);
}

Kernel kernel_for(const MetricMeasureSpace& S, int m = 2) {
  return Kernel::builtin(KernelFamily::LambdaSum, DominatingFunction::fit_power(S), m);
}

FunctionTuple ones(int m, std::size_t n) {
  return FunctionTuple(std::vector<std::vector<double>>(m, std::vector<double>(n, 1.0)));
}

}  // namespace

TEST_CASE("modulus") {
  CHECK(Modulus::power(1.0).dini_norm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(Modulus::power(0.5).dini_norm() == doctest::Approx(1.0 / (1.0 - std::sqrt(0.5))).epsilon(1e-12));
  CHECK(Modulus::zero().dini_norm() == 0.0);
}

TEST_CASE("kernel size condition") {
  const auto S = gen::uniform_line(12);
  const auto lam = DominatingFunction::fit_power(S);
  const Kernel K = Kernel::builtin(KernelFamily::LambdaSum, lam, 2);
  const auto rep = check_kernel_size(K, S, lam);
  CHECK(rep.ok());
  CHECK(rep.worst_ratio <= K.size_const());
  CHECK(rep.skipped == S.size());  // x = y1 = y2

  const auto bad = check_kernel_size(K.scaled(10.0 * K.size_const()), S, lam);
  CHECK_FALSE(bad.ok());
  CHECK(bad.violations.front().ids.size() == 3);
}

TEST_CASE("kernel regularity condition") {
  const auto S = gen::uniform_line(10);
  const auto lam = DominatingFunction::fit_power(S);
  const Kernel K = Kernel::builtin(KernelFamily::LambdaSum, lam, 2);
  CHECK(check_kernel_regularity(K, S, lam).ok());
  CHECK_FALSE(check_kernel_regularity(K.with_modulus(Modulus::zero()), S, lam).ok());

  const MetricMeasureSpace two({1.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
  const auto lam2 = DominatingFunction::fit_power(two);
  const auto vac = check_kernel_regularity(Kernel::builtin(KernelFamily::LambdaSum, lam2, 2), two, lam2);
  CHECK(vac.ok());
  CHECK(vac.vacuous);
}

TEST_CASE("truncated T examples") {
  const auto S = gen::uniform_line(10);
  const Kernel K = kernel_for(S);
  std::mt19937_64 rng(1);
  const auto f = gen::random_ftuple(S, 2, rng);
  CHECK(truncated_T(K, S, f, 3, 2.0 * S.diameter() + 1.0) == 0.0);
  CHECK(truncated_T(K, S, f, 3, 2.0 * S.diameter() + 1.0, TruncMode::L2) == 0.0);

  auto g = FunctionTuple::zeros(2, S.size());
  g[0][7] = 0.3;
  g[1][7] = 0.5;
  const PointId ys[2] = {7, 7};
  const double expect = K(S, 2, ys) * 0.3 * 0.5;
  CHECK(truncated_T(K, S, g, 2, 4.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(maximal_T_star(K, S, g, 2) == doctest::Approx(std::abs(expect)).epsilon(1e-14));
  CHECK(maximal_T_star(K, S, FunctionTuple::zeros(2, S.size()), 2) == 0.0);

  for (PointId x = 0; x < S.size(); ++x)
    for (double r : {0.0, 1.0, 2.5, 4.0})
      for (auto mode : {TruncMode::Linf, TruncMode::L2})
        CHECK(truncated_T(K, S, f, x, r, mode) ==
              doctest::Approx(oracle::brute_truncated_T(K, S, f, x, r, mode)).epsilon(1e-12));
}

TEST_CASE("T* equals the dense sweep") {
  const auto S = gen::uniform_line(10);
  const Kernel K = kernel_for(S);
  std::mt19937_64 rng(2);
  auto f = gen::random_ftuple(S, 2, rng);
  for (auto& v : f[1]) v -= 0.5;
  for (PointId x = 0; x < S.size(); ++x)
    for (auto mode : {TruncMode::Linf, TruncMode::L2}) {
      const double a = maximal_T_star(K, S, f, x, mode);
      const double b = oracle::brute_T_star(K, S, f, x, mode);
      CHECK(a >= b - 1e-12 * (1.0 + b));  // summation order differs
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("cell truncation F") {
  const auto S = gen::uniform_line(12);
  const Kernel K = kernel_for(S);
  const Lattice lat = fixtures::lab_lattice(S);
  std::mt19937_64 rng(3);
  const auto f = gen::random_ftuple(S, 2, rng);
  for (const auto& c : lat.cells()) {
    const PointId x = c.members.front();
    CHECK(cell_truncation_F(K, S, f.restricted(S.ball_points(c.ball(30.0))), x, c) == 0.0);
    CHECK(cell_truncation_F(K, S, f, x, c) == doctest::Approx(oracle::brute_F(K, S, f, x, c)).epsilon(1e-12));
  }
  const auto& top = lat.cell(lat.level(lat.constants().k_min).front());
  if (S.ball_points(top.ball(30.0)).size() == S.size()) CHECK(cell_truncation_F(K, S, f, top.members[0], top) == 0.0);
  const auto& leaf = lat.cell(lat.level(lat.constants().k_max).front());
  const PointId outside = leaf.members.front() == 0 ? 1 : 0;
  if (!leaf.contains(outside)) CHECK_THROWS_AS(cell_truncation_F(K, S, f, outside, leaf), InvalidInput);
}

TEST_CASE("M_lambda examples") {
  const auto S = gen::uniform_line(10);
  const auto lam = DominatingFunction::power(3.0, 1.0, 2.0);
  CHECK(M_lambda(S, ones(2, 10), 5, lam) == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(oracle::brute_M_lambda(S, ones(2, 10), 5, lam) == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(M_lambda(S, FunctionTuple::zeros(2, 10), 5, lam) == 0.0);

  const MetricMeasureSpace single({1.0}, {0.0});
  const auto lam1 = DominatingFunction::power(2.5, 1.0, 2.0);
  const FunctionTuple ab(std::vector<std::vector<double>>{{0.7}, {1.3}});
  CHECK(M_lambda(single, ab, 0, lam1) == doctest::Approx(0.7 * 1.3 / (2.5 * 2.5)));
}

TEST_CASE("M_lambda is homogeneous in each slot") {
  const auto S = gen::random_cloud(20, 5);
  const auto lam = DominatingFunction::fit_power(S);
  std::mt19937_64 rng(4);
  const auto f = gen::random_ftuple(S, 2, rng);
  for (int t = 0; t < 10; ++t) {
    const double s = 3.0 * gen::uniform01(rng);
    auto g = f;
    for (auto& v : g[t % 2]) v *= s;
    for (PointId x = 0; x < S.size(); ++x)
      CHECK(M_lambda(S, g, x, lam) == doctest::Approx(s * M_lambda(S, f, x, lam)).epsilon(1e-12));
  }
}

TEST_CASE("grand maximal") {
  const auto S = gen::uniform_line(12);
  const Kernel K = kernel_for(S);
  std::mt19937_64 rng(5);
  const auto f = gen::random_ftuple(S, 2, rng);

  const Lattice one = coarse_lattice(S);
  REQUIRE(one.size() == 1);
  double expect = 0.0;
  for (PointId y : S.support()) expect = std::max(expect, std::abs(cell_truncation_F(K, S, f, y, one.cell(0))));
  CHECK(grand_maximal_M_T(K, S, f, 4, 0, one) == expect);

  const Lattice lat = fixtures::lab_lattice(S);
  for (const auto& c : lat.cells()) {
    if (c.level > lat.constants().k_min + 1) break;
    for (PointId x : c.members)
      CHECK(grand_maximal_M_T(K, S, f, x, c.id, lat) ==
            doctest::Approx(oracle::brute_grand_maximal(K, S, f, x, c.id, lat)).epsilon(1e-12));
  }

  // Every cell on the chain sees supp f inside its 30B: all F vanish.
  auto g = FunctionTuple::zeros(2, S.size());
  g[0][6] = g[1][6] = 1.0;
  const CellId leaf = *lat.cell_of(6, lat.constants().k_max);
  bool all_cover = true;
  for (CellId c : lat.chain(lat.level(lat.constants().k_min).front(), 6))
    all_cover &= lat.cell(c).contains(6) && S.dist(lat.cell(c).center, 6) <= 30.0 * lat.cell(c).radius;
  if (all_cover) CHECK(grand_maximal_M_T(K, S, g, 6, lat.level(lat.constants().k_min).front(), lat) == 0.0);
  CHECK(lat.cell(leaf).contains(6));
}

TEST_CASE("T* and grand maximal are monotone in |f|") {
  const auto S = gen::random_cloud(14, 8);
  const Kernel K = kernel_for(S);
  const Lattice lat = fixtures::lab_lattice(S);
  const CellId top = lat.level(lat.constants().k_min).front();
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    const auto f = gen::random_ftuple(S, 2, rng);
    auto g = f;
    for (int j = 0; j < 2; ++j)
      for (auto& v : g[j]) v += gen::uniform01(rng);
    for (PointId x : lat.cell(top).members) {
      CHECK(maximal_T_star(K, S, f, x) <= maximal_T_star(K, S, g, x));
      CHECK(grand_maximal_M_T(K, S, f, x, top, lat) <= grand_maximal_M_T(K, S, g, x, top, lat));
    }
  }
}

TEST_CASE("dyadic M_lambda") {
  const auto S = gen::uniform_line(12);
  const auto lam = DominatingFunction::fit_power(S);
  const Lattice one = coarse_lattice(S);
  std::mt19937_64 rng(7);
  const auto f = gen::random_ftuple(S, 2, rng);
  const auto& c = one.cell(0);
  double expect = 1.0;
  for (int j = 0; j < 2; ++j) expect *= S.ball_integral(c.center, 30.0 * c.radius, f[j]) / lam(c.center, c.radius);
  CHECK(M_lambda_dyadic(S, f, 3, 0, one, lam) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(M_lambda_dyadic(S, FunctionTuple::zeros(2, 12), 3, 0, one, lam) == 0.0);
  const Lattice lat = fixtures::lab_lattice(S);
  const CellId top = lat.level(lat.constants().k_min).front();
  for (PointId x : lat.cell(top).members)
    CHECK(M_lambda_dyadic(S, f, x, top, lat, lam) ==
          doctest::Approx(oracle::brute_M_lambda_dyadic(S, f, x, top, lat, lam)).epsilon(1e-12));
}

TEST_CASE("weighted dyadic maximal") {
  const auto S = gen::random_cloud(20, 2);
  const Lattice lat = fixtures::lab_lattice(S);
  std::mt19937_64 rng(8);
  std::vector<double> density(S.size()), f(S.size(), 1.0), unit(S.size(), 1.0);
  for (auto& d : density) d = std::exp(gen::uniform(rng, -1, 1));
  for (auto fam : {MaximalFamily::Cells, MaximalFamily::Balls30, MaximalFamily::Balls200})
    for (PointId x = 0; x < S.size(); ++x) CHECK(weighted_dyadic_maximal(S, f, x, density, lat, fam) == doctest::Approx(1.0));

  std::vector<double> g(S.size());
  for (auto& v : g) v = gen::uniform(rng, -1, 1);
  for (PointId x = 0; x < S.size(); ++x) {
    double expect = 0.0;
    for (const auto& c : lat.cells())
      if (c.contains(x)) {
        double num = 0.0, den = 0.0;
        for (PointId y : c.members) num += std::abs(g[y]) * S.mass(y), den += S.mass(y);
        expect = std::max(expect, num / den);
      }
    CHECK(weighted_dyadic_maximal(S, g, x, unit, lat) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(weighted_dyadic_maximal(S, g, x, density, lat, MaximalFamily::Balls30) ==
          doctest::Approx(oracle::brute_weighted_maximal(S, g, x, density, lat, MaximalFamily::Balls30)).epsilon(1e-12));
  }
}

TEST_CASE("pointwise comparison") {
  const auto S = gen::uniform_line(16);
  const Kernel K = kernel_for(S);
  const auto lam = DominatingFunction::fit_power(S);
  const Lattice lat = fixtures::lab_lattice(S);
  const CellId top = lat.level(lat.constants().k_min).front();
  const auto zero = check_pointwise_comparison(K, S, FunctionTuple::zeros(2, 16), top, lat, lam);
  CHECK(zero.table.empty());
  CHECK(zero.sup_ratio == 0.0);

  auto g = FunctionTuple::zeros(2, 16);
  g[0][3] = g[1][3] = 1.0;
  const auto one = check_pointwise_comparison(K, S, g, top, lat, lam);
  CHECK(one.finite);
  for (const auto& row : one.table)
    CHECK(row.ratio == doctest::Approx(std::abs(row.grand_maximal - row.t_star) / row.m_lambda));
}

TEST_CASE("two-cell recursion") {
  const auto S = gen::uniform_line(16);
  const Kernel K = kernel_for(S);
  const auto lam = DominatingFunction::fit_power(S);
  const Lattice lat = fixtures::lab_lattice(S);
  const auto& leaf = lat.cell(lat.level(lat.constants().k_max).front());
  REQUIRE(leaf.parent);
  const auto zero = check_recursion(K, S, FunctionTuple::zeros(2, 16), leaf.id, *leaf.parent, lat, lam, 4.0);
  CHECK(zero.ok);
  CHECK(zero.min_C == 0.0);

  std::mt19937_64 rng(9);
  const auto f = gen::random_ftuple(S, 2, rng);
  const auto same = check_recursion(K, S, f, leaf.id, leaf.id, lat, lam, 4.0);
  CHECK(same.min_C == 0.0);
  const auto nested = check_recursion(K, S, f, leaf.id, *leaf.parent, lat, lam, 4.0, 1e9);
  CHECK(nested.ok);
  CHECK(std::isfinite(nested.min_C));

  const auto other = lat.level(lat.constants().k_max).back();
  if (!lat.is_ancestor(other, leaf.id) && other != leaf.id)
    CHECK_THROWS_AS(check_recursion(K, S, f, leaf.id, other, lat, lam, 4.0), InvalidInput);
}

TEST_CASE("weak-type constant") {
  const auto S = gen::uniform_line(4);
  const auto f = ones(2, 4);
  // values 1 everywhere: sup_t t mu{v > t}^{1/2} = 4^{1/2} = 2 as t -> 1; norms are 4 * 4.
  CHECK(weak_type_constant(S, std::vector<double>(4, 1.0), f) == doctest::Approx(2.0 / 16.0));
}
