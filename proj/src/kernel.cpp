#include "sdom/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace sdom {

Modulus Modulus::power(double delta) {
  if (!(delta > 0.0)) throw InvalidInput("modulus exponent must be positive");
  Modulus w;
  w.kind_ = Kind::Power;
  w.delta_ = delta;
  return w;
}

Modulus Modulus::zero() {
  Modulus w;
  w.kind_ = Kind::Zero;
  w.delta_ = 0.0;
  return w;
}

double Modulus::operator()(double t) const {
  if (kind_ == Kind::Zero) return 0.0;
  return std::pow(t, delta_);
}

double Modulus::dini_norm() const {
  if (kind_ == Kind::Zero) return 0.0;
  double s = 0.0;
  for (int j = 0; j <= 60; ++j) s += std::pow(2.0, -j * delta_);
  const double q = std::pow(2.0, -delta_);
  return s + std::pow(q, 61) / (1.0 - q);
}

const char* to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::LambdaSum: return "lambda-sum";
    case KernelFamily::PowerSum: return "power-sum";
    case KernelFamily::Custom: return "custom";
  }
  return "custom";
}

KernelFamily parse_kernel_family(const std::string& s) {
  if (s == "lambda-sum" || s == "builtin") return KernelFamily::LambdaSum;
  if (s == "power-sum") return KernelFamily::PowerSum;
  throw InvalidInput("unknown kernel family '" + s + "' (expected lambda-sum|power-sum)");
}

Kernel Kernel::builtin(KernelFamily family, const DominatingFunction& lambda, int m, double delta,
                       double size_const) {
  if (m < 2) throw InvalidInput("kernel linearity m must be >= 2");
  if (lambda.form() != DominatingFunction::Form::Power)
    throw InvalidInput("builtin kernels need a power-form dominating function");
  const double c = lambda.c();
  const double n = lambda.n();
  Kernel k;
  k.m_ = m;
  k.family_ = family;
  k.size_const_ = size_const;
  k.omega_ = Modulus::power(delta);
  const double md = m;
  k.reg_const_ = std::max(1.0, 2.0 * md * md * md * n * std::pow(2.0, md * n));
  if (family == KernelFamily::LambdaSum) {
    k.eval_ = [c, n, m](const MetricMeasureSpace& sp, PointId x, std::span<const PointId> ys) {
      double s = 0.0;
      for (PointId y : ys) s += sp.dist(x, y);
      return std::pow(c * std::pow(1.0 + s, n), -m);
    };
  } else if (family == KernelFamily::PowerSum) {
    k.eval_ = [n, m](const MetricMeasureSpace& sp, PointId x, std::span<const PointId> ys) {
      double s = 0.0;
      for (PointId y : ys) s += sp.dist(x, y);
      return std::pow(s, -m * n);
    };
  } else {
    throw InvalidInput("custom kernels are built with Kernel::custom");
  }
  return k;
}

Kernel Kernel::custom(int m, Eval eval, double size_const, double reg_const, Modulus omega) {
  if (m < 2) throw InvalidInput("kernel linearity m must be >= 2");
  Kernel k;
  k.m_ = m;
  k.eval_ = std::move(eval);
  k.size_const_ = size_const;
  k.reg_const_ = reg_const;
  k.omega_ = omega;
  k.family_ = KernelFamily::Custom;
  return k;
}

Kernel Kernel::scaled(double t) const {
  Kernel k = *this;
  k.scale_ *= t;
  return k;
}

Kernel Kernel::with_modulus(Modulus omega) const {
  Kernel k = *this;
  k.omega_ = omega;
  return k;
}

Kernel Kernel::with_constants(double size_const, double reg_const) const {
  Kernel k = *this;
  k.size_const_ = size_const;
  k.reg_const_ = reg_const;
  return k;
}

namespace {

bool full_diagonal(PointId x, std::span<const PointId> ys) {
  return std::all_of(ys.begin(), ys.end(), [x](PointId y) { return y == x; });
}

double ipow(double b, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

// Visits every index tuple of length `len` over [0, n), or a seeded random sample
// when n^len exceeds the exhaustive limit.
template <class Fn>
bool for_tuples(std::size_t n, std::size_t len, const SampleSpec& spec, Fn&& fn) {
  const double total = ipow(static_cast<double>(n), len);
  std::vector<PointId> t(len, 0);
  if (total <= static_cast<double>(spec.exhaustive_limit)) {
    for (;;) {
      fn(std::span<const PointId>(t));
      std::size_t i = 0;
      while (i < len && ++t[i] == n) t[i++] = 0;
      if (i == len) break;
    }
    return true;
  }
  std::mt19937_64 rng(spec.seed);
  for (std::uint64_t s = 0; s < spec.samples; ++s) {
    for (auto& v : t) v = rng() % n;
    fn(std::span<const PointId>(t));
  }
  return false;
}

double min_size_factor(const MetricMeasureSpace& space, const DominatingFunction& lambda, PointId x,
                       std::span<const PointId> ys, int m) {
  double best = INFINITY;
  for (PointId y : ys) best = std::min(best, std::pow(lambda(x, space.dist(x, y)), -m));
  return best;
}

}  // namespace

ValidationReport check_kernel_size(const Kernel& kernel, const MetricMeasureSpace& space,
                                   const DominatingFunction& lambda, const SampleSpec& spec) {
  ValidationReport rep;
  rep.subject = "kernel-size";
  const int m = kernel.m();
  const bool exhaustive = for_tuples(space.size(), m + 1, spec, [&](std::span<const PointId> t) {
    const PointId x = t[0];
    const auto ys = t.subspan(1);
    if (full_diagonal(x, ys)) {
      ++rep.skipped;
      return;
    }
    ++rep.checked;
    const double k = std::abs(kernel(space, x, ys));
    const double ratio = k / min_size_factor(space, lambda, x, ys, m);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_witness.assign(t.begin(), t.end());
    }
    if (ratio > kernel.size_const())
      rep.add({"size", "|K| exceeds C_K min_j lambda^-m", {t.begin(), t.end()}, NAN, ratio, kernel.size_const()});
  });
  rep.notes.push_back(exhaustive ? "exhaustive" : "sampled");
  rep.notes.push_back("diagonal tuples skipped: " + std::to_string(rep.skipped));
  return rep;
}

ValidationReport check_kernel_regularity(const Kernel& kernel, const MetricMeasureSpace& space,
                                         const DominatingFunction& lambda, const SampleSpec& spec) {
  ValidationReport rep;
  rep.subject = "kernel-regularity";
  const int m = kernel.m();
  const std::size_t n = space.size();
  const auto& omega = kernel.omega();
  std::vector<PointId> ys2(m);

  auto test = [&](double lhs, double rhs, std::span<const PointId> witness, const char* slot) {
    ++rep.checked;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_witness.assign(witness.begin(), witness.end());
    }
    if (lhs > kernel.reg_const() * rhs)
      rep.add({std::string("regularity-") + slot, "kernel difference exceeds modulus bound",
               {witness.begin(), witness.end()}, NAN, lhs, kernel.reg_const() * rhs});
  };

  // Tuple layout: (x, x', y_1..y_m); the y-slot pass reinterprets x' as y_j'.
  const bool exhaustive = for_tuples(n, m + 2, spec, [&](std::span<const PointId> t) {
    const PointId x = t[0];
    const PointId alt = t[1];
    const auto ys = t.subspan(2);
    if (full_diagonal(x, ys)) return;
    double maxd = 0.0, sumd = 0.0;
    for (PointId y : ys) {
      maxd = std::max(maxd, space.dist(x, y));
      sumd += space.dist(x, y);
    }
    const double size = min_size_factor(space, lambda, x, ys, m);
    const double k0 = kernel(space, x, ys);
    // x-slot
    if (alt != x && space.dist(x, alt) <= 0.5 * maxd && !full_diagonal(alt, ys)) {
      const double lhs = std::abs(k0 - kernel(space, alt, ys));
      test(lhs, size * omega(space.dist(x, alt) / sumd), t, "x");
    }
    // y_j-slots
    for (int j = 0; j < m; ++j) {
      if (alt == ys[j] || !(space.dist(ys[j], alt) <= 0.5 * maxd)) continue;
      std::copy(ys.begin(), ys.end(), ys2.begin());
      ys2[j] = alt;
      if (full_diagonal(x, ys2)) continue;
      const double lhs = std::abs(k0 - kernel(space, x, ys2));
      test(lhs, size * omega(space.dist(ys[j], alt) / sumd), t, "y");
    }
  });
  rep.notes.push_back(exhaustive ? "exhaustive" : "sampled");
  if (rep.checked == 0) {
    rep.vacuous = true;
    rep.notes.push_back("vacuous: no tuple passes the gate");
  }
  return rep;
}

}  // namespace sdom
