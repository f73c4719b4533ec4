#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "sdom/report.hpp"
#include "sdom/space.hpp"

namespace sdom {

/// Modulus of continuity omega on (0, 1].
class Modulus {
 public:
  enum class Kind { Power, Zero };

  /// omega(t) = t^delta.
  static Modulus power(double delta);
  /// omega == 0.
  static Modulus zero();

  double operator()(double t) const;
  /// sum_{j >= 0} omega(2^-j): sixty explicit terms plus the closed-form geometric tail.
  double dini_norm() const;
  Kind kind() const { return kind_; }
  double delta() const { return delta_; }

 private:
  Kind kind_ = Kind::Power;
  double delta_ = 1.0;
};

enum class KernelFamily {
  /// K(x, y) = lambda(x, sum_j d(x, y_j))^{-m}; satisfies the size bound with constant 1.
  LambdaSum,
  /// K(x, y) = (sum_j d(x, y_j))^{-m n}.
  PowerSum,
  Custom,
};

const char* to_string(KernelFamily f);
KernelFamily parse_kernel_family(const std::string& s);

/// m-linear kernel defined off the full diagonal x = y_1 = ... = y_m.
class Kernel {
 public:
  using Eval = std::function<double(const MetricMeasureSpace&, PointId, std::span<const PointId>)>;

  /// Builtin families paired with a power-form lambda(x, r) = c (1 + r)^n.
  /// The regularity constant defaults to 2 m^3 n 2^{m n}, an analytic bound for
  /// LambdaSum with delta <= 1.
  static Kernel builtin(KernelFamily family, const DominatingFunction& lambda, int m, double delta = 1.0,
                        double size_const = 1.0);
  static Kernel custom(int m, Eval eval, double size_const, double reg_const, Modulus omega);

  int m() const { return m_; }
  double size_const() const { return size_const_; }
  double reg_const() const { return reg_const_; }
  const Modulus& omega() const { return omega_; }
  KernelFamily family() const { return family_; }

  double operator()(const MetricMeasureSpace& space, PointId x, std::span<const PointId> ys) const {
    return scale_ * eval_(space, x, ys);
  }

  /// Same kernel multiplied by t (constants unchanged).
  Kernel scaled(double t) const;
  Kernel with_modulus(Modulus omega) const;
  Kernel with_constants(double size_const, double reg_const) const;

 private:
  int m_ = 2;
  double size_const_ = 1.0;
  double reg_const_ = 1.0;
  double scale_ = 1.0;
  Modulus omega_;
  KernelFamily family_ = KernelFamily::Custom;
  Eval eval_;
};

struct SampleSpec {
  std::uint64_t exhaustive_limit = 10'000'000;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

/// |K(x, y)| <= C_K min_j lambda(x, d(x, y_j))^{-m}. Reports the worst ratio
/// |K| / min_j lambda^{-m}; full-diagonal tuples are skipped and counted.
ValidationReport check_kernel_size(const Kernel& kernel, const MetricMeasureSpace& space,
                                   const DominatingFunction& lambda, const SampleSpec& spec = {});

/// Both x-slot and y_j-slot regularity inequalities, tested only on tuples that
/// pass the gate d(x, x') <= max_j d(x, y_j) / 2 (resp. d(y_j, y_j')).
ValidationReport check_kernel_regularity(const Kernel& kernel, const MetricMeasureSpace& space,
                                         const DominatingFunction& lambda, const SampleSpec& spec = {});

}  // namespace sdom
