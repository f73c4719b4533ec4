#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdom/sparse.hpp"

namespace sdom {

/// Which of the three displayed forms of C_omega applies.
enum class Regime {
  Case1,  // 1/m < p <= 1
  Case2,  // p >= max_i p_i'
  Case3,  // otherwise
};

const char* to_string(Regime r);

/// Exponents p_1..p_m with 1/p = sum 1/p_i. Entries equal to 1 are accepted for
/// the A_P characteristic only (their conjugate is +inf).
class ExponentTuple {
 public:
  explicit ExponentTuple(std::vector<double> p);

  int m() const { return static_cast<int>(p_.size()); }
  double p(int i) const { return p_.at(i); }
  const std::vector<double>& values() const { return p_; }
  /// Harmonic exponent p.
  double p() const { return p_total_; }
  /// p_i' = p_i / (p_i - 1).
  double conj(int i) const;
  /// p' = p / (p - 1); requires p > 1.
  double p_conj() const;
  Regime regime() const;
  /// argmin_i p_i, ties to the lowest slot.
  int min_slot() const;
  /// argmax_i p_i', ties to the lowest slot.
  int max_conj_slot() const;
  bool all_greater_than_one() const;

 private:
  std::vector<double> p_;
  double p_total_ = 0.0;
};

/// Strictly positive weights w_1..w_m, one value per point.
struct WeightTuple {
  std::vector<std::vector<double>> w;

  WeightTuple() = default;
  explicit WeightTuple(std::vector<std::vector<double>> values);
  static WeightTuple ones(int m, std::size_t n);

  int m() const { return static_cast<int>(w.size()); }
  const std::vector<double>& operator[](std::size_t i) const { return w[i]; }
  void validate(std::size_t n) const;
};

/// nu_w = prod_j w_j^{p / p_j}.
std::vector<double> nu_w(const WeightTuple& w, const ExponentTuple& p);
/// sigma_i = w_i^{1 - p_i'}.
std::vector<double> sigma(const WeightTuple& w, const ExponentTuple& p, int i);

/// The per-ball A_P^rho expression
///   (mu(rho B)^{-1} int_B nu_w)^{1/p} prod_j (mu(rho B)^{-1} int_B w_j^{1-p_j'})^{1/p_j'},
/// with (min_{B cap W} w_j)^{-1} for p_j = 1. nullopt when mu(rho B) = 0.
std::optional<double> ap_ball_expression(const WeightTuple& w, const ExponentTuple& p, double rho,
                                         const MetricMeasureSpace& space, const Ball& ball);

struct ApCharacteristic {
  double value = 0.0;
  bool infinite = false;
  Ball argmax;
  std::size_t balls = 0;
  std::size_t skipped = 0;

  /// [w]_{A_P} in the p-th power normalization, value^p.
  double power_normalized(const ExponentTuple& p) const;
};

/// Supremum of ap_ball_expression over every center and every breakpoint radius.
ApCharacteristic ap_characteristic(const WeightTuple& w, const ExponentTuple& p, double rho,
                                   const MetricMeasureSpace& space);

/// (w_1, .., nu_w^{1-p'}, .., w_m) with exponents (p_1, .., p', .., p_m) in slot i.
std::pair<WeightTuple, ExponentTuple> dual_weight_tuple(const WeightTuple& w, const ExponentTuple& p, int i);

struct DualityCheck {
  double lhs = 0.0;  // [w^i] in the p-th power normalization
  double rhs = 0.0;  // [w]^{p_i'/p} in the p-th power normalization
  double max_rel_err = 0.0;
  std::size_t balls = 0;
  bool ok = false;
};

/// Per-ball identity E_{P^i}(w^i, B) = E_P(w, B)^{p_i'/p}, where E is the
/// p-th power of ap_ball_expression; the sup-level identity is checked as well.
DualityCheck check_duality_identity(const WeightTuple& w, const ExponentTuple& p, int i, double rho,
                                    const MetricMeasureSpace& space, double tol = 1e-9);

struct COmega {
  double value = 0.0;
  Regime regime = Regime::Case1;
  std::optional<CellId> argmax;
  std::size_t cells = 0;
  std::size_t skipped = 0;
};

/// The three-case constant. Case 1 takes the supremum over all lattice cells
/// (with p_0 = min p_i); cases 2 and 3 run over the cells of `layers` and use
/// their E sets.
COmega c_omega(const WeightTuple& w, const ExponentTuple& p, double alpha, const MetricMeasureSpace& space,
               const Lattice& lattice, const std::vector<SparseFamily>& layers);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double slack = 64.0;
  double c_omega = 0.0;
  Regime regime = Regime::Case1;
  bool ok = true;
};

/// ||A_S f||^p_{L^p(nu_w)} against C_omega prod_i ||f_i||^p_{L^{p_i}(w_i)}.
BoundCheck verify_sparse_weighted_bound(const std::vector<SparseFamily>& layers, const FunctionTuple& f,
                                        const WeightTuple& w, const ExponentTuple& p, double alpha,
                                        const MetricMeasureSpace& space, const Lattice& lattice,
                                        double slack = 64.0);

/// Runs the sparse domination and compares ||T* f||^p_{L^p(nu_w)} with
/// C_omega prod_i ||f_i||^p_{L^{p_i}(w_i)}.
BoundCheck verify_T_weighted_bound(const Kernel& kernel, const FunctionTuple& f, const WeightTuple& w,
                                   const ExponentTuple& p, const Lattice& lattice,
                                   const MetricMeasureSpace& space, const DominatingFunction& lambda,
                                   double alpha, const DominationConfig& config = {}, double slack = 64.0);

/// Same comparison reusing an existing domination result.
BoundCheck verify_T_weighted_bound(const Kernel& kernel, const FunctionTuple& f, const WeightTuple& w,
                                   const ExponentTuple& p, const DominationResult& result,
                                   const Lattice& lattice, const MetricMeasureSpace& space,
                                   TruncMode mode = TruncMode::Linf, double slack = 64.0);

}  // namespace sdom
