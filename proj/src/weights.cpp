#include "sdom/weights.hpp"

#include <algorithm>
#include <cmath>

namespace sdom {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Case1: return "case1";
    case Regime::Case2: return "case2";
    case Regime::Case3: return "case3";
  }
  return "?";
}

ExponentTuple::ExponentTuple(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InvalidInput("exponent tuple is empty");
  double inv = 0.0;
  for (double q : p_) {
    if (!std::isfinite(q) || q < 1.0) throw InvalidInput("exponents must be finite and at least 1");
    inv += 1.0 / q;
  }
  p_total_ = 1.0 / inv;
  if (p_total_ <= 1.0 / static_cast<double>(p_.size()))
    throw InvalidInput("harmonic exponent p must exceed 1/m");
}

double ExponentTuple::conj(int i) const {
  const double q = p_.at(i);
  return q == 1.0 ? INFINITY : q / (q - 1.0);
}

double ExponentTuple::p_conj() const {
  if (!(p_total_ > 1.0)) throw InvalidInput("p' needs p > 1 (p = " + std::to_string(p_total_) + ")");
  return p_total_ / (p_total_ - 1.0);
}

Regime ExponentTuple::regime() const {
  if (p_total_ <= 1.0) return Regime::Case1;
  return p_total_ >= conj(max_conj_slot()) ? Regime::Case2 : Regime::Case3;
}

int ExponentTuple::min_slot() const {
  return static_cast<int>(std::min_element(p_.begin(), p_.end()) - p_.begin());
}

int ExponentTuple::max_conj_slot() const { return min_slot(); }

bool ExponentTuple::all_greater_than_one() const {
  return std::all_of(p_.begin(), p_.end(), [](double q) { return q > 1.0; });
}

WeightTuple::WeightTuple(std::vector<std::vector<double>> values) : w(std::move(values)) {}

WeightTuple WeightTuple::ones(int m, std::size_t n) {
  return WeightTuple(std::vector<std::vector<double>>(m, std::vector<double>(n, 1.0)));
}

void WeightTuple::validate(std::size_t n) const {
  if (w.empty()) throw InvalidInput("weight tuple is empty");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].size() != n) throw InvalidInput("weight w" + std::to_string(i + 1) + " has wrong length");
    for (std::size_t x = 0; x < n; ++x)
      if (!(w[i][x] > 0.0) || !std::isfinite(w[i][x]))
        throw InvalidInput("weight w" + std::to_string(i + 1) + " is not positive at point " + std::to_string(x));
  }
}

namespace {

void require_match(const WeightTuple& w, const ExponentTuple& p) {
  if (w.m() != p.m())
    throw InvalidInput("weights have " + std::to_string(w.m()) + " slots, exponents " + std::to_string(p.m()));
}

double integral(const MetricMeasureSpace& space, const PointSet& pts, const std::vector<double>& g) {
  double s = 0.0;
  for (PointId y : pts) s += g[y] * space.mass(y);
  return s;
}

}  // namespace

std::vector<double> nu_w(const WeightTuple& w, const ExponentTuple& p) {
  require_match(w, p);
  const std::size_t n = w[0].size();
  w.validate(n);
  std::vector<double> out(n, 1.0);
  for (int j = 0; j < w.m(); ++j)
    for (std::size_t x = 0; x < n; ++x) out[x] *= std::pow(w[j][x], p.p() / p.p(j));
  return out;
}

std::vector<double> sigma(const WeightTuple& w, const ExponentTuple& p, int i) {
  require_match(w, p);
  if (i < 0 || i >= w.m()) throw InvalidInput("slot " + std::to_string(i) + " out of range");
  if (!(p.p(i) > 1.0)) throw InvalidInput("sigma needs p_i > 1");
  w.validate(w[0].size());
  const double e = 1.0 - p.conj(i);
  std::vector<double> out(w[i].size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = std::pow(w[i][x], e);
  return out;
}

namespace {

struct ApPrep {
  std::vector<double> nu;
  std::vector<std::vector<double>> sig;  // empty for p_j = 1
};

ApPrep prepare(const WeightTuple& w, const ExponentTuple& p) {
  ApPrep prep;
  prep.nu = nu_w(w, p);
  prep.sig.resize(w.m());
  for (int j = 0; j < w.m(); ++j)
    if (p.p(j) > 1.0) prep.sig[j] = sigma(w, p, j);
  return prep;
}

std::optional<double> ball_expression(const ApPrep& prep, const WeightTuple& w, const ExponentTuple& p,
                                      double rho, const MetricMeasureSpace& space, const Ball& ball) {
  const double denom = space.ball_measure(ball.center, rho * ball.radius);
  if (!(denom > 0.0)) return std::nullopt;
  const PointSet pts = space.ball_points(ball);
  double value = std::pow(integral(space, pts, prep.nu) / denom, 1.0 / p.p());
  for (int j = 0; j < w.m(); ++j) {
    if (p.p(j) == 1.0) {
      double lo = INFINITY;
      for (PointId y : pts)
        if (space.in_support(y)) lo = std::min(lo, w[j][y]);
      value *= 1.0 / lo;
    } else {
      value *= std::pow(integral(space, pts, prep.sig[j]) / denom, 1.0 / p.conj(j));
    }
  }
  return value;
}

void require_rho(double rho) {
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw InvalidInput("rho must be at least 1");
}

}  // namespace

std::optional<double> ap_ball_expression(const WeightTuple& w, const ExponentTuple& p, double rho,
                                         const MetricMeasureSpace& space, const Ball& ball) {
  require_rho(rho);
  space.require_point(ball.center);
  return ball_expression(prepare(w, p), w, p, rho, space, ball);
}

double ApCharacteristic::power_normalized(const ExponentTuple& p) const { return std::pow(value, p.p()); }

ApCharacteristic ap_characteristic(const WeightTuple& w, const ExponentTuple& p, double rho,
                                   const MetricMeasureSpace& space) {
  require_rho(rho);
  const ApPrep prep = prepare(w, p);
  ApCharacteristic out;
  for (PointId x = 0; x < space.size(); ++x)
    for (double r : space.breakpoint_radii(x)) {
      const Ball b{x, r};
      const auto v = ball_expression(prep, w, p, rho, space, b);
      if (!v) {
        ++out.skipped;
        continue;
      }
      ++out.balls;
      if (std::isinf(*v)) out.infinite = true;
      if (out.balls == 1 || *v > out.value) {
        out.value = *v;
        out.argmax = b;
      }
    }
  return out;
}

std::pair<WeightTuple, ExponentTuple> dual_weight_tuple(const WeightTuple& w, const ExponentTuple& p, int i) {
  require_match(w, p);
  if (i < 0 || i >= w.m()) throw InvalidInput("slot " + std::to_string(i) + " out of range");
  const double pc = p.p_conj();
  const auto nu = nu_w(w, p);
  WeightTuple dw = w;
  for (std::size_t x = 0; x < nu.size(); ++x) dw.w[i][x] = std::pow(nu[x], 1.0 - pc);
  std::vector<double> exps = p.values();
  exps[i] = pc;
  return {std::move(dw), ExponentTuple(std::move(exps))};
}

DualityCheck check_duality_identity(const WeightTuple& w, const ExponentTuple& p, int i, double rho,
                                    const MetricMeasureSpace& space, double tol) {
  require_rho(rho);
  const auto [dw, dp] = dual_weight_tuple(w, p, i);
  const ApPrep prep = prepare(w, p);
  const ApPrep dprep = prepare(dw, dp);
  const double e = p.conj(i) / p.p();
  DualityCheck out;
  double sup_orig = 0.0, sup_dual = 0.0;
  for (PointId x = 0; x < space.size(); ++x)
    for (double r : space.breakpoint_radii(x)) {
      const auto a = ball_expression(prep, w, p, rho, space, {x, r});
      const auto b = ball_expression(dprep, dw, dp, rho, space, {x, r});
      if (!a || !b) continue;
      ++out.balls;
      const double orig = std::pow(*a, p.p());
      const double dual = std::pow(*b, dp.p());
      const double want = std::pow(orig, e);
      out.max_rel_err = std::max(out.max_rel_err, std::abs(dual - want) / std::max(std::abs(want), 1e-300));
      sup_orig = std::max(sup_orig, orig);
      sup_dual = std::max(sup_dual, dual);
    }
  out.lhs = sup_dual;
  out.rhs = std::pow(sup_orig, e);
  const double sup_err = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
  out.max_rel_err = std::max(out.max_rel_err, sup_err);
  out.ok = out.max_rel_err <= tol;
  return out;
}

COmega c_omega(const WeightTuple& w, const ExponentTuple& p, double alpha, const MetricMeasureSpace& space,
               const Lattice& lattice, const std::vector<SparseFamily>& layers) {
  require_match(w, p);
  if (!p.all_greater_than_one()) throw InvalidInput("C_omega needs every p_i > 1");
  const int m = w.m();
  const auto nu = nu_w(w, p);
  std::vector<std::vector<double>> sig(m);
  for (int i = 0; i < m; ++i) sig[i] = sigma(w, p, i);

  COmega out;
  out.regime = p.regime();
  const double pp = p.p();
  auto consider = [&](CellId id, double log_value) {
    ++out.cells;
    if (!out.argmax || log_value > std::log(out.value)) {
      out.value = std::exp(log_value);
      out.argmax = id;
    }
  };

  if (out.regime == Regime::Case1) {
    const double p0c = p.conj(p.min_slot());
    for (const Cell& Q : lattice.cells()) {
      const PointSet ab = space.ball_points(Q.ball(alpha));
      const double muQ = space.measure(Q.members);
      const double muB = space.measure(ab);
      if (!(muQ > 0.0) || !(muB > 0.0)) {
        ++out.skipped;
        continue;
      }
      double lv = p0c * std::log(integral(space, Q.members, nu));
      for (int i = 0; i < m; ++i) lv += pp * p0c / p.conj(i) * std::log(integral(space, ab, sig[i]));
      lv -= m * pp * std::log(muB) + m * pp * (p0c - 1.0) * std::log(muQ);
      consider(Q.id, lv);
    }
    return out;
  }

  std::size_t total = 0;
  for (const auto& fam : layers) total += fam.size();
  if (total == 0) throw InvalidInput("C_omega in " + std::string(to_string(out.regime)) + " needs a nonempty sparse family");
  const double pc = p.p_conj();
  const double p0c = out.regime == Regime::Case2 ? 1.0 : p.conj(p.max_conj_slot());
  for (const auto& fam : layers)
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const Cell& Q = lattice.cell(fam.cells[k]);
      const PointSet& E = fam.E[k];
      const PointSet ab = space.ball_points(Q.ball(alpha));
      const double muB = space.measure(ab);
      const double nuE = integral(space, E, nu);
      if (!(muB > 0.0) || !(nuE > 0.0)) {
        ++out.skipped;
        continue;
      }
      double lv = p0c * std::log(integral(space, Q.members, nu));
      for (int i = 0; i < m; ++i) lv += p0c * std::log(integral(space, ab, sig[i]));
      lv -= m * p0c * std::log(muB) + p0c / pc * std::log(nuE);
      for (int i = 0; i < m; ++i) lv -= p0c / p.p(i) * std::log(integral(space, E, sig[i]));
      consider(Q.id, lv);
    }
  return out;
}

namespace {

double weighted_norms(const FunctionTuple& f, const WeightTuple& w, const ExponentTuple& p,
                      const MetricMeasureSpace& space) {
  double prod = 1.0;
  for (int i = 0; i < p.m(); ++i) {
    double s = 0.0;
    for (PointId x = 0; x < space.size(); ++x) s += std::pow(std::abs(f[i][x]), p.p(i)) * w[i][x] * space.mass(x);
    prod *= std::pow(s, p.p() / p.p(i));
  }
  return prod;
}

BoundCheck finish(double lhs, const COmega& c, double norms, double slack) {
  BoundCheck out;
  out.lhs = lhs;
  out.c_omega = c.value;
  out.regime = c.regime;
  out.rhs = c.value * norms;
  out.slack = slack;
  if (lhs > 0.0) out.ratio = out.rhs > 0.0 ? lhs / out.rhs : INFINITY;
  out.ok = out.ratio <= slack;
  return out;
}

}  // namespace

BoundCheck verify_sparse_weighted_bound(const std::vector<SparseFamily>& layers, const FunctionTuple& f,
                                        const WeightTuple& w, const ExponentTuple& p, double alpha,
                                        const MetricMeasureSpace& space, const Lattice& lattice, double slack) {
  f.validate(space, p.m());
  const auto nu = nu_w(w, p);
  double lhs = 0.0;
  for (PointId x = 0; x < space.size(); ++x) {
    if (!space.in_support(x)) continue;
    lhs += std::pow(sparse_operator(layers, f, x, lattice, space), p.p()) * nu[x] * space.mass(x);
  }
  const double norms = weighted_norms(f, w, p, space);
  if (lhs == 0.0) {
    BoundCheck out;
    out.slack = slack;
    out.regime = p.regime();
    return out;
  }
  return finish(lhs, c_omega(w, p, alpha, space, lattice, layers), norms, slack);
}

BoundCheck verify_T_weighted_bound(const Kernel& kernel, const FunctionTuple& f, const WeightTuple& w,
                                   const ExponentTuple& p, const DominationResult& result, const Lattice& lattice,
                                   const MetricMeasureSpace& space, TruncMode mode, double slack) {
  f.validate(space, p.m());
  const auto nu = nu_w(w, p);
  double lhs = 0.0;
  for (PointId x = 0; x < space.size(); ++x) {
    if (!space.in_support(x)) continue;
    lhs += std::pow(maximal_T_star(kernel, space, f, x, mode), p.p()) * nu[x] * space.mass(x);
  }
  if (lhs == 0.0) {
    BoundCheck out;
    out.slack = slack;
    out.regime = p.regime();
    return out;
  }
  return finish(lhs, c_omega(w, p, result.alpha, space, lattice, result.layers), weighted_norms(f, w, p, space),
                slack);
}

BoundCheck verify_T_weighted_bound(const Kernel& kernel, const FunctionTuple& f, const WeightTuple& w,
                                   const ExponentTuple& p, const Lattice& lattice, const MetricMeasureSpace& space,
                                   const DominatingFunction& lambda, double alpha, const DominationConfig& config,
                                   double slack) {
  if (f.is_zero()) {
    BoundCheck out;
    out.slack = slack;
    out.regime = p.regime();
    return out;
  }
  const auto result = build_sparse_domination(kernel, f, {}, lattice, space, lambda, alpha, config);
  return verify_T_weighted_bound(kernel, f, w, p, result, lattice, space, config.mode, slack);
}

}  // namespace sdom
