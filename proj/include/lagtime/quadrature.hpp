#pragma once

// Gauss rules on the half-line and on [-1, 1], grid integrators, and a
// panel integrator for oscillatory half-line Fourier integrals.
//
// Rules come from the Jacobi matrix of the orthogonal-polynomial family:
// its eigenvalues are the nodes; each node is then polished by Newton steps
// on the degree-N orthonormal polynomial. The weight at a node is the squared
// first component of the normalized Jacobi eigenvector, which equals the
// Christoffel number 1 / sum_j q_j(x)^2; that sum is evaluated from the
// three-term recurrence so small weights keep full relative accuracy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lagtime/errors.hpp"
#include "lagtime/specfun.hpp"
#include "lagtime/tridiagonal.hpp"

namespace lagtime {

struct QuadratureRule {
  int order = 0;
  double alpha_weight = 0.0;
  std::vector<double> nodes;               // strictly increasing, > 0
  std::vector<double> weights;             // for g(x) x^alpha e^{-x}; may under/overflow
  std::vector<double> log_weights;         // ln of weights, always finite
  std::vector<double> normalized_weights;  // weights / Gamma(alpha+1), sum to 1
  std::vector<double> halfline_weights;    // weights * e^{x} x^{-alpha}: rule for plain dx
  double log_mass = 0.0;                   // ln Gamma(alpha+1)
};

namespace detail {

// Orthonormal three-term recurrence b_{j+1} q_{j+1} = (x - a_j) q_j - b_j q_{j-1}.
// a has N entries, b has N+1 entries (b[0] unused).
struct JacobiRecurrence {
  std::vector<double> a;
  std::vector<double> b;
};

inline constexpr double kRescaleAbove = 1e100;
inline constexpr double kRescaleBy = 1e-100;

// Newton correction q_N(x)/q_N'(x).
inline double newton_step(const JacobiRecurrence& jr, int order, double x) {
  double qm1 = 0.0, q = 1.0, dqm1 = 0.0, dq = 0.0;
  for (int j = 0; j < order; ++j) {
    const double bj = j > 0 ? jr.b[j] : 0.0;
    const double qn = ((x - jr.a[j]) * q - bj * qm1) / jr.b[j + 1];
    const double dqn = ((x - jr.a[j]) * dq + q - bj * dqm1) / jr.b[j + 1];
    qm1 = q;
    q = qn;
    dqm1 = dq;
    dq = dqn;
    if (std::abs(q) > kRescaleAbove || std::abs(dq) > kRescaleAbove) {
      qm1 *= kRescaleBy;
      q *= kRescaleBy;
      dqm1 *= kRescaleBy;
      dq *= kRescaleBy;
    }
  }
  return q / dq;
}

// ln sum_{j<N} q_j(x)^2.
inline double log_christoffel_sum(const JacobiRecurrence& jr, int order, double x) {
  double qm1 = 0.0, q = 1.0, sum = 1.0, log_scale = 0.0;
  for (int j = 0; j + 1 < order; ++j) {
    const double bj = j > 0 ? jr.b[j] : 0.0;
    const double qn = ((x - jr.a[j]) * q - bj * qm1) / jr.b[j + 1];
    qm1 = q;
    q = qn;
    sum += q * q;
    if (std::abs(q) > kRescaleAbove) {
      qm1 *= kRescaleBy;
      q *= kRescaleBy;
      sum *= kRescaleBy * kRescaleBy;
      log_scale -= 2.0 * std::log(kRescaleBy);
    }
  }
  return std::log(sum) + log_scale;
}

struct NodesAndLogLambda {
  std::vector<double> nodes;
  std::vector<double> log_lambda;  // ln of probability-normalized weights
};

inline NodesAndLogLambda gauss_from_jacobi(const JacobiRecurrence& jr, int order) {
  std::vector<double> diag(jr.a.begin(), jr.a.begin() + order);
  std::vector<double> off(jr.b.begin() + 1, jr.b.begin() + order);
  auto eig = symmetric_tridiagonal_eigen(diag, off, EigenvectorMode::kNone);
  NodesAndLogLambda out;
  out.nodes = std::move(eig.values);
  out.log_lambda.resize(order);
  for (int k = 0; k < order; ++k) {
    double& x = out.nodes[k];
    for (int it = 0; it < 2; ++it) {
      const double dx = newton_step(jr, order, x);
      if (!std::isfinite(dx) || std::abs(dx) > 1e-8 * std::max(1.0, std::abs(x))) break;
      x -= dx;
    }
    out.log_lambda[k] = -log_christoffel_sum(jr, order, x);
  }
  return out;
}

}  // namespace detail

/// Generalized Gauss-Laguerre rule for the weight x^alpha e^{-x}; exact for
/// polynomial integrands of degree <= 2*order - 1.
inline QuadratureRule gauss_laguerre_rule(int order, double alpha_weight) {
  if (order < 1 || order > 512) {
    throw DomainError("gauss_laguerre_rule: order must lie in [1, 512], got " +
                      std::to_string(order));
  }
  if (!std::isfinite(alpha_weight) || !(alpha_weight > -1.0)) {
    throw DomainError("gauss_laguerre_rule: alpha_weight must exceed -1");
  }
  detail::JacobiRecurrence jr;
  jr.a.resize(order);
  jr.b.assign(order + 1, 0.0);
  for (int j = 0; j < order; ++j) jr.a[j] = 2.0 * j + alpha_weight + 1.0;
  for (int j = 1; j <= order; ++j) jr.b[j] = std::sqrt(j * (j + alpha_weight));

  auto nl = detail::gauss_from_jacobi(jr, order);
  QuadratureRule rule;
  rule.order = order;
  rule.alpha_weight = alpha_weight;
  rule.log_mass = std::lgamma(alpha_weight + 1.0);
  rule.nodes = std::move(nl.nodes);
  rule.weights.resize(order);
  rule.log_weights.resize(order);
  rule.normalized_weights.resize(order);
  rule.halfline_weights.resize(order);
  for (int k = 0; k < order; ++k) {
    const double x = rule.nodes[k];
    rule.log_weights[k] = rule.log_mass + nl.log_lambda[k];
    rule.weights[k] = std::exp(rule.log_weights[k]);
    rule.normalized_weights[k] = std::exp(nl.log_lambda[k]);
    rule.halfline_weights[k] = std::exp(rule.log_weights[k] + x - alpha_weight * std::log(x));
  }
  return rule;
}

/// Shared, write-once cache of Gauss-Laguerre rules keyed by (order, alpha).
inline std::shared_ptr<const QuadratureRule> cached_gauss_laguerre_rule(int order,
                                                                        double alpha_weight) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const QuadratureRule>> table;
  const auto key = std::make_pair(order, alpha_weight);
  {
    std::shared_lock lock(mutex);
    if (auto it = table.find(key); it != table.end()) return it->second;
  }
  auto built = std::make_shared<const QuadratureRule>(gauss_laguerre_rule(order, alpha_weight));
  std::unique_lock lock(mutex);
  return table.try_emplace(key, std::move(built)).first->second;
}

/// Gauss-Legendre rule on [-1, 1].
struct LegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline LegendreRule gauss_legendre_rule(int order) {
  if (order < 1 || order > 512) {
    throw DomainError("gauss_legendre_rule: order must lie in [1, 512]");
  }
  detail::JacobiRecurrence jr;
  jr.a.assign(order, 0.0);
  jr.b.assign(order + 1, 0.0);
  for (int j = 1; j <= order; ++j) jr.b[j] = j / std::sqrt(4.0 * j * j - 1.0);
  auto nl = detail::gauss_from_jacobi(jr, order);
  LegendreRule rule;
  rule.nodes = std::move(nl.nodes);
  rule.weights.resize(order);
  for (int k = 0; k < order; ++k) rule.weights[k] = 2.0 * std::exp(nl.log_lambda[k]);
  return rule;
}

inline const LegendreRule& cached_gauss_legendre_rule(int order) {
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<const LegendreRule>> table;
  {
    std::shared_lock lock(mutex);
    if (auto it = table.find(order); it != table.end()) return *it->second;
  }
  auto built = std::make_unique<const LegendreRule>(gauss_legendre_rule(order));
  std::unique_lock lock(mutex);
  return *table.try_emplace(order, std::move(built)).first->second;
}

/// ∫_0^∞ f(ω) dω by the substitution ω = omega0 x. f is the full integrand;
/// the rule's weight x^alpha e^{-x} is divided out through halfline_weights.
template <typename F>
auto integrate_halfline(F&& f, const QuadratureRule& rule, double omega0) {
  using R = decltype(f(1.0));
  CompensatedSum<std::conditional_t<std::is_same_v<R, Complex>, Complex, double>> sum;
  for (int k = 0; k < rule.order; ++k) {
    const auto v = f(omega0 * rule.nodes[k]);
    if (!std::isfinite(std::abs(v))) {
      throw NumericError("integrate_halfline: non-finite sample at node " + std::to_string(k));
    }
    sum.add(rule.halfline_weights[k] * v);
  }
  return omega0 * sum.value();
}

/// Σ λ_k g(x_k) with probability-normalized weights: equals
/// ∫ g(x) x^alpha e^{-x} dx / Gamma(alpha+1). Callers fold Gamma(alpha+1)
/// into their own prefactors in log space.
template <typename F>
auto integrate_normalized(F&& g, const QuadratureRule& rule) {
  using R = decltype(g(1.0));
  CompensatedSum<std::conditional_t<std::is_same_v<R, Complex>, Complex, double>> sum;
  for (int k = 0; k < rule.order; ++k) {
    sum.add(rule.normalized_weights[k] * g(rule.nodes[k]));
  }
  return sum.value();
}

class Grid1D {
 public:
  explicit Grid1D(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw UsageError("Grid1D: at least two points required");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] > points_[i - 1])) {
        throw UsageError("Grid1D: points must be strictly increasing");
      }
    }
  }

  static Grid1D uniform(double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) throw UsageError("Grid1D::uniform: need count >= 2 and hi > lo");
    std::vector<double> p(count);
    const double span = hi - lo;
    const double last = static_cast<double>(count - 1);
    // span * i / last keeps dyadic-friendly points (midpoints, half steps) exact.
    for (std::size_t i = 0; i < count; ++i) p[i] = lo + span * static_cast<double>(i) / last;
    p.back() = hi;
    return Grid1D(std::move(p));
  }

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<double> points_;
};

/// Complex function values on an explicit grid.
struct ComplexSamples {
  Grid1D grid;
  std::vector<Complex> values;

  ComplexSamples(Grid1D g, std::vector<Complex> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) {
      throw UsageError("ComplexSamples: value count must equal grid point count");
    }
  }
};

template <typename T>
T trapezoid(std::span<const T> values, const Grid1D& grid) {
  if (values.size() != grid.size()) {
    throw UsageError("integrate_grid: sample count " + std::to_string(values.size()) +
                     " does not match grid size " + std::to_string(grid.size()));
  }
  CompensatedSum<T> sum;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    sum.add(0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]));
  }
  return sum.value();
}

inline Complex integrate_grid(const ComplexSamples& samples) {
  return trapezoid<Complex>(samples.values, samples.grid);
}

inline Complex integrate_grid(std::span<const Complex> values, const Grid1D& grid) {
  return trapezoid<Complex>(values, grid);
}

inline double integrate_grid(std::span<const double> values, const Grid1D& grid) {
  return trapezoid<double>(values, grid);
}

struct OscillatoryOptions {
  double frequency = 0.0;        // |t| in e^{-iωt}; sets panel length 2π/|t|
  double scale = 1.0;            // ω0: panels never exceed this length
  double decay_rate = 0.5;       // envelope ~ e^{-decay_rate ω / scale} beyond the turning point
  double turning_point = 0.0;    // ω beyond which the envelope is monotone
  int panel_order = 24;
  double tail_tolerance = 1e-12;
  double accuracy_budget = 1e-8;
};

struct OscillatoryResult {
  Complex value;
  double tail_estimate = 0.0;
  std::size_t panels = 0;
};

/// ∫_0^∞ f(ω) dω for an oscillatory, exponentially decaying f. Panels of
/// length min(scale, 2π/frequency) are integrated with Gauss-Legendre and
/// summed until the tail bound drops below tail_tolerance.
template <typename F>
OscillatoryResult integrate_oscillatory_halfline(F&& f, const OscillatoryOptions& opt) {
  const auto& gl = cached_gauss_legendre_rule(opt.panel_order);
  double h = opt.scale;
  if (opt.frequency != 0.0) h = std::min(h, 2.0 * std::numbers::pi / std::abs(opt.frequency));
  const double decay_length = opt.scale / opt.decay_rate;
  const double limit = opt.turning_point + 80.0 * decay_length;

  CompensatedSum<Complex> sum;
  OscillatoryResult res;
  double lo = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  while (true) {
    const double hi = lo + h;
    const double mid = 0.5 * (lo + hi), half = 0.5 * h;
    double panel_max = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const Complex v = f(mid + half * gl.nodes[k]);
      panel_max = std::max(panel_max, std::abs(v));
      sum.add(half * gl.weights[k] * v);
    }
    const double edge = std::abs(Complex(f(hi)));
    ++res.panels;
    lo = hi;
    if (lo >= opt.turning_point) {
      tail = 4.0 * std::max(edge, 0.0) * decay_length;
      if (tail < opt.tail_tolerance && panel_max * h < opt.tail_tolerance) break;
    }
    if (lo > limit) break;
  }
  res.value = sum.value();
  res.tail_estimate = tail;
  if (!(tail <= opt.accuracy_budget)) {
    throw NumericError("integrate_oscillatory_halfline: tail estimate " + std::to_string(tail) +
                       " exceeds accuracy budget");
  }
  return res;
}

}  // namespace lagtime
