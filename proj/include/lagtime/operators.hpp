#pragma once

// Banded Hamiltonian matrices in the mode basis plus the moments built on them.
//
// Sign convention: with positive normalizations c_n^α the three-term
// recurrence x L_n = -(n+1) L_{n+1} + (2n+α+1) L_n - (n+α) L_{n-1} gives
// <m|H|n> = -sqrt((n+1)(n+α+1)) ω0 for m = n+1.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "lagtime/errors.hpp"
#include "lagtime/modes.hpp"
#include "lagtime/quadrature.hpp"
#include "lagtime/specfun.hpp"
#include "lagtime/tridiagonal.hpp"

namespace lagtime {

/// Symmetric banded real matrix; element(m, n) is zero outside |m-n| <= half_bandwidth.
class BandedOperator {
 public:
  BandedOperator(int dim, int half_bandwidth, int energy_power)
      : dim_(dim), half_bandwidth_(half_bandwidth), energy_power_(energy_power) {
    if (dim < 1) throw DomainError("BandedOperator: dim must be positive");
    if (half_bandwidth < 0) throw DomainError("BandedOperator: negative bandwidth");
    bands_.resize(half_bandwidth + 1);
    for (int k = 0; k <= half_bandwidth; ++k) bands_[k].assign(std::max(dim - k, 0), 0.0);
  }

  int dim() const { return dim_; }
  int half_bandwidth() const { return half_bandwidth_; }
  /// Power of ω0 carried by the entries (1 for H, 2 for H^2).
  int energy_power() const { return energy_power_; }

  double element(int m, int n) const {
    if (m < 0 || n < 0 || m >= dim_ || n >= dim_) {
      throw UsageError("BandedOperator::element: index out of range");
    }
    const int k = std::abs(m - n);
    if (k > half_bandwidth_) return 0.0;
    return bands_[k][std::min(m, n)];
  }

  void set(int m, int n, double value) {
    const int k = std::abs(m - n);
    if (k > half_bandwidth_) throw UsageError("BandedOperator::set: outside band");
    bands_[k][std::min(m, n)] = value;
  }

  /// Diagonal (k = 0) or k-th super-diagonal.
  const std::vector<double>& band(int k) const { return bands_.at(k); }

  std::vector<double> to_dense() const {
    std::vector<double> out(static_cast<std::size_t>(dim_) * dim_, 0.0);
    for (int k = 0; k <= half_bandwidth_; ++k) {
      for (int i = 0; i + k < dim_; ++i) {
        out[static_cast<std::size_t>(i) * dim_ + i + k] = bands_[k][i];
        out[static_cast<std::size_t>(i + k) * dim_ + i] = bands_[k][i];
      }
    }
    return out;
  }

 private:
  int dim_;
  int half_bandwidth_;
  int energy_power_;
  std::vector<std::vector<double>> bands_;
};

namespace detail {

inline void check_matrix_args(int nmax, double alpha, double omega0, const char* who) {
  if (nmax < 1) throw DomainError(std::string(who) + ": nmax must be >= 1");
  ModeSpec(0, alpha, omega0);  // validates alpha and omega0
}

// Exact infinite-basis elements in omega0 = 1 units.
inline double h_diag(int n, double a) { return a + 2.0 * n + 1.0; }
inline double h_off(int n, double a) { return -std::sqrt((n + 1.0) * (n + a + 1.0)); }

}  // namespace detail

/// d¹: tridiagonal matrix of H = ω over modes 0..nmax-1.
inline BandedOperator hamiltonian_matrix(int nmax, double alpha, double omega0) {
  detail::check_matrix_args(nmax, alpha, omega0, "hamiltonian_matrix");
  BandedOperator h(nmax, 1, 1);
  for (int n = 0; n < nmax; ++n) {
    h.set(n, n, detail::h_diag(n, alpha) * omega0);
    if (n + 1 < nmax) h.set(n, n + 1, detail::h_off(n, alpha) * omega0);
  }
  return h;
}

/// d²: pentadiagonal matrix of H² over modes 0..nmax-1. These are the
/// infinite-basis elements (products through the full band), not the
/// elementwise square of d¹.
inline BandedOperator hamiltonian_sq_matrix(int nmax, double alpha, double omega0) {
  detail::check_matrix_args(nmax, alpha, omega0, "hamiltonian_sq_matrix");
  const double w2 = omega0 * omega0;
  BandedOperator h2(nmax, 2, 2);
  for (int n = 0; n < nmax; ++n) {
    const double a = alpha;
    const double diag = (n + 1.0) * (a + n + 1.0) + detail::h_diag(n, a) * detail::h_diag(n, a) +
                        n * (a + n);
    h2.set(n, n, diag * w2);
    if (n + 1 < nmax) {
      h2.set(n, n + 1,
             detail::h_off(n, a) * (detail::h_diag(n, a) + detail::h_diag(n + 1, a)) * w2);
    }
    if (n + 2 < nmax) h2.set(n, n + 2, detail::h_off(n, a) * detail::h_off(n + 1, a) * w2);
  }
  return h2;
}

/// ∫ ω^power φ_m^α φ_n^α dω by Gauss-Laguerre quadrature (exact for these
/// polynomial-times-weight integrands).
inline double matrix_element_quadrature(int m, int n, double alpha, double omega0, int power) {
  const int order = std::min(512, m + n + power + 8);
  const auto rule = cached_gauss_laguerre_rule(order, alpha);
  const double log_pref =
      log_normalization_unit(m, alpha) + log_normalization_unit(n, alpha) + rule->log_mass;
  const double s = integrate_normalized(
      [&](double x) { return std::pow(x, power) * laguerre(m, alpha, x) * laguerre(n, alpha, x); },
      *rule);
  return std::exp(log_pref) * s * std::pow(omega0, power);
}

struct EnergyMoments {
  double mean = 0.0;      // ω0
  double second = 0.0;    // ω0²
  double variance = 0.0;  // ω0²
};

/// <H>, <H²> and (ΔH)² in mode n.
inline EnergyMoments energy_moments(const ModeSpec& mode) {
  const double n = mode.n(), a = mode.alpha(), w = mode.omega0();
  EnergyMoments e;
  e.mean = (a + 2.0 * n + 1.0) * w;
  e.variance = ((n + 1.0) * (a + n + 1.0) + n * (a + n)) * w * w;
  e.second = e.variance + (a + 2.0 * n + 1.0) * (a + 2.0 * n + 1.0) * w * w;
  return e;
}

struct SpectrumResult {
  std::vector<double> eigenvalues;                // ascending, units of ω0
  std::vector<std::vector<double>> eigenvectors;  // eigenvectors[j] pairs with eigenvalues[j]
  int truncation_dim = 0;
};

/// Eigen-decomposition of the nmax x nmax truncation of d¹.
inline SpectrumResult spectrum_truncated(int nmax, double alpha, double omega0) {
  if (nmax < 2 || nmax > 2048) throw DomainError("spectrum_truncated: nmax must lie in [2, 2048]");
  const auto h = hamiltonian_matrix(nmax, alpha, omega0);
  auto eig = symmetric_tridiagonal_eigen(h.band(0), h.band(1), EigenvectorMode::kFull);
  SpectrumResult out;
  out.truncation_dim = nmax;
  out.eigenvectors.assign(nmax, std::vector<double>(nmax));
  for (int j = 0; j < nmax; ++j) {
    for (int r = 0; r < nmax; ++r) out.eigenvectors[j][r] = eig.vector_component(r, j);
  }
  out.eigenvalues = std::move(eig.values);
  return out;
}

/// ∫ φ_l^{α-2} φ_n^α dω: dimensionless, independent of ω0.
inline double cross_alpha_overlap(int l, int n, double alpha, double omega0 = 1.0) {
  if (l < 0 || n < 0) throw DomainError("cross_alpha_overlap: indices must be non-negative");
  if (!(alpha >= 2.0)) throw DomainError("cross_alpha_overlap: alpha must be >= 2");
  ModeSpec(n, alpha, omega0);
  // Integrand c c' x^{α-1} e^{-x} L_l^{α-2} L_n^α: weight exponent α-1.
  const auto rule = cached_gauss_laguerre_rule(std::min(512, l + n + 8), alpha - 1.0);
  const double log_pref =
      log_normalization_unit(l, alpha - 2.0) + log_normalization_unit(n, alpha) + rule->log_mass;
  const double s = integrate_normalized(
      [&](double x) { return laguerre(l, alpha - 2.0, x) * laguerre(n, alpha, x); }, *rule);
  return std::exp(log_pref) * s;
}

/// ∫ (dφ_n^α/dω)² dω by quadrature, omega0 = 1 units. Independent of the
/// derivative expansion: uses d/dx L_n^α = -L_{n-1}^{α+1} directly.
inline double time_variance_quadrature_unit(int n, double alpha) {
  if (!(alpha > 1.0)) throw DomainError("time_variance_quadrature: alpha must exceed 1");
  // φ' = c x^{α/2-1} e^{-x/2} P(x): squared integrand carries weight x^{α-2} e^{-x}.
  const auto rule = cached_gauss_laguerre_rule(std::min(512, n + 8), alpha - 2.0);
  const double log_pref = 2.0 * log_normalization_unit(n, alpha) + rule->log_mass;
  const double s = integrate_normalized(
      [&](double x) {
        const double lower = n > 0 ? laguerre(n - 1, alpha + 1.0, x) : 0.0;
        const double p = (0.5 * alpha - 0.5 * x) * laguerre(n, alpha, x) - x * lower;
        return p * p;
      },
      *rule);
  return std::exp(log_pref) * s;
}

/// Short-form ⟨T²⟩ bracket: keeps only the φ_{n-1} lower term.
inline double time_variance_printed_unit(int n, double alpha) {
  if (!(alpha >= 2.0)) throw DomainError("time_variance: alpha must be >= 2");
  CompensatedSum<double> v;
  v.add(0.25);
  std::vector<double> cross(n + 1);
  for (int l = 0; l <= n; ++l) {
    cross[l] = cross_coefficient(n, l, alpha);
    v.add(cross[l] * cross[l]);
  }
  for (int l = 0; l <= n; ++l) v.add(-cross[l] * cross_alpha_overlap(l, n, alpha));
  if (n > 0) {
    const double k =
        std::exp(log_normalization_unit(n, alpha) - log_normalization_unit(n - 1, alpha));
    v.add(k * k);
    for (int l = 0; l <= n; ++l) v.add(-2.0 * k * cross[l] * cross_alpha_overlap(l, n - 1, alpha));
  }
  return v.value();
}

/// ⟨T²⟩ bracket from the complete derivative expansion (all lower modes).
inline double time_variance_expansion_unit(int n, double alpha) {
  const auto ex = derivative_expansion(ModeSpec(n, alpha));
  CompensatedSum<double> v;
  v.add(ex.self_coefficient * ex.self_coefficient);
  for (const auto& [l, c] : ex.cross_terms) v.add(c * c);
  for (const auto& [m, k] : ex.lower_terms) v.add(k * k);
  // Cross products; <φ_n, φ_m> = 0 for m < n removes the self/lower pairs.
  for (const auto& [l, c] : ex.cross_terms) {
    v.add(2.0 * ex.self_coefficient * c * cross_alpha_overlap(l, n, alpha));
    for (const auto& [m, k] : ex.lower_terms) v.add(2.0 * k * c * cross_alpha_overlap(l, m, alpha));
  }
  return v.value();
}

struct TimeMoments {
  double mean = 0.0;                 // ω0⁻¹
  double second = 0.0;               // ω0⁻²
  double variance = 0.0;             // ω0⁻², validated value
  double variance_printed = 0.0;     // short-form closed form
  double variance_expansion = 0.0;   // closed form from the complete expansion
  double variance_quadrature = 0.0;  // ∫ (dφ/dω)² dω
  bool closed_form_agrees = false;   // printed vs quadrature within tolerance
};

inline constexpr double kTimeVarianceTolerance = 1e-9;

/// ⟨T⟩, ⟨T²⟩ and (ΔT)² for a packet. The short-form closed form is returned
/// when it agrees with the quadrature oracle; otherwise the quadrature value
/// is used and both numbers stay visible.
inline TimeMoments time_moments(const PacketSpec& packet) {
  const auto& mode = packet.mode;
  if (mode.alpha() < 2.0) {
    throw DomainError(
        "time_moments: the closed form requires alpha >= 2; use time_moments_time_domain "
        "for smaller alpha");
  }
  const double inv_w2 = 1.0 / (mode.omega0() * mode.omega0());
  TimeMoments t;
  t.mean = packet.tau;
  t.variance_printed = time_variance_printed_unit(mode.n(), mode.alpha()) * inv_w2;
  t.variance_expansion = time_variance_expansion_unit(mode.n(), mode.alpha()) * inv_w2;
  t.variance_quadrature = time_variance_quadrature_unit(mode.n(), mode.alpha()) * inv_w2;
  t.closed_form_agrees = std::abs(t.variance_printed - t.variance_quadrature) <=
                         kTimeVarianceTolerance * std::abs(t.variance_quadrature);
  t.variance = t.closed_form_agrees ? t.variance_printed : t.variance_quadrature;
  t.second = packet.tau * packet.tau + t.variance;
  return t;
}

struct UncertaintyReport {
  ModeSpec mode;
  double mean_H = 0.0;
  double second_H = 0.0;
  double var_H = 0.0;
  double mean_T = 0.0;
  double second_T = 0.0;
  double var_T = 0.0;
  double product = 0.0;  // ΔH ΔT, dimensionless
  std::map<std::string, double> oracle_residuals;
};

inline UncertaintyReport uncertainty_report(const ModeSpec& mode, double tau) {
  const auto e = energy_moments(mode);
  const auto t = time_moments(PacketSpec{mode, tau});
  UncertaintyReport r{mode, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
  r.mean_H = e.mean;
  r.second_H = e.second;
  r.var_H = e.variance;
  r.mean_T = t.mean;
  r.second_T = t.second;
  r.var_T = t.variance;
  r.product = std::sqrt(e.variance * t.variance);

  const int n = mode.n();
  const double q1 = matrix_element_quadrature(n, n, mode.alpha(), mode.omega0(), 1);
  const double q2 = matrix_element_quadrature(n, n, mode.alpha(), mode.omega0(), 2);
  r.oracle_residuals["mean_H_rel"] = std::abs(e.mean - q1) / std::abs(q1);
  r.oracle_residuals["second_H_rel"] = std::abs(e.second - q2) / std::abs(q2);
  r.oracle_residuals["var_T_printed_rel"] =
      std::abs(t.variance_printed - t.variance_quadrature) / t.variance_quadrature;
  r.oracle_residuals["var_T_expansion_rel"] =
      std::abs(t.variance_expansion - t.variance_quadrature) / t.variance_quadrature;
  return r;
}

}  // namespace lagtime
