#pragma once

// Orthonormal energy modes built from generalized Laguerre polynomials,
// their time-shifted packets, the derivative expansion used for <T^2>, and
// the g_nu / f_nu Fourier pair.
//
// Internally every formula is written with omega0 = 1; physical scaling is
// applied only at the function boundary (energies scale with omega0, times
// with 1/omega0, mode amplitudes with omega0^{-1/2}).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lagtime/errors.hpp"
#include "lagtime/specfun.hpp"

namespace lagtime {

/// (n, alpha, omega0) identifying one mode.
class ModeSpec {
 public:
  ModeSpec(int n, double alpha, double omega0 = 1.0) : n_(n), alpha_(alpha), omega0_(omega0) {
    if (n < 0) throw DomainError("ModeSpec: n must be non-negative");
    if (!std::isfinite(alpha) || !(alpha > -1.0)) {
      throw DomainError("ModeSpec: alpha must be finite and exceed -1");
    }
    if (!std::isfinite(omega0) || !(omega0 > 0.0)) {
      throw DomainError("ModeSpec: omega0 must be finite and positive");
    }
  }

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  double omega0() const { return omega0_; }

  ModeSpec with_n(int n) const { return {n, alpha_, omega0_}; }
  ModeSpec with_alpha(double alpha) const { return {n_, alpha, omega0_}; }

 private:
  int n_;
  double alpha_;
  double omega0_;
};

/// A mode multiplied by e^{iωτ}: centred at mean time tau.
struct PacketSpec {
  ModeSpec mode;
  double tau = 0.0;
};

/// ln c_n^alpha at omega0 = 1.
inline double log_normalization_unit(int n, double alpha) {
  return 0.5 * (std::lgamma(n + 1.0) - std::lgamma(alpha + n + 1.0));
}

/// c_n^alpha = (n! / (omega0 Gamma(alpha+n+1)))^{1/2}.
inline double normalization(const ModeSpec& mode) {
  return std::exp(log_normalization_unit(mode.n(), mode.alpha())) / std::sqrt(mode.omega0());
}

namespace detail {

// phi_n^alpha at omega0 = 1, x > 0.
inline double mode_unit(int n, double alpha, double x) {
  const double envelope =
      std::exp(log_normalization_unit(n, alpha) + 0.5 * alpha * std::log(x) - 0.5 * x);
  return envelope * laguerre(n, alpha, x);
}

}  // namespace detail

/// φ_n^α(ω): zero for ω < 0, else c (ω/ω0)^{α/2} e^{-ω/2ω0} L_n^α(ω/ω0).
inline double mode_energy(const ModeSpec& mode, double omega) {
  if (omega < 0.0) return 0.0;
  const double x = omega / mode.omega0();
  const double scale = 1.0 / std::sqrt(mode.omega0());
  if (x == 0.0) {
    if (mode.alpha() > 0.0) return 0.0;
    if (mode.alpha() == 0.0) {
      return scale * std::exp(log_normalization_unit(mode.n(), 0.0)) * laguerre(mode.n(), 0.0, 0.0);
    }
    throw DomainError("mode_energy: alpha < 0 is not supported at omega = 0");
  }
  return scale * detail::mode_unit(mode.n(), mode.alpha(), x);
}

/// e^{iωτ} φ_n^α(ω).
inline Complex packet_energy(const PacketSpec& packet, double omega) {
  const double phase = omega * packet.tau;
  return std::polar(1.0, phase) * mode_energy(packet.mode, omega);
}

/// dφ_n^α/dω from the Laguerre derivative identity
/// d/dx L_n^α = -L_{n-1}^{α+1}; used as the reference derivative.
inline double mode_derivative(const ModeSpec& mode, double omega) {
  if (omega < 0.0) return 0.0;
  const double w0 = mode.omega0();
  const double x = omega / w0;
  const int n = mode.n();
  const double a = mode.alpha();
  const double c = std::exp(log_normalization_unit(n, a));
  const double lower = n > 0 ? laguerre(n - 1, a + 1.0, x) : 0.0;
  const double scale = 1.0 / (w0 * std::sqrt(w0));
  if (x == 0.0) {
    if (a == 0.0) return scale * c * (-0.5 * laguerre(n, a, 0.0) - lower);
    if (a == 2.0) return scale * c * laguerre(n, a, 0.0);
    if (a > 2.0) return 0.0;
    throw DomainError("mode_derivative: derivative at omega = 0 diverges for this alpha");
  }
  // dφ/dx = c x^{α/2-1} e^{-x/2} [(α/2 - x/2) L_n^α - x L_{n-1}^{α+1}]
  const double poly = (0.5 * a - 0.5 * x) * laguerre(n, a, x) - x * lower;
  const double env =
      std::exp(log_normalization_unit(n, a) + (0.5 * a - 1.0) * std::log(x) - 0.5 * x);
  return scale * env * poly;
}

/// dφ_n^α/dω = Σ_l N_{nl} φ_l^{α-2} - ½ φ_n^α - Σ_{m<n} (c_n^α/c_m^α) φ_m^α,
/// all coefficients in omega0 = 1 units.
struct DerivativeExpansion {
  ModeSpec mode;
  std::vector<std::pair<int, double>> cross_terms;  // (l, N_{nl}^α), l = 0..n
  double self_coefficient = -0.5;
  std::vector<std::pair<int, double>> lower_terms;  // (m, -c_n/c_m), m = 0..n-1

  /// Coefficient of φ_{n-1}^α (zero when n = 0).
  double lower_coefficient() const {
    return lower_terms.empty() ? 0.0 : lower_terms.back().second;
  }

  /// Evaluates the expansion at physical ω.
  double evaluate(double omega) const {
    CompensatedSum<double> sum;
    const ModeSpec lowered = mode.with_alpha(mode.alpha() - 2.0);
    for (const auto& [l, coeff] : cross_terms) sum.add(coeff * mode_energy(lowered.with_n(l), omega));
    sum.add(self_coefficient * mode_energy(mode, omega));
    for (const auto& [m, coeff] : lower_terms) sum.add(coeff * mode_energy(mode.with_n(m), omega));
    return sum.value() / mode.omega0();
  }
};

/// N_{nl}^α = (α/2) (c_n^α / c_l^{α-2}) (n - l + 1).
inline double cross_coefficient(int n, int l, double alpha) {
  return 0.5 * alpha * (n - l + 1) *
         std::exp(log_normalization_unit(n, alpha) - log_normalization_unit(l, alpha - 2.0));
}

inline DerivativeExpansion derivative_expansion(const ModeSpec& mode) {
  if (mode.alpha() < 2.0) {
    throw DomainError("derivative_expansion: alpha must be >= 2 so that phi^{alpha-2} is normalizable");
  }
  DerivativeExpansion ex{mode, {}, -0.5, {}};
  const int n = mode.n();
  const double a = mode.alpha();
  ex.cross_terms.reserve(n + 1);
  for (int l = 0; l <= n; ++l) ex.cross_terms.emplace_back(l, cross_coefficient(n, l, a));
  // x L_n^α' = -x L_{n-1}^{α+1} = -x Σ_{m<n} L_m^α, so every lower mode appears.
  ex.lower_terms.reserve(n);
  for (int m = 0; m < n; ++m) {
    ex.lower_terms.emplace_back(
        m, -std::exp(log_normalization_unit(n, a) - log_normalization_unit(m, a)));
  }
  return ex;
}

/// g_ν(t) = (β + i t)^{-ν}.
inline Complex gnu(double t, int nu, double beta) {
  if (nu < 2) throw DomainError("gnu: nu must be >= 2");
  if (!(beta > 0.0)) throw DomainError("gnu: beta must be positive");
  return std::pow(Complex(beta, t), -static_cast<double>(nu));
}

/// f_ν(ω) = √(2π)/Γ(ν) ω^{ν-1} e^{-βω} for ω > 0, zero otherwise.
/// Under ψ(t) = (2π)^{-1/2} ∫_0^∞ e^{-iωt} f(ω) dω this transforms to g_ν(t).
inline double fnu(double omega, int nu, double beta) {
  if (nu < 2) throw DomainError("fnu: nu must be >= 2");
  if (!(beta > 0.0)) throw DomainError("fnu: beta must be positive");
  if (omega <= 0.0) return 0.0;
  return std::exp(0.5 * std::log(2.0 * std::numbers::pi) - std::lgamma(nu) +
                  (nu - 1.0) * std::log(omega) - beta * omega);
}

}  // namespace lagtime
