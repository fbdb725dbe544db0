#pragma once

// Time-of-arrival amplitudes <n τ x s|Ψ> for massless particles in one
// dimension, p(ω) = sω, with plane waves <x|p> = e^{ipx}/√(2π):
//
//   <n τ x s|Ψ> = (2π)^{-1/2} ∫_0^∞ dω e^{-iω(τ - sx)} φ_n^α(ω) <ω|Ψ>.
//
// For <ω|Ψ> = φ_m^α the integral closes to
//
//   ψ_nm (iu)^{m+n} / (1+iu)^{m+n+α+1} 2F1(-m, -n; -m-n-α; (1+u²)/u²),
//   u = ω0(τ - sx),  ψ_nm = (ω0/√(2π)) c_n c_m Γ(m+n+α+1)/(m! n!).
//
// The denominator exponent includes α: it is the power of the Laplace
// transform of x^α e^{-(1+iu)x}, confirmed against direct quadrature.
// The series is evaluated in regrouped form, term k contributing
// i^{m+n} u^{m+n-2k} (1+u²)^k, so every term is finite at u = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "lagtime/errors.hpp"
#include "lagtime/modes.hpp"
#include "lagtime/quadrature.hpp"
#include "lagtime/specfun.hpp"

namespace lagtime {

/// Detector packet |n τ x s>.
class ArrivalQuery {
 public:
  ArrivalQuery(ModeSpec detector, double tau, double x, int s)
      : detector_(detector), tau_(tau), x_(x), s_(s) {
    if (s != 1 && s != -1) throw DomainError("ArrivalQuery: s must be +1 or -1");
    if (!std::isfinite(tau) || !std::isfinite(x)) throw DomainError("ArrivalQuery: non-finite tau or x");
  }

  const ModeSpec& detector() const { return detector_; }
  double tau() const { return tau_; }
  double x() const { return x_; }
  int s() const { return s_; }

  /// Dimensionless u = ω0 (τ - s x).
  double u() const { return detector_.omega0() * (tau_ - s_ * x_); }

  ArrivalQuery with_tau(double tau) const { return {detector_, tau, x_, s_}; }

 private:
  ModeSpec detector_;
  double tau_;
  double x_;
  int s_;
};

/// Expansion coefficients of a state in the φ_m^α basis.
class StateCoefficients {
 public:
  StateCoefficients(std::vector<Complex> coefficients, double alpha, double omega0,
                    bool normalized = false)
      : coefficients_(std::move(coefficients)), alpha_(alpha), omega0_(omega0) {
    ModeSpec(0, alpha, omega0);
    double norm2 = 0.0;
    for (const auto& c : coefficients_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw DomainError("StateCoefficients: non-finite coefficient");
      }
      norm2 += std::norm(c);
    }
    if (normalized && std::abs(norm2 - 1.0) > 1e-10) {
      throw DomainError("StateCoefficients: coefficients flagged normalized but sum |c|^2 != 1");
    }
  }

  /// The single basis state φ_m^α.
  static StateCoefficients basis(int m, double alpha, double omega0) {
    std::vector<Complex> c(m + 1, Complex{});
    c[m] = 1.0;
    return {std::move(c), alpha, omega0, true};
  }

  const std::vector<Complex>& coefficients() const { return coefficients_; }
  double alpha() const { return alpha_; }
  double omega0() const { return omega0_; }

  /// <ω|Ψ> = Σ_m φ_m φ_m^α(ω).
  Complex energy_amplitude(double omega) const {
    Complex sum{};
    for (std::size_t m = 0; m < coefficients_.size(); ++m) {
      if (coefficients_[m] == Complex{}) continue;
      sum += coefficients_[m] * mode_energy(ModeSpec(static_cast<int>(m), alpha_, omega0_), omega);
    }
    return sum;
  }

 private:
  std::vector<Complex> coefficients_;
  double alpha_;
  double omega0_;
};

namespace detail {

inline Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline double int_power(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// ln ψ_nm without ω0 (the two c's carry ω0^{-1/2} each and cancel the ω0).
inline double log_arrival_prefactor(int n, int m, double alpha) {
  return log_normalization_unit(n, alpha) + log_normalization_unit(m, alpha) +
         std::lgamma(m + n + alpha + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n + 1.0);
}

}  // namespace detail

/// <n τ x s|φ_m> by the regrouped closed form. Exactly zero at u = 0 for m != n.
inline Complex toa_amplitude_mode(const ArrivalQuery& query, int m) {
  if (m < 0) throw DomainError("toa_amplitude_mode: m must be non-negative");
  const int n = query.detector().n();
  const double a = query.detector().alpha();
  const double u = query.u();
  const int kmax = std::min(m, n);
  const double u2p1 = 1.0 + u * u;

  CompensatedSum<double> series;  // real: every term is real before i^{m+n}
  double coeff = 1.0;             // (-m)_k (-n)_k / ((-m-n-α)_k k!)
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) coeff *= (-m + k - 1.0) * (-n + k - 1.0) / ((-m - n - a + k - 1.0) * k);
    series.add(coeff * detail::int_power(u, m + n - 2 * k) * detail::int_power(u2p1, k));
  }
  const double pref =
      std::exp(detail::log_arrival_prefactor(n, m, a)) / std::sqrt(2.0 * std::numbers::pi);
  const Complex denom = std::exp(-(m + n + a + 1.0) * std::log(Complex(1.0, u)));
  return pref * detail::i_power(m + n) * series.value() * denom;
}

/// The same amplitude through the unregrouped 2F1 of argument (1+u²)/u²;
/// undefined at u = 0.
inline Complex toa_amplitude_mode_hypergeometric(const ArrivalQuery& query, int m) {
  const int n = query.detector().n();
  const double a = query.detector().alpha();
  const double u = query.u();
  if (u == 0.0) throw DomainError("toa_amplitude_mode_hypergeometric: singular at u = 0");
  const Complex iu(0.0, u);
  const Complex f = hyp2f1_terminating(std::min(m, n), -static_cast<double>(std::max(m, n)),
                                       -m - n - a, Complex((1.0 + u * u) / (u * u), 0.0));
  const double pref =
      std::exp(detail::log_arrival_prefactor(n, m, a)) / std::sqrt(2.0 * std::numbers::pi);
  return pref * std::pow(iu, m + n) * f * std::exp(-(m + n + a + 1.0) * std::log(Complex(1.0, u)));
}

inline void check_state_matches(const ArrivalQuery& query, const StateCoefficients& state) {
  if (state.coefficients().empty()) throw UsageError("arrival: empty coefficient list");
  if (state.alpha() != query.detector().alpha() || state.omega0() != query.detector().omega0()) {
    throw UsageError("arrival: state and detector must share alpha and omega0");
  }
}

/// Σ_m φ_m <n τ x s|φ_m>.
inline Complex toa_amplitude_state(const ArrivalQuery& query, const StateCoefficients& state) {
  check_state_matches(query, state);
  CompensatedSum<Complex> sum;
  const auto& c = state.coefficients();
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (c[m] == Complex{}) continue;
    sum.add(c[m] * toa_amplitude_mode(query, static_cast<int>(m)));
  }
  return sum.value();
}

/// Dispersion relation p(ω); massless right/left movers use p = sω.
using Dispersion = std::function<double(double omega, int s)>;

inline double massless_dispersion(double omega, int s) { return s * omega; }

/// Direct quadrature of (2π)^{-1/2} ∫ dω e^{i p(ω) x} e^{-iωτ} φ_n(ω) <ω|Ψ>.
/// state_amplitude returns <ω|Ψ>; envelope_index bounds the largest mode
/// index it contains (sets the turning point of the decay). frequency_hint
/// is the phase rate used to size panels; defaults to |τ - sx| (exact for
/// massless dispersion).
template <typename StateFn>
Complex toa_amplitude_quadrature(const ArrivalQuery& query, StateFn&& state_amplitude,
                                 int envelope_index, const Dispersion& dispersion = massless_dispersion,
                                 double frequency_hint = -1.0) {
  const auto& det = query.detector();
  OscillatoryOptions opt;
  opt.frequency = frequency_hint >= 0.0 ? frequency_hint : std::abs(query.tau() - query.s() * query.x());
  opt.scale = det.omega0();
  opt.decay_rate = 1.0;
  opt.turning_point =
      det.omega0() * (4.0 * std::max(det.n(), envelope_index) + 2.0 * std::max(det.alpha(), 0.0) + 4.0);
  opt.panel_order = 32;
  opt.tail_tolerance = 1e-13;
  opt.accuracy_budget = 1e-10;
  const auto res = integrate_oscillatory_halfline(
      [&](double w) {
        const double phase = dispersion(w, query.s()) * query.x() - w * query.tau();
        return std::polar(1.0, phase) * mode_energy(det, w) * Complex(state_amplitude(w));
      },
      opt);
  return res.value / std::sqrt(2.0 * std::numbers::pi);
}

inline Complex toa_amplitude_state_quadrature(const ArrivalQuery& query,
                                              const StateCoefficients& state) {
  check_state_matches(query, state);
  return toa_amplitude_quadrature(
      query, [&](double w) { return state.energy_amplitude(w); },
      static_cast<int>(state.coefficients().size()) - 1);
}

/// |<n τ x s|Ψ>|² over a τ grid, for the detector template (n, α, ω0, x, s).
inline std::vector<double> toa_density_scan(const ModeSpec& detector, double x, int s,
                                            const StateCoefficients& state,
                                            const Grid1D& tau_grid) {
  std::vector<double> out(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    out[i] = std::norm(toa_amplitude_state(ArrivalQuery(detector, tau_grid[i], x, s), state));
  }
  return out;
}

}  // namespace lagtime
