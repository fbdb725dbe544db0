#pragma once

// Time representation of the modes: closed-form ψ_{nτ}^α(t) through a
// terminating 2F1, the numerical Fourier transform used to validate it, and
// the truncated completeness kernel.
//
// Convention: ψ(t) = (2π)^{-1/2} ∫_0^∞ dω e^{-iω(t-τ)} φ_n^α(ω).

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lagtime/errors.hpp"
#include "lagtime/modes.hpp"
#include "lagtime/quadrature.hpp"
#include "lagtime/specfun.hpp"

namespace lagtime {

/// Closed-form ψ_{nτ}^α(t):
///   (ω0/√(2π)) c_n^α Γ(α/2+1)Γ(α+n+1)/(n!Γ(α+1))
///     × 2F1(-n, α/2+1; α+1; 1/z) / z^{α/2+1},  z = 1/2 + iω0(t-τ).
inline Complex psi_closed_form(const PacketSpec& packet, double t) {
  const auto& mode = packet.mode;
  const int n = mode.n();
  const double a = mode.alpha();
  const double w0 = mode.omega0();
  const Complex z(0.5, w0 * (t - packet.tau));
  if (!(z.real() > 0.0)) throw NumericError("psi_closed_form: base left the right half-plane");
  const double log_pref = log_normalization_unit(n, a) + std::lgamma(0.5 * a + 1.0) +
                          std::lgamma(a + n + 1.0) - std::lgamma(n + 1.0) - std::lgamma(a + 1.0);
  // ω0 c_n^α = √ω0 × c_n^α|_{ω0=1}
  const double pref = std::sqrt(w0 / (2.0 * std::numbers::pi)) * std::exp(log_pref);
  const Complex series = hyp2f1_terminating(n, 0.5 * a + 1.0, a + 1.0, 1.0 / z);
  return pref * series * std::exp(-(0.5 * a + 1.0) * std::log(z));
}

inline ComplexSamples psi_closed_form(const PacketSpec& packet, const Grid1D& grid) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = psi_closed_form(packet, grid[i]);
  return ComplexSamples(grid, std::move(v));
}

/// ψ_{nτ}^α(t) by direct numerical Fourier transform of φ_n^α.
/// quad_order is the Gauss-Legendre order per panel.
inline Complex psi_numeric(const PacketSpec& packet, double t, int quad_order) {
  const auto& mode = packet.mode;
  if (quad_order < mode.n() + 20) throw DomainError("psi_numeric: quad_order must be >= n + 20");
  const double s = t - packet.tau;
  OscillatoryOptions opt;
  opt.frequency = s;
  opt.scale = mode.omega0();
  opt.decay_rate = 0.5;
  opt.turning_point = mode.omega0() * (4.0 * mode.n() + 2.0 * std::max(mode.alpha(), 0.0) + 4.0);
  opt.panel_order = quad_order;
  opt.tail_tolerance = 1e-10;
  opt.accuracy_budget = 1e-8;
  const auto res = integrate_oscillatory_halfline(
      [&](double w) { return std::polar(1.0, -w * s) * mode_energy(mode, w); }, opt);
  return res.value / std::sqrt(2.0 * std::numbers::pi);
}

inline ComplexSamples psi_numeric(const PacketSpec& packet, const Grid1D& grid, int quad_order) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = psi_numeric(packet, grid[i], quad_order);
  return ComplexSamples(grid, std::move(v));
}

/// K_N(ω, ω') = Σ_{n=0}^{N} φ_n^α(ω) φ_n^α(ω').
inline double completeness_kernel(int N, double alpha, double omega0, double omega,
                                  double omega_prime) {
  if (N < 1) throw DomainError("completeness_kernel: N must be >= 1");
  ModeSpec(0, alpha, omega0);
  if (omega < 0.0 || omega_prime < 0.0) return 0.0;
  const double e1 = mode_energy(ModeSpec(0, alpha, omega0), omega) /
                    std::exp(log_normalization_unit(0, alpha));
  const double e2 = mode_energy(ModeSpec(0, alpha, omega0), omega_prime) /
                    std::exp(log_normalization_unit(0, alpha));
  std::vector<double> l1(N + 1), l2(N + 1);
  laguerre_sequence(N, alpha, omega / omega0, [&](int k, double v) { l1[k] = v; });
  laguerre_sequence(N, alpha, omega_prime / omega0, [&](int k, double v) { l2[k] = v; });
  CompensatedSum<double> sum;
  for (int n = 0; n <= N; ++n) {
    sum.add(std::exp(2.0 * log_normalization_unit(n, alpha)) * l1[n] * l2[n]);
  }
  return e1 * e2 * sum.value();
}

/// ∫ K_N(ω, ω') f(ω') dω' = Σ_n φ_n(ω) <φ_n, f>. The overlaps use a
/// Gauss-Laguerre rule of the given order and weight exponent; choose the
/// exponent so that f φ_n / (x^w e^{-x}) is smooth.
template <typename F>
double apply_completeness_kernel(int N, double alpha, double omega0, F&& f, double omega,
                                 int quad_order, double weight_exponent) {
  if (N < 1) throw DomainError("apply_completeness_kernel: N must be >= 1");
  const auto rule = cached_gauss_laguerre_rule(quad_order, weight_exponent);
  CompensatedSum<double> sum;
  for (int n = 0; n <= N; ++n) {
    const ModeSpec m(n, alpha, omega0);
    const double overlap =
        integrate_halfline([&](double w) { return mode_energy(m, w) * f(w); }, *rule, omega0);
    sum.add(overlap * mode_energy(m, omega));
  }
  return sum.value();
}

struct TimeDomainMoments {
  double norm = 0.0;      // ∫|ψ|² over the grid
  double mean = 0.0;      // ∫ t |ψ|² / norm
  double variance = 0.0;  // ∫ (t - mean)² |ψ|² / norm
};

/// Time moments from |ψ|² sampled on a grid. Works for any alpha > -1.
inline TimeDomainMoments time_moments_time_domain(const PacketSpec& packet, const Grid1D& grid) {
  std::vector<double> dens(grid.size()), first(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    dens[i] = std::norm(psi_closed_form(packet, grid[i]));
    first[i] = (grid[i] - packet.tau) * dens[i];
  }
  TimeDomainMoments m;
  m.norm = integrate_grid(std::span<const double>(dens), grid);
  const double shift = integrate_grid(std::span<const double>(first), grid) / m.norm;
  m.mean = packet.tau + shift;
  std::vector<double> second(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid[i] - m.mean;
    second[i] = d * d * dens[i];
  }
  m.variance = integrate_grid(std::span<const double>(second), grid) / m.norm;
  return m;
}

}  // namespace lagtime
