#pragma once

// Aggregated self-check: every closed form against its independent oracle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lagtime/arrival.hpp"
#include "lagtime/errors.hpp"
#include "lagtime/modes.hpp"
#include "lagtime/operators.hpp"
#include "lagtime/quadrature.hpp"
#include "lagtime/timerep.hpp"
#include "lagtime/version.hpp"

namespace lagtime {

struct VerifyConfig {
  double alpha = 2.0;
  double omega0 = 1.0;
  int nmax = 20;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // pass iff value >= tolerance, else value <= tolerance

  bool passed() const {
    if (!std::isfinite(value)) return false;
    return lower_bound ? value >= tolerance : value <= tolerance;
  }
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> values;  // informational numbers

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
};

namespace detail {

inline int count_local_maxima(const std::vector<double>& v) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) ++count;
  }
  return count;
}

}  // namespace detail

inline void validate(const VerifyConfig& c) {
  if (!(c.alpha >= 2.0)) {
    throw UsageError("--alpha must be >= 2 for verify: the time-moment and uncertainty suites need alpha >= 2");
  }
  if (!(c.omega0 > 0.0) || !std::isfinite(c.omega0)) throw UsageError("--omega0 must be positive");
  if (c.nmax < 2 || c.nmax > 64) throw UsageError("--nmax must lie in [2, 64] for verify");
}

inline VerifyReport run_verify(const VerifyConfig& cfg) {
  validate(cfg);
  VerifyReport rep;
  rep.config = cfg;
  const double a = cfg.alpha, w0 = cfg.omega0;
  const int N = cfg.nmax;
  auto add = [&](std::string name, double value, double tol, bool lower = false) {
    rep.checks.push_back({std::move(name), value, tol, lower});
  };

  // Orthonormality.
  {
    const auto rule = cached_gauss_laguerre_rule(2 * N + 8, a);
    double worst = 0.0;
    for (int n = 0; n <= N; ++n) {
      const ModeSpec mn(n, a, w0);
      for (int k = n; k <= N; ++k) {
        const ModeSpec mk(k, a, w0);
        const double ip = integrate_halfline(
            [&](double w) { return mode_energy(mn, w) * mode_energy(mk, w); }, *rule, w0);
        worst = std::max(worst, std::abs(ip - (n == k ? 1.0 : 0.0)));
      }
    }
    add("orthonormality_max_error", worst, 1e-11);
  }

  // Energy moments and band structure.
  {
    const auto h = hamiltonian_matrix(N + 1, a, w0);
    const auto h2 = hamiltonian_sq_matrix(N + 1, a, w0);
    double mean_rel = 0.0, second_rel = 0.0, var_rel = 0.0;
    double leak1 = 0.0, leak2 = 0.0, band1 = 0.0, band2 = 0.0;
    for (int n = 0; n <= N; ++n) {
      const auto e = energy_moments(ModeSpec(n, a, w0));
      const double q1 = matrix_element_quadrature(n, n, a, w0, 1);
      const double q2 = matrix_element_quadrature(n, n, a, w0, 2);
      mean_rel = std::max(mean_rel, std::abs(e.mean - q1) / std::abs(q1));
      second_rel = std::max(second_rel, std::abs(e.second - q2) / std::abs(q2));

      double off2 = 0.0;
      for (int m = std::max(0, n - 1); m <= n + 1; ++m) {
        if (m != n) off2 += std::pow(matrix_element_quadrature(m, n, a, w0, 1), 2);
      }
      var_rel = std::max(var_rel, std::abs(off2 - e.variance) / e.variance);

      const double s1 = std::max(w0, std::abs(h.element(n, n)));
      const double s2 = std::max(w0 * w0, std::abs(h2.element(n, n)));
      for (int m = 0; m <= N; ++m) {
        const int d = std::abs(m - n);
        const double e1 = matrix_element_quadrature(m, n, a, w0, 1);
        const double e2 = matrix_element_quadrature(m, n, a, w0, 2);
        if (d <= 1) band1 = std::max(band1, std::abs(e1 - h.element(m, n)) / s1);
        else leak1 = std::max(leak1, std::abs(e1) / s1);
        if (d <= 2) band2 = std::max(band2, std::abs(e2 - h2.element(m, n)) / s2);
        else leak2 = std::max(leak2, std::abs(e2) / s2);
      }
    }
    add("energy_mean_max_rel", mean_rel, 1e-11);
    add("energy_second_max_rel", second_rel, 1e-11);
    add("variance_identity_max_rel", var_rel, 1e-10);
    add("band_elements_d1_max_rel", band1, 1e-11);
    add("band_elements_d2_max_rel", band2, 1e-11);
    add("band_leakage_d1", leak1, 1e-11);
    add("band_leakage_d2", leak2, 1e-11);
  }

  // Time representation.
  {
    const int nlim = std::min(6, N);
    double worst = 0.0;
    const auto grid = Grid1D::uniform(-4.0 / w0, 4.0 / w0, 65);
    for (int n = 0; n <= nlim; ++n) {
      const PacketSpec p{ModeSpec(n, a, w0), 0.0};
      for (double t : grid.points()) {
        worst = std::max(worst, std::abs(psi_closed_form(p, t) - psi_numeric(p, t, n + 24)));
      }
    }
    add("psi_closed_vs_numeric_max_abs", worst, 1e-6);

    int mismatches = 0;
    const auto fine = Grid1D::uniform(-25.0 / w0, 25.0 / w0, 200001);
    for (int n = 0; n <= std::min(5, N); ++n) {
      const auto psi = psi_closed_form({ModeSpec(n, a, w0), 0.0}, fine);
      std::vector<double> dens(fine.size());
      for (std::size_t i = 0; i < fine.size(); ++i) dens[i] = std::norm(psi.values[i]);
      if (detail::count_local_maxima(dens) != n + 1) ++mismatches;
    }
    add("psi_maxima_count_mismatches", mismatches, 0.0);
  }

  // Time moments.
  {
    double printed_rel = 0.0, expansion_rel = 0.0;
    for (int n = 0; n <= std::min(6, N); ++n) {
      const auto t = time_moments({ModeSpec(n, a, w0), 0.0});
      printed_rel = std::max(printed_rel, std::abs(t.variance_printed - t.variance_quadrature) /
                                              t.variance_quadrature);
      expansion_rel = std::max(expansion_rel, std::abs(t.variance_expansion - t.variance_quadrature) /
                                                  t.variance_quadrature);
      rep.values.emplace_back("time_variance_printed_n" + std::to_string(n), t.variance_printed);
      rep.values.emplace_back("time_variance_quadrature_n" + std::to_string(n), t.variance_quadrature);
    }
    add("time_variance_printed_vs_quadrature_max_rel", printed_rel, kTimeVarianceTolerance);
    add("time_variance_expansion_vs_quadrature_max_rel", expansion_rel, kTimeVarianceTolerance);

    const double tau = 1.5;
    const auto grid = Grid1D::uniform(tau - 200.0 / w0, tau + 200.0 / w0, 80001);
    const auto td = time_moments_time_domain({ModeSpec(std::min(2, N), a, w0), tau}, grid);
    add("time_mean_abs_error", std::abs(td.mean - tau), 1e-10);
  }

  // Uncertainty.
  {
    double margin = INFINITY;
    for (int n = 0; n <= N; ++n) {
      margin = std::min(margin, uncertainty_report(ModeSpec(n, a, w0), 0.0).product - 0.5);
    }
    add("heisenberg_margin_min", margin, -1e-9, true);
  }

  // Arrival amplitudes.
  {
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; m <= 4; ++m) {
        const ModeSpec state_mode(m, a, w0);
        for (int i = 0; i <= 40; ++i) {
          const double u = -5.0 + 0.25 * i;
          const ArrivalQuery q(ModeSpec(n, a, w0), u / w0, 0.0, 1);
          const Complex closed = toa_amplitude_mode(q, m);
          const Complex quad = toa_amplitude_quadrature(
              q, [&](double w) { return mode_energy(state_mode, w); }, m);
          worst = std::max(worst, std::abs(closed - quad));
        }
      }
    }
    add("arrival_closed_vs_quadrature_max_abs", worst, 1e-8);
    const ArrivalQuery coincident(ModeSpec(1, a, w0), 0.7, 0.7, 1);
    add("arrival_zero_at_coincidence", std::abs(toa_amplitude_mode(coincident, 3)), 0.0);
  }

  // Truncated spectrum.
  {
    const auto s2 = spectrum_truncated(2, a, w0);
    const double r = std::sqrt(a + 2.0);
    const double e_lo = (a + 2.0 - r) * w0, e_hi = (a + 2.0 + r) * w0;
    add("spectrum_2x2_max_rel",
        std::max(std::abs(s2.eigenvalues[0] - e_lo), std::abs(s2.eigenvalues[1] - e_hi)) / e_hi, 1e-12);

    const auto s = spectrum_truncated(N, a, w0);
    const auto h = hamiltonian_matrix(N, a, w0);
    double res = 0.0, orth = 0.0;
    for (int j = 0; j < N; ++j) {
      const auto& v = s.eigenvectors[j];
      for (int row = 0; row < N; ++row) {
        double hv = h.element(row, row) * v[row];
        if (row > 0) hv += h.element(row, row - 1) * v[row - 1];
        if (row + 1 < N) hv += h.element(row, row + 1) * v[row + 1];
        res = std::max(res, std::abs(hv - s.eigenvalues[j] * v[row]));
      }
      for (int k = j; k < N; ++k) {
        double d = 0.0;
        for (int row = 0; row < N; ++row) d += v[row] * s.eigenvectors[k][row];
        orth = std::max(orth, std::abs(d - (j == k ? 1.0 : 0.0)));
      }
    }
    add("spectrum_min_eigenvalue", s.eigenvalues.front(), std::numeric_limits<double>::min(), true);
    add("spectrum_residual_max_rel", res / s.eigenvalues.back(), 1e-10);
    add("spectrum_orthonormality_max_error", orth, 1e-10);
  }
  return rep;
}

}  // namespace lagtime
