// Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "lagtime/lagtime.hpp"

namespace {

using namespace lagtime;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
  template <class T>
  void note(const std::string& key, T value) {
    detail << " " << key << "=" << value;
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<void(Outcome&)> body;
};

int count_maxima(const std::vector<double>& v) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) ++count;
  }
  return count;
}

void orthonormality(Outcome& out) {
  double worst = 0.0;
  for (double a : {2.0, 20.0}) {
    const auto rule = cached_gauss_laguerre_rule(2 * 30 + 8, a);
    for (int n = 0; n <= 30; ++n) {
      const ModeSpec mn(n, a);
      for (int k = 0; k <= 30; ++k) {
        const ModeSpec mk(k, a);
        const double ip = integrate_halfline(
            [&](double w) { return mode_energy(mn, w) * mode_energy(mk, w); }, *rule, 1.0);
        worst = std::max(worst, std::abs(ip - (n == k ? 1.0 : 0.0)));
      }
    }
  }
  out.note("max_err", worst);
  out.expect(worst <= 1e-11, "orthonormality <= 1e-11");
}

void energy_moments_check(Outcome& out) {
  double worst = 0.0;
  for (double a : {2.0, 20.0}) {
    for (int n = 0; n <= 20; ++n) {
      const auto e = energy_moments(ModeSpec(n, a));
      const double q1 = matrix_element_quadrature(n, n, a, 1.0, 1);
      const double q2 = matrix_element_quadrature(n, n, a, 1.0, 2);
      worst = std::max({worst, std::abs(e.mean - q1) / q1, std::abs(e.second - q2) / q2});
    }
  }
  const auto spot = energy_moments(ModeSpec(0, 2.0, 1.0));
  out.note("max_rel", worst);
  out.note("<H>", spot.mean);
  out.note("<H2>", spot.second);
  out.note("var", spot.variance);
  out.expect(worst <= 1e-11, "closed form vs quadrature <= 1e-11");
  out.expect(spot.mean == 3.0 && spot.second == 12.0 && spot.variance == 3.0, "spot values 3, 12, 3");
}

void band_structure(Outcome& out) {
  double leak1 = 0.0, leak2 = 0.0, var_rel = 0.0;
  for (double a : {2.0, 20.0}) {
    for (int n = 0; n <= 30; ++n) {
      const double s1 = std::max(1.0, a + 2.0 * n + 1.0);
      const double s2 = s1 * s1;
      double off2 = 0.0;
      for (int m = 0; m <= 31; ++m) {
        const int d = std::abs(m - n);
        const double e1 = matrix_element_quadrature(m, n, a, 1.0, 1);
        if (d == 1) off2 += e1 * e1;
        if (m == 31) continue;
        const double e2 = matrix_element_quadrature(m, n, a, 1.0, 2);
        if (d > 1) leak1 = std::max(leak1, std::abs(e1) / s1);
        if (d > 2) leak2 = std::max(leak2, std::abs(e2) / s2);
      }
      const double var = energy_moments(ModeSpec(n, a)).variance;
      var_rel = std::max(var_rel, std::abs(off2 - var) / var);
    }
  }
  out.note("leak_d1", leak1);
  out.note("leak_d2", leak2);
  out.note("var_identity_rel", var_rel);
  out.expect(leak1 <= 1e-11 && leak2 <= 1e-11, "band leakage <= 1e-11");
  out.expect(var_rel <= 1e-10, "variance identity <= 1e-10");
}

void time_representation(Outcome& out) {
  double worst = 0.0;
  int bad_maxima = 0;
  const auto pts = Grid1D::uniform(-4.0, 4.0, 65);
  const auto fine = Grid1D::uniform(-25.0, 25.0, 200001);
  for (double a : {2.0, 20.0}) {
    for (int n = 0; n <= 6; ++n) {
      const PacketSpec p{ModeSpec(n, a), 0.0};
      for (double t : pts.points()) {
        worst = std::max(worst, std::abs(psi_closed_form(p, t) - psi_numeric(p, t, n + 24)));
      }
      if (n <= 5) {
        const auto psi = psi_closed_form(p, fine);
        std::vector<double> dens(fine.size());
        for (std::size_t i = 0; i < fine.size(); ++i) dens[i] = std::norm(psi.values[i]);
        if (count_maxima(dens) != n + 1) ++bad_maxima;
      }
    }
  }
  out.note("max_abs", worst);
  out.note("maxima_mismatches", bad_maxima);
  out.expect(worst <= 1e-6, "psi closed vs numeric <= 1e-6");
  out.expect(bad_maxima == 0, "n+1 maxima for n <= 5");
}

void time_moments_chain(Outcome& out) {
  double worst = 0.0;
  for (double a : {2.0, 4.0, 20.0}) {
    for (int n = 0; n <= 6; ++n) {
      const auto t = time_moments({ModeSpec(n, a), 0.0});
      worst = std::max(worst, std::abs(t.variance_printed - t.variance_quadrature) / t.variance_quadrature);
    }
  }
  const double tau = 1.5;
  const auto grid = Grid1D::uniform(tau - 200.0, tau + 200.0, 80001);
  const auto td = time_moments_time_domain({ModeSpec(2, 2.0), tau}, grid);
  out.note("printed_vs_quadrature_rel", worst);
  out.note("mean_err", std::abs(td.mean - tau));
  out.expect(worst <= 1e-9, "printed <T^2> vs quadrature <= 1e-9");
  out.expect(std::abs(td.mean - tau) <= 1e-10, "<T> = tau to 1e-10");
}

void uncertainty(Outcome& out) {
  double margin = INFINITY;
  const auto alphas = Grid1D::uniform(2.0, 40.0, 77);
  for (double a : alphas.points()) {
    for (int n = 0; n <= 20; ++n) margin = std::min(margin, uncertainty_report(ModeSpec(n, a), 0.0).product - 0.5);
  }
  const double p0 = uncertainty_report(ModeSpec(0, 1e4), 0.0).product;
  const double p3 = uncertainty_report(ModeSpec(3, 1e4), 0.0).product;
  margin = std::min({margin, p0 - 0.5, p3 - 0.5});
  bool decreasing = true;
  double prev = INFINITY;
  for (double a : alphas.points()) {
    const double dt = std::sqrt(time_moments({ModeSpec(0, a), 0.0}).variance);
    decreasing = decreasing && dt < prev;
    prev = dt;
  }
  out.note("margin_min", margin);
  out.note("product(0,1e4)", p0);
  out.note("product(3,1e4)", p3);
  out.expect(margin >= -1e-9, "product >= 0.5 - 1e-9");
  out.expect(std::abs(p0 - 0.5) <= 1e-3, "product(0, 1e4) within 1e-3 of 0.5");
  out.expect(std::abs(p3 - 3.5) <= 1e-2, "product(3, 1e4) within 1e-2 of 3.5");
  out.expect(decreasing, "deltaT(n=0) strictly decreasing on [2, 40]");
}

bool deterministic_figure(const std::string& fig, Outcome& out) {
  clitest::TempDir a, b;
  if (clitest::run(fig + " --out '" + a.path().string() + "' 2>/dev/null") != 0 ||
      clitest::run(fig + " --out '" + b.path().string() + "' 2>/dev/null") != 0) {
    out.expect(false, fig + " exits 0");
    return false;
  }
  bool same = true;
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    ++files;
    const auto other = b.path() / entry.path().filename();
    same = same && std::filesystem::exists(other) && clitest::slurp(entry.path()) == clitest::slurp(other);
  }
  same = same && files > 0;
  out.expect(same, fig + " byte-identical re-run");
  return same;
}

void arrival(Outcome& out) {
  double worst = 0.0;
  for (double a : {2.0, 20.0}) {
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; m <= 4; ++m) {
        const ModeSpec state(m, a);
        for (int i = 0; i <= 40; ++i) {
          const ArrivalQuery q(ModeSpec(n, a), -5.0 + 0.25 * i, 0.0, 1);
          const Complex c = toa_amplitude_mode(q, m);
          const Complex o = toa_amplitude_quadrature(q, [&](double w) { return mode_energy(state, w); }, m);
          worst = std::max(worst, std::abs(c - o));
        }
      }
    }
  }
  const Complex zero = toa_amplitude_mode(ArrivalQuery(ModeSpec(1, 2.0), 0.8, 0.8, 1), 3);
  const Complex zero_left = toa_amplitude_mode(ArrivalQuery(ModeSpec(1, 20.0), -0.8, 0.8, -1), 3);
  out.note("max_abs", worst);
  out.expect(worst <= 1e-8, "closed vs quadrature <= 1e-8");
  out.expect(zero == Complex(0.0, 0.0) && zero_left == Complex(0.0, 0.0), "exact zero at tau = s x");
  deterministic_figure("fig5", out);
  deterministic_figure("fig6", out);
}

void spectrum(Outcome& out) {
  const auto s2 = spectrum_truncated(2, 2.0, 1.0);
  const double err2 = std::max(std::abs(s2.eigenvalues[0] - 2.0), std::abs(s2.eigenvalues[1] - 6.0));
  const auto s = spectrum_truncated(200, 2.0, 1.0);
  const bool positive = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(), [](double v) { return v > 0.0; });
  double orth = 0.0;
  for (int j = 0; j < 200; ++j) {
    for (int k = j; k < 200; ++k) {
      double d = 0.0;
      for (int r = 0; r < 200; ++r) d += s.eigenvectors[j][r] * s.eigenvectors[k][r];
      orth = std::max(orth, std::abs(d - (j == k ? 1.0 : 0.0)));
    }
  }
  out.note("2x2_err", err2);
  out.note("min_eig(200)", s.eigenvalues.front());
  out.note("orth", orth);
  out.expect(err2 <= 1e-12, "nmax=2 eigenvalues {2, 6}");
  out.expect(positive, "nmax=200 eigenvalues positive");
  out.expect(orth <= 1e-10, "eigenvector orthonormality <= 1e-10");
}

void end_to_end(Outcome& out) {
  const int code = clitest::run("verify > /dev/null 2>&1");
  out.note("verify_exit", code);
  out.expect(code == 0, "verify exits 0 on defaults");
  int identical = 0;
  for (const char* fig : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}) {
    if (deterministic_figure(fig, out)) ++identical;
  }
  out.note("identical_figs", identical);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "orthonormality", 5.0, orthonormality},
      {2, "energy moments", 1.0, energy_moments_check},
      {3, "band structure", 5.0, band_structure},
      {4, "time representation", 30.0, time_representation},
      {5, "time moments", 0.0, time_moments_chain},
      {6, "uncertainty", 10.0, uncertainty},
      {7, "arrival amplitudes", 30.0, arrival},
      {8, "truncated spectrum", 5.0, spectrum},
      {9, "end to end", 0.0, end_to_end},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0) out.expect(secs < c.time_limit, "runtime limit");
    char timing[64];
    if (c.time_limit > 0.0) {
      std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", secs, c.time_limit);
    } else {
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    }
    std::printf("criterion %d %-20s %s  (%s)%s\n", c.id, c.title.c_str(), out.ok ? "PASS" : "FAIL", timing,
                out.detail.str().c_str());
    if (!out.ok) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
