#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lagtime/modes.hpp"
#include "lagtime/operators.hpp"
#include "lagtime/timerep.hpp"

namespace {

using lagtime::Complex;
using lagtime::ModeSpec;
using lagtime::PacketSpec;

int count_maxima(const std::vector<double>& v) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) ++count;
  }
  return count;
}

TEST(PsiClosedForm, GroundStateExample) {
  // n = 0: ψ = (2π)^{-1/2} c_0 Γ(α/2+1) / z^{α/2+1}, z = 1/2 + i(t-τ).
  const PacketSpec p{ModeSpec(0, 2.0), 0.0};
  const Complex expect = (1.0 / std::sqrt(2.0)) / std::sqrt(2.0 * std::numbers::pi) /
                         std::pow(Complex(0.5, 1.0), 2);
  EXPECT_LT(std::abs(lagtime::psi_closed_form(p, 1.0) - expect), 1e-15);
}

TEST(PsiClosedForm, MatchesNumericFourierTransform) {
  for (double alpha : {0.0, 2.0, 20.0}) {
    for (int n = 0; n <= 5; ++n) {
      const PacketSpec p{ModeSpec(n, alpha, 1.0), 0.7};
      for (double t = -6.0; t <= 6.0; t += 0.75) {
        const Complex a = lagtime::psi_closed_form(p, t);
        const Complex b = lagtime::psi_numeric(p, t, n + 24);
        EXPECT_LT(std::abs(a - b), 1e-8) << "n=" << n << " alpha=" << alpha << " t=" << t;
      }
    }
  }
}

TEST(PsiClosedForm, OmegaZeroScaling) {
  // ψ(t; ω0) = √ω0 ψ(ω0 t; 1).
  const PacketSpec a{ModeSpec(3, 4.0, 1.0), 0.0}, b{ModeSpec(3, 4.0, 2.5), 0.0};
  for (double t : {-1.0, 0.1, 0.9}) {
    EXPECT_LT(std::abs(lagtime::psi_closed_form(b, t) -
                       std::sqrt(2.5) * lagtime::psi_closed_form(a, 2.5 * t)),
              1e-14);
  }
  EXPECT_LT(std::abs(lagtime::psi_numeric(b, 0.3, 30) - lagtime::psi_closed_form(b, 0.3)), 1e-8);
}

TEST(PsiClosedForm, ConjugationAndShift) {
  for (int n : {0, 2, 5}) {
    const PacketSpec p{ModeSpec(n, 3.0), 1.5};
    const PacketSpec p0{ModeSpec(n, 3.0), 0.0};
    for (double s : {0.2, 1.0, 4.0}) {
      EXPECT_LT(std::abs(lagtime::psi_closed_form(p, 1.5 - s) -
                         std::conj(lagtime::psi_closed_form(p, 1.5 + s))),
                1e-14);
      EXPECT_LT(std::abs(lagtime::psi_closed_form(p, 1.5 + s) - lagtime::psi_closed_form(p0, s)), 1e-13);
    }
  }
}

TEST(PsiClosedForm, ParsevalOnFiniteWindow) {
  const auto grid = lagtime::Grid1D::uniform(-25.0, 25.0, 50001);
  for (double alpha : {2.0, 20.0}) {
    for (int n : {0, 3, 6}) {
      const auto psi = lagtime::psi_closed_form({ModeSpec(n, alpha), 0.0}, grid);
      std::vector<double> dens(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) dens[i] = std::norm(psi.values[i]);
      const double norm = lagtime::integrate_grid(std::span<const double>(dens), grid);
      EXPECT_NEAR(norm, 1.0, alpha == 2.0 ? 2e-4 : 1e-9) << "n=" << n << " alpha=" << alpha;
      EXPECT_LE(norm, 1.0 + 1e-9);
    }
  }
}

TEST(PsiClosedForm, DensityHasNPlusOneMaxima) {
  for (double alpha : {2.0, 20.0}) {
    for (int n = 0; n <= 6; ++n) {
      const auto grid = lagtime::Grid1D::uniform(-25.0, 25.0, 200001);
      const auto psi = lagtime::psi_closed_form({ModeSpec(n, alpha), 0.0}, grid);
      std::vector<double> dens(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) dens[i] = std::norm(psi.values[i]);
      EXPECT_EQ(count_maxima(dens), n + 1) << "n=" << n << " alpha=" << alpha;
    }
  }
}

TEST(PsiClosedForm, LargerAlphaNarrowsThePacket) {
  auto fwhm = [](double alpha) {
    const auto grid = lagtime::Grid1D::uniform(-6.0, 6.0, 120001);
    const auto psi = lagtime::psi_closed_form({ModeSpec(0, alpha), 0.0}, grid);
    double peak = 0.0;
    for (const auto& v : psi.values) peak = std::max(peak, std::norm(v));
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::norm(psi.values[i]) >= 0.5 * peak) {
        lo = std::min(lo, grid[i]);
        hi = std::max(hi, grid[i]);
      }
    }
    return hi - lo;
  };
  double prev = INFINITY;
  for (double alpha : {2.0, 5.0, 10.0, 20.0}) {
    const double w = fwhm(alpha);
    EXPECT_LT(w, prev) << alpha;
    prev = w;
  }
}

TEST(PsiNumeric, RejectsLowOrder) {
  EXPECT_THROW(lagtime::psi_numeric({ModeSpec(5, 2.0), 0.0}, 0.0, 24), lagtime::DomainError);
}

TEST(TimeDomainMoments, AgreesWithEnergyDomainVariance) {
  const auto grid = lagtime::Grid1D::uniform(-39.5, 40.5, 80001);
  for (int n : {0, 2}) {
    const PacketSpec p{ModeSpec(n, 8.0), 0.5};
    const auto td = lagtime::time_moments_time_domain(p, grid);
    const auto ed = lagtime::time_moments(p);
    EXPECT_NEAR(td.norm, 1.0, 1e-8);
    EXPECT_NEAR(td.mean, 0.5, 1e-8);
    EXPECT_NEAR(td.variance, ed.variance, 1e-6 * ed.variance) << n;
  }
}

TEST(TimeDomainMoments, AvailableBelowAlphaTwo) {
  const auto grid = lagtime::Grid1D::uniform(-202.0, 198.0, 40001);
  const auto td = lagtime::time_moments_time_domain({ModeSpec(1, 0.5), -2.0}, grid);
  EXPECT_NEAR(td.mean, -2.0, 1e-3);
  EXPECT_GT(td.variance, 0.0);
}

}  // namespace
