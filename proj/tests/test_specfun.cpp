#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

#include "lagtime/specfun.hpp"

namespace {

using lagtime::Complex;
using Big = boost::multiprecision::cpp_bin_float_50;

// Explicit sum L_n^α(x) = Σ_m (-1)^m C(n+α, n-m) x^m / m!, in 50-digit
// arithmetic so that cancellation at large x stays far below 1e-10.
double laguerre_explicit(int n, double alpha, double x) {
  Big sum = 0;
  Big bx = x;
  for (int m = 0; m <= n; ++m) {
    // C(n+α, n-m) = Γ(n+α+1) / (Γ(n-m+1) Γ(α+m+1)), built as a product.
    Big binom = 1;
    for (int j = 1; j <= n - m; ++j) binom *= (Big(alpha) + m + j) / j;
    Big term = binom * boost::multiprecision::pow(bx, m);
    for (int j = 2; j <= m; ++j) term /= j;
    sum += (m % 2 ? -term : term);
  }
  return static_cast<double>(sum);
}

TEST(LogGamma, TrivialValues) {
  EXPECT_EQ(lagtime::log_gamma(1.0), 0.0);
  EXPECT_EQ(lagtime::log_gamma(2.0), 0.0);
  EXPECT_NEAR(lagtime::log_gamma(5.0), std::log(24.0), 1e-15);
}

TEST(LogGamma, MatchesHighPrecisionReference) {
  struct Case { double x, ref; };
  const std::vector<Case> cases = {
      {0.5, 0.57236494292470008707},  {1e-3, 6.9071788853838536825},
      {3.7, 1.4280723266653879219},   {10.5, 13.940625219403763633},
      {123.25, 468.61448295051664423}, {1000.0, 5905.2204232091812118},
      {10000.0, 82099.717496442377273},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(lagtime::log_gamma(c.x), c.ref, 1e-13 * std::abs(c.ref)) << "x=" << c.x;
  }
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(lagtime::log_gamma(0.0), lagtime::DomainError);
  EXPECT_THROW(lagtime::log_gamma(-2.5), lagtime::DomainError);
  EXPECT_THROW(lagtime::log_gamma(std::nan("")), lagtime::DomainError);
}

TEST(Pochhammer, Examples) {
  EXPECT_EQ(lagtime::pochhammer(3.0, 0), 1.0);
  EXPECT_EQ(lagtime::pochhammer(-2.0, 3), 0.0);
  EXPECT_DOUBLE_EQ(lagtime::pochhammer(2.5, 2), 8.75);
  // Negative integer with m <= |a| does not vanish: (-3)_2 = (-3)(-2).
  EXPECT_EQ(lagtime::pochhammer(-3.0, 2), 6.0);
  // Large-m branch goes through log-gamma.
  EXPECT_NEAR(lagtime::pochhammer(1.0, 40), std::tgamma(41.0), 1e-12 * std::tgamma(41.0));
}

TEST(Laguerre, Examples) {
  EXPECT_EQ(lagtime::laguerre(0, 2.0, 7.3), 1.0);
  EXPECT_EQ(lagtime::laguerre(1, 2.0, 1.0), 2.0);
  EXPECT_EQ(lagtime::laguerre(2, 0.0, 0.0), 1.0);
}

TEST(Laguerre, RejectsAlphaAtOrBelowMinusOne) {
  EXPECT_THROW(lagtime::laguerre(3, -1.0, 0.5), lagtime::DomainError);
  EXPECT_THROW(lagtime::laguerre(3, -2.0, 0.5), lagtime::DomainError);
  EXPECT_THROW(lagtime::laguerre(-1, 0.0, 0.5), lagtime::DomainError);
}

TEST(Laguerre, RecurrenceMatchesExplicitSum) {
  // Relative error measured against |L| away from zeros; near a zero the
  // yardstick is the orthonormal-function envelope sqrt(Γ(n+α+1)/n!) e^{x/2} x^{-α/2}.
  for (double alpha : {0.0, 2.0, 18.0, 20.0}) {
    for (int n = 0; n <= 50; ++n) {
      for (double x = 0.0; x <= 200.0; x += 2.5) {
        const double rec = lagtime::laguerre(n, alpha, x);
        const double ref = laguerre_explicit(n, alpha, x);
        double yard = std::abs(ref);
        if (x > 0.0) {
          const double env = std::exp(0.5 * (std::lgamma(n + alpha + 1) - std::lgamma(n + 1.0)) +
                                      0.5 * x - 0.5 * alpha * std::log(x));
          yard = std::max(yard, 1e-3 * env);
        }
        ASSERT_LE(std::abs(rec - ref), 1e-10 * yard)
            << "n=" << n << " alpha=" << alpha << " x=" << x << " ref=" << ref;
      }
    }
  }
}

TEST(Laguerre, ValueAtZeroIsBinomial) {
  for (double alpha : {0.0, 2.0, 0.5, 20.0}) {
    for (int n = 0; n <= 30; ++n) {
      const double expect =
          std::exp(std::lgamma(n + alpha + 1) - std::lgamma(n + 1.0) - std::lgamma(alpha + 1));
      EXPECT_NEAR(lagtime::laguerre(n, alpha, 0.0), expect, 1e-12 * expect);
    }
  }
}

TEST(Laguerre, HasExactlyNSignChangesOnPositiveAxis) {
  for (double alpha : {0.0, 2.0, 20.0}) {
    for (int n = 0; n <= 10; ++n) {
      int changes = 0;
      double prev = lagtime::laguerre(n, alpha, 1e-6);
      const double xmax = 4.0 * n + 2.0 * alpha + 20.0;
      for (int i = 1; i <= 100000; ++i) {
        const double v = lagtime::laguerre(n, alpha, 1e-6 + xmax * i / 100000.0);
        if ((v > 0) != (prev > 0)) ++changes;
        prev = v;
      }
      EXPECT_EQ(changes, n) << "n=" << n << " alpha=" << alpha;
    }
  }
}

TEST(Hyp2F1Terminating, Examples) {
  const Complex one = lagtime::hyp2f1_terminating(0, 3.2, 1.1, Complex(5.0, 2.0));
  EXPECT_EQ(one, Complex(1.0, 0.0));
  EXPECT_NEAR(lagtime::hyp2f1_terminating(1, 2.0, 4.0, 0.5).real(), 0.75, 1e-15);
  EXPECT_NEAR(std::abs(lagtime::hyp2f1_terminating(2, 1.0, 1.0, 1.0)), 0.0, 1e-15);
}

TEST(Hyp2F1Terminating, NZeroIsExactlyOneForAnyParameters) {
  for (double b : {-3.5, 0.0, 2.0, 1e3}) {
    for (double c : {-2.5, 1.0, 7.0}) {
      EXPECT_EQ(lagtime::hyp2f1_terminating(0, b, c, Complex(-4.0, 9.0)), Complex(1.0, 0.0));
    }
  }
}

TEST(Hyp2F1Terminating, ZeroDenominatorIsDomainError) {
  // (c)_m vanishes at m = 3 for c = -2, inside the n = 4 retained terms.
  EXPECT_THROW(lagtime::hyp2f1_terminating(4, 1.0, -2.0, 0.3), lagtime::DomainError);
  // With n = 2 the zero lies beyond the retained terms.
  EXPECT_NO_THROW(lagtime::hyp2f1_terminating(2, 1.0, -2.0, 0.3));
}

TEST(Hyp2F1Terminating, ReproducesLaguerreViaKummerLimit) {
  // L_n^α(x) = C(n+α, n) 1F1(-n; α+1; x); the 2F1 with b = B, z = x/B tends
  // to 1F1 as B grows. A huge B makes the difference negligible.
  const double B = 1e12;
  for (int n : {1, 3, 6}) {
    const double alpha = 2.0, x = 1.7;
    const double binom = std::exp(std::lgamma(n + alpha + 1) - std::lgamma(n + 1.0) -
                                  std::lgamma(alpha + 1));
    const Complex f = lagtime::hyp2f1_terminating(n, B, alpha + 1.0, x / B);
    EXPECT_NEAR(binom * f.real(), lagtime::laguerre(n, alpha, x), 1e-9);
  }
}

}  // namespace
