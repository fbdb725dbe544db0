#pragma once

// Scalar special-function kernels used by the mode and arrival code.

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "lagtime/errors.hpp"

namespace lagtime {

using Complex = std::complex<double>;

/// Neumaier-compensated accumulator. Works for double and std::complex<double>
/// (the real and imaginary parts are compensated independently).
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, Complex>) {
      double re = sum_.real(), im = sum_.imag();
      double cre = comp_.real(), cim = comp_.imag();
      step(re, cre, x.real());
      step(im, cim, x.imag());
      sum_ = {re, im};
      comp_ = {cre, cim};
    } else {
      step(sum_, comp_, x);
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  static void step(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  T sum_{};
  T comp_{};
};

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: argument must be finite and positive, got " +
                      std::to_string(x));
  }
  return std::lgamma(x);
}

/// Rising factorial (a)_m = a (a+1) ... (a+m-1). Exact zero when a is a
/// non-positive integer with |a| < m.
inline double pochhammer(double a, int m) {
  if (m < 0) throw DomainError("pochhammer: m must be non-negative");
  if (!std::isfinite(a)) throw DomainError("pochhammer: non-finite argument");
  if (m == 0) return 1.0;
  if (a <= 0.0 && a == std::floor(a) && -a < m) return 0.0;
  if (m > 32 && a > 0.0) {
    return std::exp(std::lgamma(a + m) - std::lgamma(a));
  }
  double p = 1.0;
  for (int k = 0; k < m; ++k) p *= a + k;
  return p;
}

/// Generalized Laguerre polynomial L_n^alpha(x) by upward three-term
/// recurrence in the degree.
inline double laguerre(int n, double alpha, double x) {
  if (n < 0) throw DomainError("laguerre: degree must be non-negative");
  if (!(alpha > -1.0)) {
    throw DomainError("laguerre: alpha must exceed -1 (weight not normalizable)");
  }
  if (!std::isfinite(x)) throw DomainError("laguerre: non-finite argument");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Values L_0^alpha(x) .. L_n^alpha(x) in one recurrence sweep.
template <typename Out>
inline void laguerre_sequence(int n, double alpha, double x, Out&& out) {
  if (n < 0) return;
  double prev = 1.0;
  out(0, prev);
  if (n == 0) return;
  double cur = 1.0 + alpha - x;
  out(1, cur);
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    out(k + 1, cur);
  }
}

/// 2F1(-n, b; c; z) summed exactly over its n+1 terms.
inline Complex hyp2f1_terminating(int n, double b, double c, Complex z) {
  if (n < 0) throw DomainError("hyp2f1_terminating: n must be non-negative");
  CompensatedSum<Complex> sum;
  Complex term{1.0, 0.0};
  sum.add(term);
  for (int m = 0; m < n; ++m) {
    const double denom = (c + m) * (m + 1.0);
    if (denom == 0.0) {
      throw DomainError("hyp2f1_terminating: zero Pochhammer (c)_m in denominator at m=" +
                        std::to_string(m + 1));
    }
    term *= (-n + m) * (b + m) / denom;
    term *= z;
    sum.add(term);
  }
  return sum.value();
}

}  // namespace lagtime
