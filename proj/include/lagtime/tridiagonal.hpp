#pragma once

// Symmetric tridiagonal eigen-solver (implicit-shift QL). Serves both the
// truncated Hamiltonian spectrum and the Jacobi-matrix construction of
// Gauss rules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lagtime/errors.hpp"

namespace lagtime {

enum class EigenvectorMode {
  kNone,       // eigenvalues only
  kFirstRow,   // first component of every eigenvector (Golub-Welsch weights)
  kFull,       // complete orthonormal eigenvector matrix
};

struct TridiagonalEigen {
  std::vector<double> values;   // ascending
  // Row-major, rows x n. Column j is the eigenvector (or its first row) for
  // values[j]. rows is n for kFull, 1 for kFirstRow, 0 for kNone.
  std::vector<double> vectors;
  std::size_t rows = 0;
  std::size_t cols = 0;

  double vector_component(std::size_t row, std::size_t j) const {
    return vectors[row * cols + j];
  }
};

/// Eigen-decomposition of the symmetric tridiagonal matrix with the given
/// diagonal and sub/super-diagonal (offdiag[i] couples i and i+1).
/// Deflation when |e_m| <= tol * (|d_m| + |d_{m+1}|).
inline TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                    std::span<const double> offdiag,
                                                    EigenvectorMode mode,
                                                    double tol = 1e-14,
                                                    int max_iterations = 60) {
  const std::size_t n = diag.size();
  if (n == 0) throw UsageError("symmetric_tridiagonal_eigen: empty matrix");
  if (offdiag.size() + 1 != n) {
    throw UsageError("symmetric_tridiagonal_eigen: offdiag must have n-1 entries");
  }
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());

  std::size_t rows = 0;
  if (mode == EigenvectorMode::kFull) rows = n;
  if (mode == EigenvectorMode::kFirstRow) rows = 1;
  std::vector<double> z(rows * n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) z[r * n + r] = 1.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= tol * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iterations) {
          throw NumericError("symmetric_tridiagonal_eigen: no convergence for eigenvalue index " +
                             std::to_string(l));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < rows; ++k) {
            double* zk = &z[k * n];
            f = zk[i + 1];
            zk[i + 1] = s * zk[i] + c * f;
            zk[i] = c * zk[i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.rows = rows;
  out.cols = n;
  out.values.resize(n);
  out.vectors.resize(rows * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t r = 0; r < rows; ++r) out.vectors[r * n + j] = z[r * n + order[j]];
  }
  return out;
}

}  // namespace lagtime
