// Independent oracles for the test suite. Everything here deliberately
// avoids the library's own evaluation paths: quadrature is adaptive Simpson,
// linear systems go through dense Gaussian elimination, and gradients come
// from exact pairwise energy differences.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nlpot/weights.hpp"

namespace oracles {

inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a, double b,
                                    double fa, double fm, double fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
  double m = 0.5 * (a + b);
  return adaptive_simpson_impl(f, a, b, f(a), f(m), f(b), tol, depth);
}

/// Double integral of |x-y|^q over [a1,b1] x [a2,b2] with [a1,b1] left of
/// [a2,b2] (touching allowed): the inner integral uses the elementary
/// antiderivative, the outer one adaptive Simpson. This is an iterated-
/// integral route, independent of the library's double-primitive formula.
inline double cell_pair_integral_adaptive(double a1, double b1, double a2, double b2, double q) {
  if (b1 > a2) throw std::invalid_argument("oracle expects disjoint ordered cells");
  auto inner = [&](double x) {
    // int_{a2}^{b2} (y - x)^q dy for x <= a2
    return (std::pow(b2 - x, q + 1.0) - std::pow(a2 - x, q + 1.0)) / (q + 1.0);
  };
  return adaptive_simpson(inner, a1, b1, 1e-13, 48);
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0.0) throw std::runtime_error("solve_dense: singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

/// Central difference of J(u) = (1/p) E(u,u) along coordinate i, computed from
/// the pairwise terms that actually contain u_i (no global cancellation):
/// J(u + eps e_i) - J(u - eps e_i) = (2/p) sum_j w_ij (|u_i+eps-u_j|^p - |u_i-eps-u_j|^p).
inline double gradient_fd(const nlpot::PairWeightMatrix& W, const std::vector<double>& u,
                          std::size_t i, double p, double eps) {
  double s = 0.0;
  W.visit_row(i, [&](std::size_t j, double w) {
    s += w * (std::pow(std::abs(u[i] + eps - u[j]), p) -
              std::pow(std::abs(u[i] - eps - u[j]), p));
  });
  return (2.0 / p) * s / (2.0 * eps);
}

} // namespace oracles
