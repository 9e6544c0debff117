#pragma once

#include <Eigen/Core>

#include "lrwave/grid.hpp"
#include "lrwave/summation.hpp"

// Exact integral formulas for fields identified with their even piecewise
// linear interpolants (extended by zero beyond +-R).
//
// Two integral conventions coexist and are used deliberately:
//   * pwl_* integrate products of interpolants exactly; these back every
//     reported norm, energy and distance.
//   * nodal_* first form the composite field at the nodes and then integrate
//     its own interpolant exactly (the trapezoid form). All nonlinear
//     functionals are built this way, which is what makes the analytic
//     gradient an exact differential and keeps the cone closed under the
//     solver map.

namespace lrwave {

// Exact \int U(x) V(x) dx for the two interpolants; per cell
// h/6 (2ac + ad + bc + 2bd).
inline double pwl_inner(const Grid& g, const Eigen::ArrayXd& U,
                        const Eigen::ArrayXd& V) {
  const long cells = g.n() - 1;
  const double h6 = g.h() / 6.0;
  Eigen::ArrayXd contrib(cells);
  for (long i = 0; i < cells; ++i) {
    const double a = U[i], b = U[i + 1], c = V[i], d = V[i + 1];
    contrib[i] = h6 * (2.0 * a * c + a * d + b * c + 2.0 * b * d);
  }
  return pairwise_sum(contrib);
}

inline double pwl_norm_sq(const Grid& g, const Eigen::ArrayXd& U) {
  const long cells = g.n() - 1;
  const double h3 = g.h() / 3.0;
  Eigen::ArrayXd contrib(cells);
  for (long i = 0; i < cells; ++i) {
    const double a = U[i], b = U[i + 1];
    contrib[i] = h3 * (a * a + a * b + b * b);
  }
  return pairwise_sum(contrib);
}

// Exact \int of the interpolant of the nodal values F_i (trapezoid form).
inline double nodal_integral(const Grid& g, const Eigen::ArrayXd& F) {
  return g.h() * (pairwise_sum(F) - 0.5 * (F[0] + F[F.size() - 1]));
}

// Exact \int of the interpolant of the nodal product (U_i V_i).
inline double nodal_inner(const Grid& g, const Eigen::ArrayXd& U,
                          const Eigen::ArrayXd& V) {
  Eigen::ArrayXd prod = U * V;
  return nodal_integral(g, prod);
}

inline bool is_bitwise_even(const Grid& g, const Eigen::ArrayXd& F) {
  const long n = g.n();
  for (long i = 0, j = n - 1; i < j; ++i, --j)
    if (F[i] != F[j]) return false;
  return true;
}

// Antiderivative Y(x) = \int_0^x F, sampled at the nodes by exact trapezoid
// prefix sums. For bitwise-even F the array is built from the center outward
// and mirrored, so Y is bitwise odd; window differences of it are then
// bitwise even. Falls back to a left-to-right prefix for general fields.
inline Eigen::ArrayXd centered_antiderivative(const Grid& g,
                                              const Eigen::ArrayXd& F) {
  const long n = g.n();
  const double h2 = g.h() / 2.0;
  Eigen::ArrayXd Y(n);
  if (is_bitwise_even(g, F)) {
    const long c = g.center();
    Y[c] = 0.0;
    double acc = 0.0;
    for (long k = c; k + 1 < n; ++k) {
      acc += h2 * (F[k] + F[k + 1]);
      Y[k + 1] = acc;
      Y[g.mirror(k + 1)] = -acc;
    }
  } else {
    double acc = 0.0;
    Y[0] = 0.0;
    for (long i = 0; i + 1 < n; ++i) {
      acc += h2 * (F[i] + F[i + 1]);
      Y[i + 1] = acc;
    }
    const long c = g.center();
    const double shift = Y[c];
    for (long i = 0; i < n; ++i) Y[i] -= shift;
  }
  return Y;
}

// Clamped window difference: out_i = Y[min(i+p, n-1)] - Y[max(i-p, 0)].
// With Y an antiderivative this is the exact moving-average integral of the
// zero-extended interpolant over the window of half-width p cells.
inline Eigen::ArrayXd window_difference(const Eigen::ArrayXd& Y, long p) {
  const long n = Y.size();
  Eigen::ArrayXd out(n);
  for (long i = 0; i < n; ++i) {
    const long hi = i + p < n ? i + p : n - 1;
    const long lo = i - p > 0 ? i - p : 0;
    out[i] = Y[hi] - Y[lo];
  }
  return out;
}

}  // namespace lrwave
