#pragma once

#include <Eigen/Core>

namespace lrwave {

// Fixed-order pairwise summation. Every energy/norm reduction in the library
// goes through this so that results are bit-reproducible across runs and the
// rounding error stays at O(log n) ulps even for n ~ 1e6 terms.
inline double pairwise_sum(const double* x, Eigen::Index n) {
  if (n <= 32) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const Eigen::Index half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const Eigen::ArrayXd& x) {
  return pairwise_sum(x.data(), x.size());
}

}  // namespace lrwave
