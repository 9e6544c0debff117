#pragma once

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <vector>

#include "lrwave/grid.hpp"
#include "lrwave/profile.hpp"

namespace lrwave::testing {

// Independent partial-sum oracle with integral-test acceleration:
// sum_{m<=M} f(m) + midpoint of [∫_{M+1}, ∫_M] of the |f| envelope.
template <typename F, typename Tail>
double accelerated_series(F f, Tail integral_from, long M) {
  double s = 0.0;
  for (long m = 1; m <= M; ++m) s += f(m);
  const double sign = f(M) < 0 ? -1.0 : 1.0;
  return s + sign * 0.5 * (integral_from(static_cast<double>(M)) +
                           integral_from(static_cast<double>(M + 1)));
}

// Pool-adjacent-violators: exact least-squares projection onto the
// nonincreasing cone (the quadratic-program oracle for the rearrangement).
inline std::vector<double> pava_nonincreasing(std::vector<double> y) {
  const std::size_t n = y.size();
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> count(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[blocks] = y[i];
    weight[blocks] = 1.0;
    count[blocks] = 1;
    ++blocks;
    while (blocks > 1 && level[blocks - 2] < level[blocks - 1]) {
      const double w = weight[blocks - 2] + weight[blocks - 1];
      level[blocks - 2] =
          (level[blocks - 2] * weight[blocks - 2] + level[blocks - 1] * weight[blocks - 1]) / w;
      weight[blocks - 2] = w;
      count[blocks - 2] += count[blocks - 1];
      --blocks;
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t k = 0; k < count[b]; ++k) out.push_back(level[b]);
  return out;
}

// Random smooth cone profile: a mixture of centered gaussian bumps, projected.
inline Profile random_cone_profile(const Grid& grid, std::mt19937_64& rng,
                                   double amplitude = 1.0) {
  std::uniform_real_distribution<double> width(0.8, 6.0);
  std::uniform_real_distribution<double> coef(0.1, 1.0);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid.n());
  for (int b = 0; b < 3; ++b) {
    const double w = width(rng), a = coef(rng) * amplitude;
    const double s = 1.0 / (2.0 * w * w);
    for (long i = 0; i < grid.n(); ++i) {
      const double x = grid.node(i);
      v[i] += a * std::exp(-x * x * s);
    }
  }
  return project_to_cone(grid, v);
}

}  // namespace lrwave::testing
