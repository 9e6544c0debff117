#include "lrwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lrwave/errors.hpp"
#include "lrwave/pwlinear.hpp"

namespace lrwave {

Profile::Profile(Grid grid, Eigen::ArrayXd values)
    : grid_(grid), values_(std::move(values)) {
  const long n = grid_.n();
  if (values_.size() != n) throw DomainError("profile: value count does not match grid");
  for (long i = 0, j = n - 1; i < j; ++i, --j)
    if (values_[i] != values_[j]) throw DomainError("profile: values not mirror-symmetric");
  const long c = grid_.center();
  for (long i = c; i < n; ++i) {
    if (!(values_[i] >= 0.0)) throw DomainError("profile: negative or NaN value");
    if (i > c && values_[i] > values_[i - 1])
      throw DomainError("profile: values not nonincreasing from center");
  }
}

Profile project_to_cone(const Grid& grid, const Eigen::ArrayXd& raw) {
  const long n = grid.n();
  if (raw.size() != n) throw DomainError("project_to_cone: value count does not match grid");
  Eigen::ArrayXd v(n);
  for (long i = 0, j = n - 1; i <= j; ++i, --j) {
    const double avg = 0.5 * (raw[i] + raw[j]);
    v[i] = avg;
    v[j] = avg;
  }
  v = v.max(0.0);
  const long c = grid.center();
  std::sort(v.data() + c, v.data() + n, std::greater<double>());
  for (long k = c + 1; k < n; ++k) v[grid.mirror(k)] = v[k];
  return Profile(grid, std::move(v));
}

double kinetic_energy(const Profile& W) {
  return 0.5 * pwl_norm_sq(W.grid(), W.values());
}

Profile normalize_to(const Profile& W, double K) {
  if (!(K > 0)) throw DomainError("normalize_to: target energy must be positive");
  const double cur = kinetic_energy(W);
  if (cur <= 0.0) throw DomainError("normalize_to: zero profile");
  const double lambda = std::sqrt(K / cur);
  return Profile(W.grid(), W.values() * lambda);
}

namespace {

// Plateau of `value` over |x| <= half_width (half_width a node), zero beyond.
Profile indicator(double value, double half_width, const Grid& grid,
                  const char* what) {
  const long p = static_cast<long>(std::llround(half_width * grid.q()));
  if (std::abs(half_width * grid.q() - static_cast<double>(p)) > 1e-9)
    throw DomainError(std::string(what) + ": jump does not land on a node");
  if (p + 1 > grid.center())
    throw DomainError(std::string(what) + ": domain too small for the support");
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid.n());
  const long c = grid.center();
  for (long k = 0; k <= p; ++k) {
    v[c + k] = value;
    v[c - k] = value;
  }
  return Profile(grid, std::move(v));
}

}  // namespace

Profile make_w0(double nu, const Grid& grid) {
  if (!(nu > 0)) throw DomainError("make_w0: nu must be positive");
  return indicator(nu, 0.5, grid, "make_w0");
}

Profile make_wl(double K, int L, const Grid& grid) {
  if (!(K > 0) || L < 1) throw DomainError("make_wl: need K > 0 and L >= 1");
  return indicator(std::sqrt(K / L), static_cast<double>(L), grid, "make_wl");
}

Profile make_gaussian_seed(double K, double width, const Grid& grid) {
  if (!(width > 0)) throw DomainError("make_gaussian_seed: width must be positive");
  const long n = grid.n();
  Eigen::ArrayXd v(n);
  const double s = 1.0 / (2.0 * width * width);
  for (long i = 0; i < n; ++i) {
    const double x = grid.node(i);
    v[i] = std::exp(-x * x * s);
  }
  return normalize_to(project_to_cone(grid, v), K);
}

Eigen::ArrayXd reconstruct_x(const Profile& W) {
  Eigen::ArrayXd Y = centered_antiderivative(W.grid(), W.values());
  const double right = Y[Y.size() - 1];
  return Y + right;
}

double l2_distance(const Profile& A, const Profile& B) {
  if (!(A.grid() == B.grid())) throw DomainError("l2_distance: grid mismatch");
  Eigen::ArrayXd diff = A.values() - B.values();
  return std::sqrt(pwl_norm_sq(A.grid(), diff));
}

}  // namespace lrwave
