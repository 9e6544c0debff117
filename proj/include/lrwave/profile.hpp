#pragma once

#include <Eigen/Core>
#include <utility>

#include "lrwave/grid.hpp"

namespace lrwave {

// Velocity profile W in the cone of even, nonnegative, unimodal profiles,
// sampled at the grid nodes and interpreted as the piecewise linear
// interpolant extended by zero beyond +-R.
//
// The constructor enforces the cone invariants exactly as stored: values are
// nonnegative, bitwise mirror-symmetric, and nonincreasing from the center
// outward. All construction paths in the library (projection, the indicator
// builders, scaling) produce arrays that satisfy them bitwise. Profiles are
// immutable values and safe to share across threads.
class Profile {
 public:
  Profile(Grid grid, Eigen::ArrayXd values);

  const Grid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  double max() const { return values_[grid_.center()]; }
  double boundary_value() const { return values_[0]; }

 private:
  Grid grid_;
  Eigen::ArrayXd values_;
};

// Intermediate field on the same grid (moving averages, gradients, residuals);
// carries no cone invariants.
struct Field {
  Grid grid;
  Eigen::ArrayXd values;
};

// Projection onto the cone: symmetrize by averaging mirror nodes, clamp
// negatives to zero, then replace the half profile by its nonincreasing
// rearrangement. Idempotent, and nonexpansive toward cone elements in the
// nodal metric.
Profile project_to_cone(const Grid& grid, const Eigen::ArrayXd& raw);

// K(W) = 1/2 \int W^2, exact for the interpolant (per cell h(a^2+ab+b^2)/3).
double kinetic_energy(const Profile& W);

// Scale W so that kinetic_energy == K (relative accuracy ~1e-15).
Profile normalize_to(const Profile& W, double K);

// Indicator-type profiles. Jumps are sampled with the full inside value at
// the jump node, so the interpolant carries the discontinuity half a cell
// outward; analytic checkpoints must carry the O(h) correction.
Profile make_w0(double nu, const Grid& grid);
Profile make_wl(double K, int L, const Grid& grid);

// exp(-x^2 / (2 width^2)) normalized to kinetic energy K.
Profile make_gaussian_seed(double K, double width, const Grid& grid);

// Position offset X(xi) = \int_{-R}^{xi} W at the nodes, X(-R) = 0,
// nondecreasing, X(R) = |W|_1 by telescoping.
Eigen::ArrayXd reconstruct_x(const Profile& W);

// Exact L2 distance of the two interpolants (grids must match).
double l2_distance(const Profile& A, const Profile& B);

}  // namespace lrwave
