#include "lrwave/operators.hpp"

#include <cmath>
#include <limits>

#include "lrwave/pwlinear.hpp"

namespace lrwave {

namespace {

// Window half-width in cells; q even makes this exact for every m.
long window_cells(const Grid& g, int m) { return static_cast<long>(m) * (g.q() / 2); }

void clamped_difference(const Eigen::ArrayXd& Y, long p, Eigen::ArrayXd& out) {
  const long n = Y.size();
  for (long i = 0; i < n; ++i) {
    const long hi = i + p < n ? i + p : n - 1;
    const long lo = i - p > 0 ? i - p : 0;
    out[i] = Y[hi] - Y[lo];
  }
}

Field apply_am_impl(const Grid& g, const Eigen::ArrayXd& values, int m) {
  if (m < 1) throw DomainError("apply_am: m must be a positive integer");
  Eigen::ArrayXd Y = centered_antiderivative(g, values);
  Eigen::ArrayXd out(g.n());
  clamped_difference(Y, window_cells(g, m), out);
  return Field{g, std::move(out)};
}

// Per-range nodal evaluation of Psi and Psi' on the moving-average samples,
// switching to the Taylor form below 1e-4 nu m (same rule as lrwave::psi).
// For even inputs only the right half is evaluated and mirrored, so the
// composite fields stay bitwise even regardless of how the vector math
// handles packet remainders.
void psi_nodewise(const PotentialFamily& fam, int m, const Eigen::ArrayXd& u,
                  bool even, long center, const RangeConstants& rc,
                  Eigen::ArrayXd& psi_vals, Eigen::ArrayXd& dpsi_vals,
                  Eigen::ArrayXd& scratch_rm, Eigen::ArrayXd& scratch_pw) {
  const double rm0 = fam.nu() * m;
  const double thr = 1e-4 * rm0;
  const long n = u.size();
  const long lo = even ? center : 0;
  const long len = n - lo;
  if (fam.is_power(m)) {
    const double a = fam.alpha();
    auto uh = u.segment(lo, len);
    auto rmh = scratch_rm.segment(lo, len);
    auto pwh = scratch_pw.segment(lo, len);
    rmh = rm0 - uh;
    pwh = (rmh.log() * (-a)).exp();  // (nu m - u)^(-alpha)
    psi_vals.segment(lo, len) =
        (uh < thr).select(0.5 * rc.d2phi * uh.square() - (rc.d3phi / 6.0) * uh.cube(),
                          pwh - rc.phi + rc.dphi * uh);
    dpsi_vals.segment(lo, len) =
        (uh < thr).select(rc.d2phi * uh - 0.5 * rc.d3phi * uh.square(),
                          a * pwh / rmh + rc.dphi);
  } else {
    // scalar path for custom hooks; the Taylor branch also covers tiny
    // negative arguments from finite-difference probes
    const RangeConstants& c = rc;
    for (long i = lo; i < n; ++i) {
      const double r = u[i];
      if (r < thr) {
        psi_vals[i] = 0.5 * c.d2phi * r * r - c.d3phi * r * r * r / 6.0;
        dpsi_vals[i] = c.d2phi * r - 0.5 * c.d3phi * r * r;
      } else {
        psi_vals[i] = phi_deriv(fam, m, rm0 - r, 0) - c.phi + c.dphi * r;
        dpsi_vals[i] = -phi_deriv(fam, m, rm0 - r, 1) + c.dphi;
      }
    }
  }
  if (even) {
    for (long k = 1; k <= center; ++k) {
      psi_vals[center - k] = psi_vals[center + k];
      dpsi_vals[center - k] = dpsi_vals[center + k];
    }
  }
}

}  // namespace

Field apply_am(const Profile& W, int m) { return apply_am_impl(W.grid(), W.values(), m); }
Field apply_am(const Field& F, int m) { return apply_am_impl(F.grid, F.values, m); }

double inner_product(const Field& U, const Field& V) {
  if (!(U.grid == V.grid)) throw DomainError("inner_product: grid mismatch");
  return pwl_inner(U.grid, U.values, V.values);
}
double inner_product(const Profile& U, const Field& V) {
  return inner_product(Field{U.grid(), U.values()}, V);
}
double l2_norm(const Field& U) { return std::sqrt(pwl_norm_sq(U.grid, U.values)); }

double nodal_inner_product(const Field& U, const Field& V) {
  if (!(U.grid == V.grid)) throw DomainError("nodal_inner_product: grid mismatch");
  return nodal_inner(U.grid, U.values, V.values);
}
double nodal_inner_product(const Profile& U, const Field& V) {
  return nodal_inner_product(Field{U.grid(), U.values()}, V);
}

namespace {

EnergyGradient energy_and_gradient_impl(const Grid& g, const Eigen::ArrayXd& values,
                                        const PotentialFamily& fam, int M,
                                        double guard) {
  if (M < 1) throw DomainError("energy_and_gradient: M must be positive");
  const long n = g.n();
  const double K = 0.5 * pwl_norm_sq(g, values);
  const int limit = fam.interacts(M) ? M : fam.range_limit() - 1;

  EnergyGradient out;
  out.grad = Eigen::ArrayXd::Zero(n);
  out.per_m = Eigen::ArrayXd::Zero(M);

  const bool even = is_bitwise_even(g, values);
  Eigen::ArrayXd Y = centered_antiderivative(g, values);
  Eigen::ArrayXd u(n), psi_vals(n), dpsi_vals(n), rm(n), pw(n), Y2(n), wd(n);

  for (int m = 1; m <= limit; ++m) {
    const long p = window_cells(g, m);
    clamped_difference(Y, p, u);
    const double max_u = u.maxCoeff();
    if (m == 1) out.eps1 = fam.nu() - max_u;
    const double ratio = max_u / std::sqrt(2.0 * K * m);
    if (ratio > out.max_am_ratio) out.max_am_ratio = ratio;
    if (max_u >= fam.nu() * m - guard)
      throw ConvergenceError("singularity guard: A_" + std::to_string(m) +
                             " W reached nu m - guard (margin " +
                             std::to_string(fam.nu() * m - max_u) + ")");

    const RangeConstants rc = range_constants(fam, m);
    psi_nodewise(fam, m, u, even, g.center(), rc, psi_vals, dpsi_vals, rm, pw);
    out.per_m[m - 1] = nodal_integral(g, psi_vals);

    Y2 = centered_antiderivative(g, dpsi_vals);
    clamped_difference(Y2, p, wd);
    out.grad += wd;
  }
  out.P = pairwise_sum(out.per_m);
  return out;
}

}  // namespace

EnergyGradient energy_and_gradient(const Profile& W, const PotentialFamily& fam,
                                   int M, double guard) {
  return energy_and_gradient_impl(W.grid(), W.values(), fam, M, guard);
}

EnergyGradient energy_and_gradient(const Field& W, const PotentialFamily& fam,
                                   int M, double guard) {
  return energy_and_gradient_impl(W.grid, W.values, fam, M, guard);
}

EnergyBreakdown potential_energy(const Profile& W, const PotentialFamily& fam, int M) {
  const double guard = 1e-10 * fam.nu();
  EnergyGradient eg = energy_and_gradient(W, fam, M, guard);
  EnergyBreakdown out;
  out.total = eg.P;
  out.per_m = std::move(eg.per_m);
  out.M = M;
  out.tail_bound = p_tail_bound(fam, kinetic_energy(W), M);
  return out;
}

Field gradient(const Profile& W, const PotentialFamily& fam, int M) {
  const double guard = 1e-10 * fam.nu();
  EnergyGradient eg = energy_and_gradient(W, fam, M, guard);
  return Field{W.grid(), std::move(eg.grad)};
}

EnergyBreakdown quadratic_energy(const Profile& W, const PotentialFamily& fam, int M) {
  if (M < 1) throw DomainError("quadratic_energy: M must be positive");
  const Grid& g = W.grid();
  const long n = g.n();
  const double h = g.h();
  const int limit = fam.interacts(M) ? M : fam.range_limit() - 1;
  const Eigen::ArrayXd& w = W.values();

  EnergyBreakdown out;
  out.per_m = Eigen::ArrayXd::Zero(M);
  out.M = M;

  Eigen::ArrayXd Y = centered_antiderivative(g, w);
  Eigen::ArrayXd u(n), contrib(n - 1);
  auto w_at = [&](long i) { return (i >= 0 && i < n) ? w[i] : 0.0; };

  for (int m = 1; m <= limit; ++m) {
    const long p = window_cells(g, m);
    clamped_difference(Y, p, u);
    // On each cell A_m W is the quadratic a + b t + c2 t^2 (t in [0, h]):
    // a is the nodal sample, b = W(x_i + m/2) - W(x_i - m/2) its slope.
    for (long i = 0; i + 1 < n; ++i) {
      const double a = u[i];
      const double b = w_at(i + p) - w_at(i - p);
      const double b1 = w_at(i + 1 + p) - w_at(i + 1 - p);
      const double c2 = (b1 - b) / (2.0 * h);
      contrib[i] = a * a * h + a * b * h * h +
                   (b * b / 3.0 + 2.0 * a * c2 / 3.0) * h * h * h +
                   0.5 * b * c2 * h * h * h * h + 0.2 * c2 * c2 * h * h * h * h * h;
    }
    out.per_m[m - 1] = 0.5 * range_constants(fam, m).d2phi * pairwise_sum(contrib);
  }
  out.total = pairwise_sum(out.per_m);
  out.tail_bound = q_tail_bound(fam, kinetic_energy(W), M);
  return out;
}

double mu(const Profile& W, const PotentialFamily& fam, int M) {
  const double norm_w = std::sqrt(2.0 * kinetic_energy(W));
  if (norm_w == 0.0) throw DomainError("mu: zero profile");
  const Field g = gradient(W, fam, M);
  const double norm_g = l2_norm(g);
  if (norm_g == 0.0) throw DomainError("mu: zero gradient (degenerate potential)");
  return norm_w / norm_g;
}

ResidualNorms wave_residual(const Profile& W, double c, const PotentialFamily& fam,
                            int M) {
  const Field g = gradient(W, fam, M);
  Field rho{W.grid(), c * c * W.values() - g.values};
  return ResidualNorms{l2_norm(rho), rho.values.abs().maxCoeff()};
}

double p_tail_bound(const PotentialFamily& fam, double K, int M) {
  if (fam.range_limit() != 0 && !fam.interacts(M + 1)) return 0.0;
  if (fam.range_limit() != 0) {
    double tail = 0.0;  // finite remainder, summed exactly
    for (int m = M + 1; m < fam.range_limit(); ++m) {
      const double shifted = fam.nu() * m - std::sqrt(2.0 * K * m);
      tail += K * static_cast<double>(m) * m * phi_deriv(fam, m, shifted, 2);
    }
    return tail;
  }
  const double a = fam.alpha();
  const double nu = fam.nu();
  const double s = std::sqrt(2.0 * K / (nu * nu) / M);
  if (!(s < 1.0) || !(a > 1.0)) return std::numeric_limits<double>::infinity();
  double c2 = 1.0;
  for (int k = 0; k < 2; ++k) c2 *= (a + k);
  return K * c2 * std::pow(nu, -a - 2.0) * std::pow(1.0 - s, -a - 2.0) *
         std::pow(static_cast<double>(M), 1.0 - a) / (a - 1.0);
}

double q_tail_bound(const PotentialFamily& fam, double K, int M) {
  if (fam.range_limit() != 0 && !fam.interacts(M + 1)) return 0.0;
  if (fam.range_limit() != 0) {
    double tail = 0.0;
    for (int m = M + 1; m < fam.range_limit(); ++m)
      tail += K * static_cast<double>(m) * m * phi_deriv(fam, m, fam.nu() * m, 2);
    return tail;
  }
  const double a = fam.alpha();
  if (!(a > 1.0)) return std::numeric_limits<double>::infinity();
  double c2 = 1.0;
  for (int k = 0; k < 2; ++k) c2 *= (a + k);
  return K * c2 * std::pow(fam.nu(), -a - 2.0) *
         std::pow(static_cast<double>(M), 1.0 - a) / (a - 1.0);
}

}  // namespace lrwave
