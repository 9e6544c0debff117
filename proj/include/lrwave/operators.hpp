#pragma once

#include <Eigen/Core>

#include "lrwave/potentials.hpp"
#include "lrwave/profile.hpp"

namespace lrwave {

// Moving average A_m: exact integral of the zero-extended interpolant over
// the window [-m/2, m/2], evaluated at the nodes through antiderivative
// differences, O(n) per range. Even and unimodal whenever the input is;
// bitwise even output for bitwise even input.
Field apply_am(const Profile& W, int m);
Field apply_am(const Field& F, int m);

// Exact integral of the product of the two interpolants.
double inner_product(const Field& U, const Field& V);
double inner_product(const Profile& U, const Field& V);
double l2_norm(const Field& U);

// Exact integral of the interpolant of the nodal product. This is the duality
// pairing of the nodal calculus: <gradient(W), V> in this pairing equals the
// exact directional derivative of potential_energy, and A_m is exactly
// self-adjoint in it for every grid field.
double nodal_inner_product(const Field& U, const Field& V);
double nodal_inner_product(const Profile& U, const Field& V);

struct EnergyBreakdown {
  double total = 0.0;        // = sum of per_m
  Eigen::ArrayXd per_m;      // contribution of each range m = 1..M
  double tail_bound = 0.0;   // certified bound on the dropped m > M mass
  int M = 0;
};

// P(W) = sum_m \int Psi_m(A_m W): the nonlinear composition is formed at the
// nodes and the integral is the exact integral of its interpolant. This makes
// `gradient` the exact differential of `potential_energy` and keeps every
// paper identity exact at the truncated level.
EnergyBreakdown potential_energy(const Profile& W, const PotentialFamily& fam,
                                 int M);

// Q(W) = 1/2 sum_m Phi_m''(nu m) |A_m W|_2^2 with the square of the exact
// piecewise-quadratic A_m W integrated in closed form per cell.
EnergyBreakdown quadratic_energy(const Profile& W, const PotentialFamily& fam,
                                 int M);

// dP(W) = sum_m A_m [Psi_m'(A_m W)], Psi_m' applied nodewise to the exact
// A_m W samples, outer A_m exact on the resulting interpolant. Nonnegative,
// even and unimodal for cone inputs.
Field gradient(const Profile& W, const PotentialFamily& fam, int M);

// Fused single-pass evaluation used by the solver; also reports the
// singularity margin and the moving-average bound ratio of the iterate.
struct EnergyGradient {
  double P = 0.0;
  Eigen::ArrayXd grad;        // nodal values of dP on the input grid
  Eigen::ArrayXd per_m;
  double eps1 = 0.0;          // nu - max A_1 W
  double max_am_ratio = 0.0;  // max over m of (max A_m W) / sqrt(2 K m)
};
EnergyGradient energy_and_gradient(const Profile& W, const PotentialFamily& fam,
                                   int M, double guard);
// Field variant for evaluating P and dP at nearby non-cone points (finite
// difference probes). Arguments below the Taylor threshold, including tiny
// negative moving averages, use the smooth Taylor form.
EnergyGradient energy_and_gradient(const Field& W, const PotentialFamily& fam,
                                   int M, double guard);

// mu(W) = |W|_2 / |dP(W)|_2; error on a zero gradient.
double mu(const Profile& W, const PotentialFamily& fam, int M);

// rho = c^2 W - dP(W); equals c^2 W - sum_m A_m[-Phi_m'(nu m - A_m W)] - eta_M
// term by term, so the truncation is consistent between the two series.
struct ResidualNorms {
  double l2 = 0.0;
  double linf = 0.0;
};
ResidualNorms wave_residual(const Profile& W, double c,
                            const PotentialFamily& fam, int M);

// Certified bounds for the dropped m > M mass of P and Q on profiles of
// kinetic energy K (zero for finite-range families).
double p_tail_bound(const PotentialFamily& fam, double K, int M);
double q_tail_bound(const PotentialFamily& fam, double K, int M);

}  // namespace lrwave
