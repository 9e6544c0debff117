#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "lrwave/errors.hpp"

namespace lrwave {

enum class PotentialKind { power_law, finite_range_power_law, custom_tabulated };

// Hook for user-defined potentials: returns d^order Phi_m / dr^order.
// Analytic derivatives up to order 4 are required; numerical differentiation
// is too noisy for the sign checks.
using CustomPotential = std::function<double(int m, double r, int order)>;

// Repulsive interaction law Phi_m for every range m, with the background
// spacing nu. Families are constructible even when inadmissible (so the gate
// can report why); check_assumptions certifies the admissibility invariants.
class PotentialFamily {
 public:
  static PotentialFamily power_law(double alpha, double nu);
  // Phi_m = r^-alpha for m < m0, identically zero for m >= m0.
  static PotentialFamily finite_range(double alpha, double nu, int m0);
  // Custom families must be finite range: certified series tails for
  // arbitrary user potentials are not obtainable.
  static PotentialFamily custom(CustomPotential phi, double nu, int m0);

  PotentialKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double nu() const { return nu_; }
  double k_max() const { return 0.5 * nu_ * nu_; }

  // m0: interactions vanish for m >= m0; 0 means unbounded range.
  int range_limit() const { return m0_; }
  bool interacts(int m) const { return m0_ == 0 || m < m0_; }
  bool is_power(int m) const { return kind_ != PotentialKind::custom_tabulated && interacts(m); }

  const CustomPotential& custom_hook() const { return custom_; }

 private:
  PotentialFamily(PotentialKind k, double alpha, double nu, int m0, CustomPotential f);

  PotentialKind kind_;
  double alpha_;
  double nu_;
  int m0_;
  CustomPotential custom_;
};

// d^order Phi_m / dr^order at r, order in 0..4. Zero beyond a finite range;
// singular-evaluation error at r <= 0 inside the range.
double phi_deriv(const PotentialFamily& fam, int m, double r, int order);

// Corrected potential on [0, nu m):
//   order 0:  Phi_m(nu m - r) - Phi_m(nu m) + Phi_m'(nu m) r
//   order 1: -Phi_m'(nu m - r) + Phi_m'(nu m)
//   order 2:  Phi_m''(nu m - r)
// All three are nonnegative. Below r = 1e-4 nu m the value and slope switch
// to the second-order Taylor form to avoid the three-way cancellation.
double psi(const PotentialFamily& fam, int m, double r, int order = 0);

// Partial sum of a one-signed series plus a certified enclosure of the tail
// (integral test on the monotone envelope).
struct SeriesEnclosure {
  double partial = 0.0;
  double tail_lo = 0.0;
  double tail_hi = 0.0;
  int terms = 0;
  double value() const { return partial + 0.5 * (tail_lo + tail_hi); }
  double lower() const { return partial + tail_lo; }
  double upper() const { return partial + tail_hi; }
  double half_width() const { return 0.5 * (tail_hi - tail_lo); }
};

// eta = sum_m m Phi_m'(nu m), the additive constant of the wave equation.
// Terms are nonpositive, so the tail enclosure is [-integral bound, 0].
// Divergence error when no tail bound can be established (alpha <= 1).
SeriesEnclosure eta(const PotentialFamily& fam, int M);

// Closed form of the quadratic-energy supremum: sum_m Phi_m''(nu m) K m^2,
// evaluated with a two-sided integral-test tail (accuracy ~1e-9 relative).
SeriesEnclosure q_of_k(const PotentialFamily& fam, double K);

struct GammaWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(hi > lo); }
  bool contains(double lo2, double hi2) const { return !empty() && lo <= lo2 && hi2 <= hi; }
};

// Identifiers used in AdmissibilityReport::failures.
inline constexpr const char* kFailureEnergyBound = "kinetic_energy_bound";
inline constexpr const char* kFailureSignPattern = "sign_pattern";
inline constexpr std::array<const char*, 4> kSeriesNames = {
    "force_series",             // sum m Phi_m'(nu m - sqrt(2Km))
    "curvature_series",         // sum m^2 Phi_m''(nu m - sqrt(2Km))
    "curvature_gamma_series",   // sum m^gamma Phi_m''(nu m)
    "third_derivative_series",  // sum m^(3/2) Phi_m'''(nu m - sqrt(2Km))
};

struct AdmissibilityReport {
  bool passed = false;
  GammaWindow gamma_window;        // admissible gamma within (5/2, 3)
  double k_max = 0.0;              // nu^2 / 2
  double gamma_ref = 2.75;         // gamma at which series_values[2] is reported
  std::array<SeriesEnclosure, 4> series_values{};
  std::array<bool, 4> series_finite{false, false, false, false};
  std::vector<std::string> failures;
};

// Evaluates the sign pattern on sampled points and the finiteness of the four
// global series at the arguments nu m and nu m - sqrt(2Km), scanning gamma
// over a 64-point grid in (5/2, 3). K >= nu^2/2 is a hard failure.
AdmissibilityReport check_assumptions(const PotentialFamily& fam, double K);

// Smallest M with tail(M) < tol_tail * head(M) for the truncation series
// K m^2 Phi_m''(nu m - sqrt(2Km)); tail enclosed by the integral test.
// Finite-range families truncate exactly at m0 - 1. Throws ConvergenceError
// when no M <= cap satisfies the bound.
int truncation_order(const PotentialFamily& fam, double K, double tol_tail,
                     long cap = 1000000);

// Non-throwing variant used by the solver: returns the best M within the cap
// together with the achieved certified tail (absolute and relative to the
// head). `satisfied` tells whether the requested tolerance was met.
struct TruncationPlan {
  int M = 0;
  double tail_abs = 0.0;
  double tail_ratio = 0.0;
  bool satisfied = false;
};
TruncationPlan truncation_plan(const PotentialFamily& fam, double K,
                               double tol_tail, long cap);

// Phi_m and derivatives at the equilibrium argument nu m.
struct RangeConstants {
  double phi = 0.0;
  double dphi = 0.0;
  double d2phi = 0.0;
  double d3phi = 0.0;
};
RangeConstants range_constants(const PotentialFamily& fam, int m);

}  // namespace lrwave
