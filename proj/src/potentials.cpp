#include "lrwave/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lrwave/summation.hpp"

namespace lrwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPsiTaylorThreshold = 1e-4;  // in units of nu m

// (-1)^order alpha (alpha+1) ... (alpha+order-1)
double power_law_coeff(double alpha, int order) {
  double c = 1.0;
  for (int k = 0; k < order; ++k) c *= -(alpha + k);
  return c;
}

}  // namespace

PotentialFamily::PotentialFamily(PotentialKind k, double alpha, double nu,
                                 int m0, CustomPotential f)
    : kind_(k), alpha_(alpha), nu_(nu), m0_(m0), custom_(std::move(f)) {
  if (!(nu > 0)) throw ConfigError("potential: nu must be positive");
}

PotentialFamily PotentialFamily::power_law(double alpha, double nu) {
  if (!(alpha > 0)) throw ConfigError("potential: power-law exponent must be positive");
  return PotentialFamily(PotentialKind::power_law, alpha, nu, 0, {});
}

PotentialFamily PotentialFamily::finite_range(double alpha, double nu, int m0) {
  if (!(alpha > 0)) throw ConfigError("potential: power-law exponent must be positive");
  if (m0 < 2) throw ConfigError("potential: finite range needs m0 >= 2 (Phi_1 must not vanish)");
  return PotentialFamily(PotentialKind::finite_range_power_law, alpha, nu, m0, {});
}

PotentialFamily PotentialFamily::custom(CustomPotential phi, double nu, int m0) {
  if (!phi) throw ConfigError("potential: custom hook is empty");
  if (m0 < 2) throw ConfigError("potential: custom families need a finite range m0 >= 2");
  return PotentialFamily(PotentialKind::custom_tabulated, 0.0, nu, m0, std::move(phi));
}

double phi_deriv(const PotentialFamily& fam, int m, double r, int order) {
  if (m < 1) throw DomainError("phi_deriv: m must be a positive integer");
  if (order < 0 || order > 4) throw DomainError("phi_deriv: unsupported derivative order");
  if (!fam.interacts(m)) return 0.0;
  if (fam.kind() == PotentialKind::custom_tabulated) return fam.custom_hook()(m, r, order);
  if (!(r > 0)) throw DomainError("phi_deriv: singular evaluation at r <= 0");
  return power_law_coeff(fam.alpha(), order) * std::pow(r, -fam.alpha() - order);
}

RangeConstants range_constants(const PotentialFamily& fam, int m) {
  const double rm = fam.nu() * m;
  return RangeConstants{phi_deriv(fam, m, rm, 0), phi_deriv(fam, m, rm, 1),
                        phi_deriv(fam, m, rm, 2), phi_deriv(fam, m, rm, 3)};
}

double psi(const PotentialFamily& fam, int m, double r, int order) {
  if (m < 1) throw DomainError("psi: m must be a positive integer");
  if (order < 0 || order > 2) throw DomainError("psi: unsupported derivative order");
  const double rm = fam.nu() * m;
  if (r < 0.0 || r >= rm) throw DomainError("psi: argument outside [0, nu m)");
  if (order == 2) return phi_deriv(fam, m, rm - r, 2);
  if (r < kPsiTaylorThreshold * rm) {
    const RangeConstants c = range_constants(fam, m);
    if (order == 0) return 0.5 * c.d2phi * r * r - c.d3phi * r * r * r / 6.0;
    return c.d2phi * r - 0.5 * c.d3phi * r * r;
  }
  if (order == 0)
    return phi_deriv(fam, m, rm - r, 0) - phi_deriv(fam, m, rm, 0) +
           phi_deriv(fam, m, rm, 1) * r;
  return -phi_deriv(fam, m, rm - r, 1) + phi_deriv(fam, m, rm, 1);
}

namespace {

// Upper bound of \int_M^infty x^{-p} dx, finite only for p > 1.
double power_integral_tail(double M, double p) {
  if (!(p > 1.0)) return kInf;
  return std::pow(M, 1.0 - p) / (p - 1.0);
}

// For x >= M: (nu x - sqrt(2Kx))^{-p} <= (nu x)^{-p} (1 - s_M)^{-p} with
// s_M = sqrt(2K / nu^2 / M); monotone envelope for the integral test.
double shifted_envelope(double nu, double K, double M, double p) {
  const double s = std::sqrt(2.0 * K / (nu * nu) / M);
  if (!(s < 1.0)) return kInf;
  return std::pow(1.0 - s, -p);
}

}  // namespace

SeriesEnclosure eta(const PotentialFamily& fam, int M) {
  if (M < 1) throw DomainError("eta: M must be positive");
  SeriesEnclosure out;
  const int limit = fam.interacts(M) ? M : fam.range_limit() - 1;
  Eigen::ArrayXd terms(std::max(limit, 1));
  terms.setZero();
  for (int m = 1; m <= limit; ++m)
    terms[m - 1] = m * phi_deriv(fam, m, fam.nu() * m, 1);
  out.partial = pairwise_sum(terms.data(), limit);
  out.terms = limit;
  if (!fam.interacts(limit + 1)) {
    out.tail_lo = out.tail_hi = 0.0;
    return out;
  }
  // |m Phi'(nu m)| = alpha nu^{-alpha-1} m^{-alpha}
  const double a = fam.alpha();
  const double bound = a * std::pow(fam.nu(), -a - 1.0) * power_integral_tail(M, a);
  if (!std::isfinite(bound))
    throw ConvergenceError("eta: no tail bound for alpha <= 1, series may diverge");
  out.tail_lo = -bound;
  out.tail_hi = 0.0;
  return out;
}

SeriesEnclosure q_of_k(const PotentialFamily& fam, double K) {
  if (!(K > 0)) throw DomainError("q_of_k: K must be positive");
  SeriesEnclosure out;
  const long hard_cap = 4000000;
  std::vector<double> terms;
  terms.reserve(1 << 16);
  double head = 0.0;
  for (long m = 1; m <= hard_cap; ++m) {
    if (!fam.interacts(static_cast<int>(m))) {
      out.partial = pairwise_sum(terms.data(), static_cast<Eigen::Index>(terms.size()));
      out.terms = static_cast<int>(terms.size());
      return out;  // exact finite sum
    }
    const double t =
        K * static_cast<double>(m) * m * phi_deriv(fam, static_cast<int>(m), fam.nu() * m, 2);
    terms.push_back(t);
    head += t;
    if (m >= 64 && (m & (m - 1)) == 0) {  // check at powers of two
      const double a = fam.alpha();
      const double c = K * power_law_coeff(a, 2) * std::pow(fam.nu(), -a - 2.0);
      const double hi = c * power_integral_tail(static_cast<double>(m), a);
      const double lo = c * power_integral_tail(static_cast<double>(m + 1), a);
      if (std::isfinite(hi) && 0.5 * (hi - lo) < 1e-9 * head + 1e-300) {
        out.partial = pairwise_sum(terms.data(), static_cast<Eigen::Index>(terms.size()));
        out.terms = static_cast<int>(terms.size());
        out.tail_lo = lo;
        out.tail_hi = hi;
        return out;
      }
    }
  }
  throw ConvergenceError("q_of_k: series tail did not certify within the term cap");
}

namespace {

// Sign pattern of the assumptions: (-1)^k Phi^(k) >= 0 for k = 0..4,
// strict for m = 1 at r > 0. Sampled on a geometric grid, 256 points per
// decade over four decades ending at 4 nu m.
bool signs_hold(const PotentialFamily& fam, std::string* detail) {
  const int probe_limit = fam.range_limit() == 0 ? 6 : std::min(6, fam.range_limit() - 1);
  for (int m = 1; m <= probe_limit; ++m) {
    const double top = 4.0 * fam.nu() * m;
    const int decades = 4, per_decade = 256;
    for (int i = 0; i <= decades * per_decade; ++i) {
      const double r = top * std::pow(10.0, -static_cast<double>(i) / per_decade);
      for (int k = 0; k <= 4; ++k) {
        const double v = phi_deriv(fam, m, r, k);
        const double signed_v = (k % 2 == 0) ? v : -v;
        const bool ok = (m == 1) ? signed_v > 0.0 : signed_v >= 0.0;
        if (!ok) {
          if (detail)
            *detail = "order " + std::to_string(k) + " at m=" + std::to_string(m) +
                      ", r=" + std::to_string(r);
          return false;
        }
      }
    }
  }
  return true;
}

SeriesEnclosure partial_with_tail(const PotentialFamily& fam, double K, int which,
                                  double gamma, bool* finite) {
  // which: 0 force, 1 curvature, 2 curvature_gamma, 3 third_derivative
  const double nu = fam.nu();
  const int limit = fam.range_limit() == 0 ? 10000 : fam.range_limit() - 1;
  Eigen::ArrayXd terms(limit);
  for (int m = 1; m <= limit; ++m) {
    const double shifted = nu * m - std::sqrt(2.0 * K * m);
    double t = 0.0;
    switch (which) {
      case 0: t = m * phi_deriv(fam, m, shifted, 1); break;
      case 1: t = static_cast<double>(m) * m * phi_deriv(fam, m, shifted, 2); break;
      case 2: t = std::pow(static_cast<double>(m), gamma) * phi_deriv(fam, m, nu * m, 2); break;
      case 3: t = std::pow(static_cast<double>(m), 1.5) * phi_deriv(fam, m, shifted, 3); break;
    }
    terms[m - 1] = t;
  }
  SeriesEnclosure out;
  out.partial = pairwise_sum(terms.data(), limit);
  out.terms = limit;
  if (fam.range_limit() != 0) {
    *finite = true;
    return out;  // series terminates, tail exactly zero
  }
  const double a = fam.alpha();
  const double M = static_cast<double>(limit);
  double bound = kInf;
  switch (which) {
    case 0:
      bound = a * std::pow(nu, -a - 1.0) * shifted_envelope(nu, K, M, a + 1.0) *
              power_integral_tail(M, a);
      break;
    case 1:
      bound = power_law_coeff(a, 2) * std::pow(nu, -a - 2.0) *
              shifted_envelope(nu, K, M, a + 2.0) * power_integral_tail(M, a);
      break;
    case 2:
      bound = power_law_coeff(a, 2) * std::pow(nu, -a - 2.0) *
              power_integral_tail(M, a + 2.0 - gamma);
      break;
    case 3:
      bound = -power_law_coeff(a, 3) * std::pow(nu, -a - 3.0) *
              shifted_envelope(nu, K, M, a + 3.0) * power_integral_tail(M, a + 1.5);
      break;
  }
  *finite = std::isfinite(bound);
  const bool negative_terms = (which == 0 || which == 3);
  out.tail_lo = negative_terms ? -bound : 0.0;
  out.tail_hi = negative_terms ? 0.0 : bound;
  return out;
}

}  // namespace

AdmissibilityReport check_assumptions(const PotentialFamily& fam, double K) {
  AdmissibilityReport rep;
  rep.k_max = fam.k_max();
  if (!(K > 0) || K >= rep.k_max) {
    rep.failures.push_back(kFailureEnergyBound);
    rep.passed = false;
    return rep;
  }

  std::string sign_detail;
  const bool signs_ok = signs_hold(fam, &sign_detail);
  if (!signs_ok) rep.failures.push_back(std::string(kFailureSignPattern) + ": " + sign_detail);

  // Analytic convergence for the power-law kinds: series (a), (b) need
  // alpha > 1, (d) always converges, (c) needs gamma < alpha + 1.
  // Finite-range and custom families are finite sums at every gamma.
  const bool finite_range = fam.range_limit() != 0;
  bool conv[4] = {true, true, true, true};
  if (!finite_range) {
    const double a = fam.alpha();
    conv[0] = conv[1] = a > 1.0;
    conv[3] = true;
  }

  constexpr int kGammaPoints = 64;
  double first_pass = 0.0, last_pass = 0.0;
  bool any_pass = false;
  for (int k = 0; k < kGammaPoints; ++k) {
    const double gamma = 2.5 + 0.5 * (k + 0.5) / kGammaPoints;
    const bool pass = finite_range || gamma < fam.alpha() + 1.0;
    if (pass) {
      if (!any_pass) first_pass = gamma;
      last_pass = gamma;
      any_pass = true;
    }
  }
  if (any_pass) {
    rep.gamma_window.lo = (first_pass < 2.5 + 0.5 / kGammaPoints) ? 2.5 : first_pass;
    rep.gamma_window.hi = (last_pass > 3.0 - 0.5 / kGammaPoints) ? 3.0 : last_pass;
    rep.gamma_ref = 0.5 * (rep.gamma_window.lo + rep.gamma_window.hi);
  }
  conv[2] = any_pass;

  for (int s = 0; s < 4; ++s) {
    bool fin = false;
    rep.series_values[s] = partial_with_tail(fam, K, s, rep.gamma_ref, &fin);
    rep.series_finite[s] = fin && conv[s];
    if (!rep.series_finite[s]) rep.failures.push_back(kSeriesNames[s]);
  }

  rep.passed = signs_ok && rep.series_finite[0] && rep.series_finite[1] &&
               rep.series_finite[3] && !rep.gamma_window.empty();
  return rep;
}

namespace {

double truncation_term(const PotentialFamily& fam, double K, int m) {
  const double shifted = fam.nu() * m - std::sqrt(2.0 * K * m);
  return K * static_cast<double>(m) * m * phi_deriv(fam, m, shifted, 2);
}

double truncation_tail_bound(const PotentialFamily& fam, double K, double M) {
  if (fam.range_limit() != 0) return 0.0;
  const double a = fam.alpha();
  const double nu = fam.nu();
  return K * power_law_coeff(a, 2) * std::pow(nu, -a - 2.0) *
         shifted_envelope(nu, K, M, a + 2.0) * power_integral_tail(M, a);
}

}  // namespace

TruncationPlan truncation_plan(const PotentialFamily& fam, double K,
                               double tol_tail, long cap) {
  if (!(K > 0) || K >= fam.k_max())
    throw DomainError("truncation: K outside (0, nu^2/2)");
  TruncationPlan plan;
  if (fam.range_limit() != 0) {
    // Series terminates; truncate exactly at the last interacting range.
    plan.M = std::min<long>(fam.range_limit() - 1, cap);
    plan.tail_abs = 0.0;
    plan.tail_ratio = 0.0;
    plan.satisfied = plan.M == fam.range_limit() - 1;
    return plan;
  }
  double head = 0.0;
  for (long m = 1; m <= cap; ++m) {
    head += truncation_term(fam, K, static_cast<int>(m));
    const double tail = truncation_tail_bound(fam, K, static_cast<double>(m));
    plan.M = static_cast<int>(m);
    plan.tail_abs = tail;
    plan.tail_ratio = tail / head;
    if (tail < tol_tail * head) {
      plan.satisfied = true;
      return plan;
    }
  }
  plan.satisfied = false;
  return plan;
}

int truncation_order(const PotentialFamily& fam, double K, double tol_tail, long cap) {
  const TruncationPlan plan = truncation_plan(fam, K, tol_tail, cap);
  if (!plan.satisfied)
    throw ConvergenceError(
        "truncation: no M within the cap meets the tail tolerance (achieved ratio " +
        std::to_string(plan.tail_ratio) + " at M=" + std::to_string(plan.M) + ")");
  return plan.M;
}

}  // namespace lrwave
