#include "lrwave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrwave/pwlinear.hpp"
#include "lrwave/summation.hpp"

namespace lrwave {

double LatticeState::position(long idx) const {
  if (idx >= 0 && idx < size()) return x[idx];
  const double eq = fam.nu() * static_cast<double>(idx - N);
  return idx < 0 ? eq : eq - right_offset;  // frozen background
}

LatticeState init_from_wave(const WaveSolution& sol, const PotentialFamily& fam,
                            int N, int M_sim) {
  const Profile& W = sol.profile;
  const Grid& g = W.grid();
  if (M_sim <= 0) M_sim = std::min(sol.M, 64);
  if (fam.range_limit() != 0) M_sim = std::min(M_sim, fam.range_limit() - 1);

  const int margin = M_sim;
  const double flat_tol = 1e-8 * W.max();
  const double probe = static_cast<double>(N - margin);
  if (probe < 1.0)
    throw SimulationError("init_from_wave: chain too short for the interaction margin");
  if (probe <= g.R()) {
    // beyond the grid the profile is identically zero, hence flat
    const long pi = g.center() + static_cast<long>(std::llround(probe * g.q()));
    if (W.values()[pi] >= flat_tol)
      throw SimulationError("init_from_wave: profile not flat at the chain ends");
  }

  const Eigen::ArrayXd X = reconstruct_x(W);
  const double X_total = X[X.size() - 1];
  auto x_at = [&](double xi) {
    if (xi <= -g.R()) return 0.0;
    if (xi >= g.R()) return X_total;
    return X[g.center() + static_cast<long>(std::llround(xi * g.q()))];
  };
  auto w_at = [&](double xi) {
    if (std::abs(xi) >= g.R()) return 0.0;
    return W.values()[g.center() + static_cast<long>(std::llround(xi * g.q()))];
  };

  LatticeState st{N, Eigen::ArrayXd(2L * N + 1), Eigen::ArrayXd(2L * N + 1), 0.0,
                  fam, M_sim, X_total};
  for (long j = -N; j <= N; ++j) {
    st.x[j + N] = fam.nu() * static_cast<double>(j) - x_at(static_cast<double>(j));
    st.v[j + N] = sol.c * w_at(static_cast<double>(j));
  }
  return st;
}

Eigen::ArrayXd strain_field(const LatticeState& st) {
  const long n = st.size();
  Eigen::ArrayXd r(n - 1);
  for (long i = 0; i + 1 < n; ++i) r[i] = st.fam.nu() - (st.x[i + 1] - st.x[i]);
  return r;
}

namespace {

constexpr double kCollisionGuard = 1e-9;

void accumulate_forces(const LatticeState& st, Eigen::ArrayXd& a) {
  a.setZero();
  const long n = st.size();
  for (int m = 1; m <= st.M_sim; ++m) {
    if (!st.fam.interacts(m)) break;
    for (long left = -m; left < n; ++left) {
      const long right = left + m;
      if (right < 0) continue;
      if (left >= n) break;
      const bool left_in = left >= 0;
      const bool right_in = right < n;
      if (!left_in && !right_in) continue;
      const double gap = st.position(right) - st.position(left);
      if (gap <= kCollisionGuard)
        throw SimulationError("lattice: particle collision at gap " +
                              std::to_string(gap));
      const double f = phi_deriv(st.fam, m, gap, 1);
      if (left_in) a[left] += f;
      if (right_in) a[right] -= f;
    }
  }
}

struct CorrelationPeak {
  double shift = 0.0;
  bool defined = false;
};

// Quadratic interpolation of the cross-correlation peak of rT against r0.
CorrelationPeak correlation_shift(const Eigen::ArrayXd& r0, const Eigen::ArrayXd& rT) {
  const long n = r0.size();
  const double scale = std::sqrt(r0.square().sum() * rT.square().sum());
  if (!(scale > 0.0)) return {};
  long best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  Eigen::ArrayXd corr(2 * n - 1);
  for (long k = -(n - 1); k <= n - 1; ++k) {
    double c = 0.0;
    const long lo = std::max<long>(0, k);
    const long hi = std::min<long>(n, n + k);
    for (long i = lo; i < hi; ++i) c += rT[i] * r0[i - k];
    corr[k + n - 1] = c;
    if (c > best) {
      best = c;
      best_k = k;
    }
  }
  if (best_k == -(n - 1) || best_k == n - 1) return {};  // peak on the boundary
  const double cm = corr[best_k + n - 2], c0 = corr[best_k + n - 1],
               cp = corr[best_k + n];
  const double denom = cm - 2.0 * c0 + cp;
  const double delta = denom != 0.0 ? 0.5 * (cm - cp) / denom : 0.0;
  return {static_cast<double>(best_k) + delta, true};
}

// Relative L2 difference of rT against r0 shifted by s (linear interpolation),
// minimized on a fine local grid around the correlation peak.
double shape_error_at_best_shift(const Eigen::ArrayXd& r0, const Eigen::ArrayXd& rT,
                                 double s_center) {
  const long n = r0.size();
  const double norm0 = std::sqrt(r0.square().sum());
  if (!(norm0 > 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double ds = -1.0; ds <= 1.0 + 1e-12; ds += 0.02) {
    const double s = s_center + ds;
    const double fs = std::floor(s);
    const long k = static_cast<long>(fs);
    const double frac = s - fs;
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
      const long j0 = i - k;
      const double a = (j0 >= 0 && j0 < n) ? r0[j0] : 0.0;
      const double b = (j0 - 1 >= 0 && j0 - 1 < n) ? r0[j0 - 1] : 0.0;
      const double shifted = (1.0 - frac) * a + frac * b;
      const double d = rT[i] - shifted;
      acc += d * d;
    }
    best = std::min(best, std::sqrt(acc) / norm0);
  }
  return best;
}

}  // namespace

Eigen::ArrayXd forces(const LatticeState& st) {
  Eigen::ArrayXd a(st.size());
  accumulate_forces(st, a);
  return a;
}

double lattice_energy(const LatticeState& st) {
  const long n = st.size();
  Eigen::ArrayXd kin = 0.5 * st.v.square();
  double pot = 0.0;
  for (int m = 1; m <= st.M_sim; ++m) {
    if (!st.fam.interacts(m)) break;
    const double rest = phi_deriv(st.fam, m, st.fam.nu() * m, 0);
    for (long left = -m; left < n; ++left) {
      const long right = left + m;
      const bool left_in = left >= 0 && left < n;
      const bool right_in = right >= 0 && right < n;
      if (!left_in && !right_in) continue;  // both partners frozen
      pot += phi_deriv(st.fam, m, st.position(right) - st.position(left), 0) - rest;
    }
  }
  return pairwise_sum(kin) + pot;
}

PropagationReport run(LatticeState& st, double dt, double T, const RunObserver* obs) {
  if (!(dt > 0.0) || !(T > 0.0)) throw SimulationError("run: need dt > 0 and T > 0");
  const long steps = static_cast<long>(std::llround(T / dt));

  PropagationReport rep;
  rep.steps = steps;
  rep.min_gap = std::numeric_limits<double>::infinity();

  const Eigen::ArrayXd r0 = strain_field(st);
  const double H0 = lattice_energy(st);

  Eigen::ArrayXd a(st.size());
  accumulate_forces(st, a);
  for (long step = 0; step < steps; ++step) {
    st.v += 0.5 * dt * a;
    st.x += dt * st.v;
    accumulate_forces(st, a);
    st.v += 0.5 * dt * a;
    st.t += dt;

    double gap_min = std::numeric_limits<double>::infinity();
    for (long i = 0; i + 1 < st.size(); ++i)
      gap_min = std::min(gap_min, st.x[i + 1] - st.x[i]);
    rep.min_gap = std::min(rep.min_gap, gap_min);
    if (!(gap_min > 0.0)) rep.ordering_ok = false;

    if (obs && obs->stride > 0 && (step + 1) % obs->stride == 0)
      obs->callback(step + 1, st);
  }

  const Eigen::ArrayXd rT = strain_field(st);
  const double HT = lattice_energy(st);
  rep.energy_drift = H0 != 0.0 ? std::abs(HT - H0) / std::abs(H0) : 0.0;

  const CorrelationPeak peak = correlation_shift(r0, rT);
  rep.c_defined = peak.defined;
  if (peak.defined) {
    rep.c_measured = peak.shift / st.t;
    rep.shape_error = shape_error_at_best_shift(r0, rT, peak.shift);
  }
  return rep;
}

}  // namespace lrwave
