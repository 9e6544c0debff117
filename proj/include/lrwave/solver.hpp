#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrwave/operators.hpp"
#include "lrwave/potentials.hpp"
#include "lrwave/profile.hpp"

namespace lrwave {

enum class SeedKind { gaussian, indicator_wl, user_profile };

struct SolverConfig {
  double K = 0.2;              // target kinetic energy, 0 < K < nu^2/2
  int q = 16;                  // grid spacing h = 1/q, q even
  double R = 60.0;             // domain half-width, integer multiple of h
  double tol_tail = 1e-12;     // series truncation tolerance (tail/head)
  double tol_fp = 1e-10;       // fixed-point tolerance on |T(W)-W|_2 / sqrt(2K)
  long max_iter = 100000;
  double guard = -1.0;         // singularity guard; < 0 selects 1e-10 * nu
  int max_truncation = 2000;   // ceiling on M; the achieved tail is certified
  SeedKind seed = SeedKind::gaussian;
  double seed_width = 2.0;     // gaussian seed width
  int seed_L = 4;              // indicator seed half-width
  std::optional<std::uint64_t> perturb_seed;  // optional seeded perturbation
  std::optional<Profile> user_seed;

  Grid grid() const { return Grid(q, R); }
};

// Per-iterate certificates recorded along the run. The deviation fields are
// maxima over all iterates, measured on the raw update mu(W) dP(W) before
// projection, relative to its peak value.
struct IterateTrace {
  std::vector<double> P;          // P(W_k), including the final iterate
  double max_asymmetry = 0.0;
  double max_negativity = 0.0;
  double max_nonunimodality = 0.0;
  double max_energy_dev = 0.0;    // max |K(W_k)/K - 1|
  double max_am_excess = 0.0;     // max_m max_s A_m W / sqrt(2Km) - 1
  double min_dP_rel = 0.0;        // most negative per-step (P_{k+1}-P_k)/P_k
  double final_update = 0.0;      // |T(W)-W|_2 / sqrt(2K) at the last step
};

struct WaveSolution {
  Profile profile;
  double c = 0.0;        // wave speed mu(W)^{-1/2}
  double K = 0.0;
  double P = 0.0;
  double Q_of_K = 0.0;   // closed-form quadratic supremum at this K
  ResidualNorms residual;
  long iterations = 0;
  double eps1 = 0.0;     // nu - (A_1 W)(0)
  double tail_bound = 0.0;        // certified P-tail beyond the truncation
  bool monotone_certificate = false;  // P nondecreasing along iterates to 1e-12
  int M = 0;             // truncation order used
  IterateTrace trace;
};

// Flags a stalled iteration: dP < 1e-16 P for 100 consecutive steps while the
// fixed-point tolerance is still unmet.
class StagnationDetector {
 public:
  bool step(double P_prev, double P, bool tol_met) {
    if (tol_met) {
      streak_ = 0;
      return false;
    }
    streak_ = (P - P_prev < 1e-16 * P) ? streak_ + 1 : 0;
    return streak_ >= 100;
  }

 private:
  long streak_ = 0;
};

// One application of the improvement operator: project_to_cone(mu(W) dP(W))
// renormalized to K. Projection and renormalization only absorb rounding
// drift; P never decreases across a step.
Profile improve_step(const Profile& W, const PotentialFamily& fam, int M);

// Fixed-point iteration from the configured seed until
// |T(W)-W|_2 <= tol_fp sqrt(2K). Throws AdmissibilityError when the gate
// fails and ConvergenceError on iteration cap, stagnation, or guard hits.
WaveSolution solve(const SolverConfig& cfg, const PotentialFamily& fam);

// mu(W)^{-1/2}; meaningful when W is (approximately) a fixed point.
double wave_speed(const Profile& W, const PotentialFamily& fam, int M);

}  // namespace lrwave
