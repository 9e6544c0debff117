#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lrwave/solver.hpp"

namespace lrwave {

// One row of a K- or delta-sweep of the solution family.
struct SweepRow {
  double K = 0.0;
  double delta = 0.0;  // 1 - 2K/nu^2
  double c = 0.0;
  double P = 0.0;
  double Q_of_K = 0.0;
  double P_minus_Q_margin = 0.0;
  double eps1 = 0.0;
  double l2_dist_to_W0 = 0.0;  // direct grid distance to the sampled indicator
  std::optional<double> identity_residual;  // high-energy sweeps only
  long iterations = 0;
};

struct RowStatus {
  bool ok = false;
  std::string error;  // failure reason when not ok
  bool speed_bound_ok = false;      // 2 c^2 >= P / K
  bool margin_positive = false;     // P > Q(K)
};

struct SweepResult {
  std::vector<SweepRow> rows;      // successful rows, in input order
  std::vector<RowStatus> status;   // one per requested entry, in input order
};

// Independent solves for each K (optionally warm-started from the previous
// row); rows are independent tasks and merge in input order. Per-row failures
// are recorded and the sweep continues.
SweepResult sweep_k(const std::vector<double>& K_list, const PotentialFamily& fam,
                    const SolverConfig& cfg, bool warm_start = false, int jobs = 1);

// Solves K = (1 - delta) nu^2/2 for each delta and records the high-energy
// diagnostics: eps1, the distance to the indicator limit, and the identity
// residual evaluated through <W, W0> = nu (A_1 W)(0).
SweepResult high_energy_sweep(const std::vector<double>& delta_list,
                              const PotentialFamily& fam, const SolverConfig& cfg,
                              int jobs = 1);

struct QStudyRow {
  int L = 0;
  double Qcal_WL = 0.0;
  double lower_bound = 0.0;
  double Q_of_K = 0.0;
};

// Indicator test functions W_L: quadratic energy against the closed-form
// supremum and its finite-L lower bound. W_L is renormalized to kinetic
// energy exactly K before evaluation; the grid is sized to contain the full
// support of every A_m W_L used.
std::vector<QStudyRow> q_testfunction_study(const std::vector<int>& L_list,
                                            double K, const PotentialFamily& fam,
                                            int q = 16);

}  // namespace lrwave
