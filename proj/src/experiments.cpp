#include "lrwave/experiments.hpp"

#include <cmath>
#include <thread>

#include "lrwave/lattice.hpp"
#include "lrwave/operators.hpp"

namespace lrwave {

namespace {

SweepRow row_from_solution(const WaveSolution& sol, const PotentialFamily& fam,
                           bool high_energy) {
  SweepRow row;
  row.K = sol.K;
  row.delta = 1.0 - 2.0 * sol.K / (fam.nu() * fam.nu());
  row.c = sol.c;
  row.P = sol.P;
  row.Q_of_K = sol.Q_of_K;
  row.P_minus_Q_margin = sol.P - sol.Q_of_K;
  row.eps1 = sol.eps1;
  row.iterations = sol.iterations;
  row.l2_dist_to_W0 =
      l2_distance(sol.profile, make_w0(fam.nu(), sol.profile.grid()));
  if (high_energy) {
    // <W, W0> = nu (A_1 W)(0) = nu (nu - eps1) makes the expansion of
    // |W - W0|^2 algebraically exact; deviations isolate normalization error.
    const double nu = fam.nu();
    const double dist_sq = 2.0 * kinetic_energy(sol.profile) + nu * nu -
                           2.0 * nu * (nu - sol.eps1);
    row.identity_residual =
        std::abs(dist_sq - (2.0 * sol.eps1 * nu - row.delta * nu * nu));
  }
  return row;
}

RowStatus status_from(const SweepRow& row) {
  RowStatus st;
  st.ok = true;
  st.speed_bound_ok = 2.0 * row.c * row.c >= row.P / row.K;
  st.margin_positive = row.P_minus_Q_margin > 0.0;
  return st;
}

SweepResult run_sweep(const std::vector<double>& K_list, const PotentialFamily& fam,
                      const SolverConfig& base, bool high_energy, bool warm_start,
                      int jobs) {
  const std::size_t count = K_list.size();
  std::vector<std::optional<SweepRow>> slots(count);
  std::vector<RowStatus> status(count);

  auto solve_one = [&](std::size_t i, const std::optional<Profile>& warm) {
    SolverConfig cfg = base;
    cfg.K = K_list[i];
    if (warm) {
      cfg.seed = SeedKind::user_profile;
      cfg.user_seed = warm;
    }
    try {
      const WaveSolution sol = solve(cfg, fam);
      slots[i] = row_from_solution(sol, fam, high_energy);
      status[i] = status_from(*slots[i]);
      return std::optional<Profile>(sol.profile);
    } catch (const Error& e) {
      status[i].ok = false;
      status[i].error = e.what();
      return std::optional<Profile>();
    }
  };

  if (warm_start || jobs <= 1) {
    std::optional<Profile> prev;
    for (std::size_t i = 0; i < count; ++i) {
      auto out = solve_one(i, warm_start ? prev : std::optional<Profile>());
      if (out) prev = std::move(out);
    }
  } else {
    // Rows are independent; a simple striped pool keeps results in input order.
    const int workers = std::min<int>(jobs, static_cast<int>(count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers)
          solve_one(i, std::optional<Profile>());
      });
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.status = std::move(status);
  for (auto& slot : slots)
    if (slot) result.rows.push_back(std::move(*slot));
  return result;
}

}  // namespace

SweepResult sweep_k(const std::vector<double>& K_list, const PotentialFamily& fam,
                    const SolverConfig& cfg, bool warm_start, int jobs) {
  return run_sweep(K_list, fam, cfg, /*high_energy=*/false, warm_start, jobs);
}

SweepResult high_energy_sweep(const std::vector<double>& delta_list,
                              const PotentialFamily& fam, const SolverConfig& cfg,
                              int jobs) {
  std::vector<double> K_list;
  K_list.reserve(delta_list.size());
  for (double d : delta_list) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("high_energy_sweep: delta outside (0,1)");
    K_list.push_back((1.0 - d) * fam.k_max());
  }
  return run_sweep(K_list, fam, cfg, /*high_energy=*/true, /*warm_start=*/false, jobs);
}

std::vector<QStudyRow> q_testfunction_study(const std::vector<int>& L_list, double K,
                                            const PotentialFamily& fam, int q) {
  std::vector<QStudyRow> rows;
  rows.reserve(L_list.size());
  const double q_closed = q_of_k(fam, K).value();
  for (int L : L_list) {
    if (L < 1) throw ConfigError("q_testfunction_study: L must be positive");
    // Truncation 2L captures the dominant ranges; R = 2L contains the support
    // of A_m W_L for every m <= 2L.
    const int M = 2 * L;
    const Grid grid(q, 2.0 * L);
    const Profile WL = normalize_to(make_wl(K, L, grid), K);
    QStudyRow row;
    row.L = L;
    row.Qcal_WL = quadratic_energy(WL, fam, M).total;
    row.Q_of_K = q_closed;
    const double sqrtL = std::sqrt(static_cast<double>(L));
    const int top = static_cast<int>(std::floor(sqrtL));
    double lb = 0.0;
    for (int m = 1; m <= top; ++m) {
      if (!fam.interacts(m)) break;
      lb += phi_deriv(fam, m, fam.nu() * m, 2) * K * m * m;
    }
    row.lower_bound = lb * (1.0 - 0.5 / sqrtL);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lrwave
