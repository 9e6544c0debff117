#include "lrwave/solver.hpp"

#include <cmath>
#include <random>
#include <string>

#include "lrwave/pwlinear.hpp"

namespace lrwave {

namespace {

double resolved_guard(const SolverConfig& cfg, const PotentialFamily& fam) {
  return cfg.guard >= 0.0 ? cfg.guard : 1e-10 * fam.nu();
}

Profile build_seed(const SolverConfig& cfg, const PotentialFamily& fam) {
  const Grid grid = cfg.grid();
  Profile seed = [&]() -> Profile {
    switch (cfg.seed) {
      case SeedKind::gaussian:
        return make_gaussian_seed(cfg.K, cfg.seed_width, grid);
      case SeedKind::indicator_wl:
        return normalize_to(make_wl(cfg.K, cfg.seed_L, grid), cfg.K);
      case SeedKind::user_profile:
        if (!cfg.user_seed) throw ConfigError("solver: user_profile seed not supplied");
        if (!(cfg.user_seed->grid() == grid))
          throw ConfigError("solver: user seed grid does not match the run grid");
        return normalize_to(*cfg.user_seed, cfg.K);
    }
    throw ConfigError("solver: unknown seed kind");
  }();
  if (!cfg.perturb_seed) return seed;
  // Deterministic seeded perturbation, re-projected onto the cone.
  std::mt19937_64 rng(*cfg.perturb_seed);
  std::uniform_real_distribution<double> dist(0.0, 0.05 * seed.max());
  Eigen::ArrayXd v = seed.values();
  for (long i = 0; i < v.size(); ++i) v[i] += dist(rng);
  return normalize_to(project_to_cone(grid, v), cfg.K);
}

// Cone deviations of a raw field, relative to its peak.
void cone_deviations(const Grid& g, const Eigen::ArrayXd& v, IterateTrace& trace) {
  const long n = g.n();
  const double scale = std::max(v.abs().maxCoeff(), 1e-300);
  double asym = 0.0, neg = 0.0, nonuni = 0.0;
  for (long i = 0, j = n - 1; i < j; ++i, --j) asym = std::max(asym, std::abs(v[i] - v[j]));
  for (long i = 0; i < n; ++i) neg = std::max(neg, -v[i]);
  for (long i = g.center(); i + 1 < n; ++i) nonuni = std::max(nonuni, v[i + 1] - v[i]);
  trace.max_asymmetry = std::max(trace.max_asymmetry, asym / scale);
  trace.max_negativity = std::max(trace.max_negativity, neg / scale);
  trace.max_nonunimodality = std::max(trace.max_nonunimodality, nonuni / scale);
}

}  // namespace

Profile improve_step(const Profile& W, const PotentialFamily& fam, int M) {
  const double K = kinetic_energy(W);
  const double guard = 1e-10 * fam.nu();
  EnergyGradient eg = energy_and_gradient(W, fam, M, guard);
  const double norm_g = l2_norm(Field{W.grid(), eg.grad});
  if (norm_g == 0.0) throw DomainError("improve_step: zero gradient");
  const double scale = std::sqrt(2.0 * K) / norm_g;  // = mu(W)
  return normalize_to(project_to_cone(W.grid(), scale * eg.grad), K);
}

WaveSolution solve(const SolverConfig& cfg, const PotentialFamily& fam) {
  if (!(cfg.K > 0.0) || cfg.K >= fam.k_max())
    throw AdmissibilityError("solver: K outside (0, nu^2/2)");
  const AdmissibilityReport gate = check_assumptions(fam, cfg.K);
  if (!gate.passed) {
    std::string what = "solver: admissibility gate failed:";
    for (const auto& f : gate.failures) what += " " + f;
    throw AdmissibilityError(what);
  }

  const TruncationPlan plan =
      truncation_plan(fam, cfg.K, cfg.tol_tail, cfg.max_truncation);
  const int M = plan.M;
  const double guard = resolved_guard(cfg, fam);
  const Grid grid = cfg.grid();
  const double norm_target = std::sqrt(2.0 * cfg.K);

  Profile W = build_seed(cfg, fam);
  IterateTrace trace;
  trace.P.reserve(256);

  StagnationDetector stagnation;
  long iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    EnergyGradient eg = energy_and_gradient(W, fam, M, guard);
    trace.max_am_excess = std::max(trace.max_am_excess, eg.max_am_ratio - 1.0);
    trace.max_energy_dev =
        std::max(trace.max_energy_dev, std::abs(kinetic_energy(W) / cfg.K - 1.0));
    const double P_prev = trace.P.empty() ? 0.0 : trace.P.back();
    if (!trace.P.empty())
      trace.min_dP_rel = std::min(trace.min_dP_rel, (eg.P - P_prev) / eg.P);
    trace.P.push_back(eg.P);

    const double norm_g = l2_norm(Field{grid, eg.grad});
    if (norm_g == 0.0) throw ConvergenceError("solver: zero gradient");
    cone_deviations(grid, eg.grad, trace);

    Profile next = normalize_to(
        project_to_cone(grid, (norm_target / norm_g) * eg.grad), cfg.K);
    const double update = l2_distance(next, W) / norm_target;
    W = std::move(next);
    if (update <= cfg.tol_fp) {
      trace.final_update = update;
      ++iter;
      break;
    }
    if (!trace.P.empty() && iter > 0 &&
        stagnation.step(P_prev, trace.P.back(), false))
      throw ConvergenceError(
          "solver: stagnation, P stalled for 100 steps at update " +
          std::to_string(update) + " (tol_fp " + std::to_string(cfg.tol_fp) + ")");
    if (iter + 1 == cfg.max_iter)
      throw ConvergenceError("solver: iteration cap reached at update " +
                             std::to_string(update));
  }

  // Final diagnostics on the converged iterate.
  EnergyGradient eg = energy_and_gradient(W, fam, M, guard);
  trace.P.push_back(eg.P);
  trace.min_dP_rel = std::min(
      trace.min_dP_rel,
      (trace.P.end()[-1] - trace.P.end()[-2]) / trace.P.back());
  const double norm_g = l2_norm(Field{grid, eg.grad});
  if (norm_g == 0.0) throw ConvergenceError("solver: zero gradient at solution");
  const double mu_val = std::sqrt(2.0 * kinetic_energy(W)) / norm_g;

  WaveSolution sol{W};
  sol.c = 1.0 / std::sqrt(mu_val);
  sol.K = cfg.K;
  sol.P = eg.P;
  sol.Q_of_K = q_of_k(fam, cfg.K).value();
  sol.residual = wave_residual(W, sol.c, fam, M);
  sol.iterations = iter;
  sol.eps1 = eg.eps1;
  sol.tail_bound = plan.tail_abs;
  sol.monotone_certificate = trace.min_dP_rel >= -1e-12;
  sol.M = M;
  sol.trace = std::move(trace);
  return sol;
}

double wave_speed(const Profile& W, const PotentialFamily& fam, int M) {
  return 1.0 / std::sqrt(mu(W, fam, M));
}

}  // namespace lrwave
