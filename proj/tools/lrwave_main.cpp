// Command-line front end: binds the solver, experiments and lattice
// validation into reproducible runs driven by one JSON configuration file.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lrwave/config.hpp"
#include "lrwave/experiments.hpp"
#include "lrwave/io.hpp"
#include "lrwave/lattice.hpp"
#include "lrwave/operators.hpp"
#include "lrwave/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lrwave;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_override;
  int jobs = 1;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

fs::path prepare_output(const RunConfig& cfg, const Options& opt) {
  const fs::path dir =
      opt.output_override.empty() ? cfg.output_directory() : opt.output_override;
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const RunConfig& cfg, const json& rows,
                    const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["generated_at"] = timestamp();  // the single non-reproducible field
  m["config"] = cfg.tree;
  m["rows"] = rows;
  m["outputs"] = outputs;
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

int cmd_check(const RunConfig& cfg) {
  const PotentialFamily fam = cfg.potential();
  const SolverConfig solver_cfg = cfg.solver();
  const AdmissibilityReport rep = check_assumptions(fam, solver_cfg.K);
  std::cout << admissibility_to_json(rep).dump(2) << std::endl;
  return rep.passed ? 0 : 3;
}

int cmd_solve(const RunConfig& cfg, const Options& opt) {
  const fs::path dir = prepare_output(cfg, opt);
  const PotentialFamily fam = cfg.potential();
  const WaveSolution sol = solve(cfg.solver(), fam);

  std::vector<std::string> outputs;
  {
    std::ofstream out(dir / "solution.json");
    out << solution_to_json(sol, cfg.tree).dump(2) << '\n';
    outputs.push_back("solution.json");
  }
  write_profile_csv(dir / "profile.csv", sol.profile);
  outputs.push_back("profile.csv");
  write_breakdown_csv(dir / "breakdown.csv", potential_energy(sol.profile, fam, sol.M),
                      quadratic_energy(sol.profile, fam, sol.M), fam, sol.K);
  outputs.push_back("breakdown.csv");
  write_manifest(dir, "solve", cfg,
                 json::array({{{"K", sol.K}, {"status", "converged"},
                               {"iterations", sol.iterations}}}),
                 outputs);
  std::cout << "solved K=" << sol.K << ": c=" << sol.c << ", P=" << sol.P
            << ", residual_l2=" << sol.residual.l2 << ", iterations="
            << sol.iterations << std::endl;
  return 0;
}

json status_rows(const SweepResult& result, const std::vector<double>& ids,
                 const char* id_key) {
  json rows = json::array();
  for (std::size_t i = 0; i < result.status.size(); ++i) {
    json r;
    r[id_key] = ids[i];
    r["status"] = result.status[i].ok ? "converged" : "failed";
    if (!result.status[i].ok) r["error"] = result.status[i].error;
    if (result.status[i].ok) {
      r["speed_bound_ok"] = result.status[i].speed_bound_ok;
      r["margin_positive"] = result.status[i].margin_positive;
    }
    rows.push_back(r);
  }
  return rows;
}

int sweep_like(const RunConfig& cfg, const Options& opt, bool high_energy) {
  const fs::path dir = prepare_output(cfg, opt);
  const PotentialFamily fam = cfg.potential();
  const SolverConfig base = cfg.solver();

  SweepResult result;
  std::vector<double> ids;
  std::string csv_name;
  if (high_energy) {
    ids = cfg.delta_list();
    if (ids.empty()) throw ConfigError("config: sweep.delta_list required for highenergy");
    result = high_energy_sweep(ids, fam, base, opt.jobs);
    csv_name = "highenergy.csv";
  } else {
    ids = cfg.k_list();
    if (ids.empty()) throw ConfigError("config: sweep.K_list required for sweep");
    result = sweep_k(ids, fam, base, /*warm_start=*/false, opt.jobs);
    csv_name = "sweep.csv";
  }
  write_sweep_csv(dir / csv_name, result.rows);
  write_manifest(dir, high_energy ? "highenergy" : "sweep", cfg,
                 status_rows(result, ids, high_energy ? "delta" : "K"), {csv_name});

  bool all_ok = true;
  for (const RowStatus& st : result.status) all_ok = all_ok && st.ok;
  std::cout << csv_name << ": " << result.rows.size() << "/" << ids.size()
            << " rows converged" << std::endl;
  return all_ok ? 0 : 4;
}

int cmd_simulate(const RunConfig& cfg, const Options& opt) {
  const fs::path dir = prepare_output(cfg, opt);
  const PotentialFamily fam = cfg.potential();
  const WaveSolution sol = solve(cfg.solver(), fam);
  const RunConfig::Simulate sim = cfg.simulate();

  LatticeState st = init_from_wave(sol, fam, sim.N, sim.M_sim);
  const fs::path traj = dir / "trajectory.csv";
  append_trajectory_header(traj);
  append_trajectory_snapshot(traj, st);
  RunObserver obs;
  obs.stride = sim.snapshot_stride;
  obs.callback = [&](long, const LatticeState& s) { append_trajectory_snapshot(traj, s); };

  PropagationReport rep =
      run(st, sim.dt, sim.T_end, sim.snapshot_stride > 0 ? &obs : nullptr);
  rep.c_predicted = sol.c;
  append_trajectory_snapshot(traj, st);

  {
    std::ofstream out(dir / "report.json");
    out << report_to_json(rep).dump(2) << '\n';
  }
  write_manifest(dir, "simulate", cfg,
                 json::array({{{"status", "done"},
                               {"c_measured", rep.c_measured},
                               {"ordering_ok", rep.ordering_ok}}}),
                 {"report.json", "trajectory.csv"});
  std::cout << "simulated " << rep.steps << " steps: c_measured=" << rep.c_measured
            << " (predicted " << rep.c_predicted << "), shape_error="
            << rep.shape_error << ", energy_drift=" << rep.energy_drift << std::endl;
  if (!rep.ordering_ok) throw SimulationError("particle ordering violated");
  return 0;
}

int cmd_qstudy(const RunConfig& cfg, const Options& opt) {
  const fs::path dir = prepare_output(cfg, opt);
  const PotentialFamily fam = cfg.potential();
  const std::vector<int> L_list = cfg.l_list();
  if (L_list.empty()) throw ConfigError("config: sweep.L_list required for qstudy");
  const SolverConfig base = cfg.solver();
  const auto rows = q_testfunction_study(L_list, base.K, fam, base.q);
  write_qstudy_csv(dir / "qstudy.csv", rows);
  json stat = json::array();
  for (const auto& r : rows)
    stat.push_back({{"L", r.L},
                    {"status", "done"},
                    {"sandwich_ok", r.lower_bound <= r.Qcal_WL && r.Qcal_WL <= r.Q_of_K}});
  write_manifest(dir, "qstudy", cfg, stat, {"qstudy.csv"});
  std::cout << "qstudy: " << rows.size() << " rows" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solitary traveling waves of long-range repulsive lattices"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config,-c", opt.config_path, "JSON configuration file")
      ->required();
  app.add_option("--set,-s", opt.overrides,
                 "override a config leaf via a dotted path, e.g. solver.K=0.25");
  app.add_option("--output,-o", opt.output_override, "output directory override");
  app.add_option("--jobs,-j", opt.jobs, "worker pool size for sweep rows");

  auto* check = app.add_subcommand("check", "admissibility gate for the configured family");
  auto* solve_cmd = app.add_subcommand("solve", "compute one traveling wave");
  auto* sweep_cmd = app.add_subcommand("sweep", "solve each K in sweep.K_list");
  auto* sim_cmd = app.add_subcommand("simulate", "solve, then validate by lattice integration");
  auto* he_cmd = app.add_subcommand("highenergy", "delta sweep toward the high-energy limit");
  auto* qs_cmd = app.add_subcommand("qstudy", "quadratic-energy test-function study");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load_config(opt.config_path, opt.overrides);
    if (app.got_subcommand(check)) return cmd_check(cfg);
    if (app.got_subcommand(solve_cmd)) return cmd_solve(cfg, opt);
    if (app.got_subcommand(sweep_cmd)) return sweep_like(cfg, opt, false);
    if (app.got_subcommand(he_cmd)) return sweep_like(cfg, opt, true);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(cfg, opt);
    if (app.got_subcommand(qs_cmd)) return cmd_qstudy(cfg, opt);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const AdmissibilityError& e) {
    std::cerr << "admissibility failure: " << e.what() << std::endl;
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << std::endl;
    return 4;
  } catch (const SimulationError& e) {
    std::cerr << "simulation failure: " << e.what() << std::endl;
    return 5;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
