#pragma once

#include <nlohmann/json.hpp>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrwave/potentials.hpp"
#include "lrwave/solver.hpp"

namespace lrwave {

// One structured configuration file per run; any leaf can be overridden on
// the command line through dotted paths ("solver.K=0.25"). The fully resolved
// tree is embedded in the manifest so a run can be reproduced from it.
struct RunConfig {
  nlohmann::json tree;

  PotentialFamily potential() const;
  SolverConfig solver() const;  // resolves K from solver.K or solver.delta

  struct Simulate {
    int N = 256;
    double dt = 1e-3;
    double T_end = 10.0;
    int M_sim = 0;  // 0: min(solver truncation, 64)
    long snapshot_stride = 0;
  };
  Simulate simulate() const;

  std::vector<double> k_list() const;
  std::vector<double> delta_list() const;
  std::vector<int> l_list() const;

  std::string output_directory() const;
  std::vector<std::string> output_formats() const;
};

RunConfig load_config(const std::filesystem::path& file,
                      const std::vector<std::string>& overrides);
RunConfig config_from_json(nlohmann::json tree,
                           const std::vector<std::string>& overrides = {});

}  // namespace lrwave
