#include "lrwave/config.hpp"

#include <fstream>

#include "lrwave/io.hpp"

namespace lrwave {

using nlohmann::json;

namespace {

const json* find(const json& tree, const std::string& a) {
  auto it = tree.find(a);
  return it == tree.end() ? nullptr : &*it;
}

const json* find(const json& tree, const std::string& a, const std::string& b) {
  const json* sec = find(tree, a);
  return sec && sec->is_object() ? find(*sec, b) : nullptr;
}

template <typename T>
T get_or(const json& tree, const std::string& sec, const std::string& key, T fallback) {
  const json* leaf = find(tree, sec, key);
  if (!leaf) return fallback;
  try {
    return leaf->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for " + sec + "." + key + ": " + e.what());
  }
}

template <typename T>
T require(const json& tree, const std::string& sec, const std::string& key) {
  const json* leaf = find(tree, sec, key);
  if (!leaf) throw ConfigError("config: missing required key " + sec + "." + key);
  try {
    return leaf->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for " + sec + "." + key + ": " + e.what());
  }
}

// Apply "dotted.path=value" onto the tree; the value is parsed as JSON when
// possible and falls back to a raw string.
void apply_override(json& tree, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("config: override must look like section.key=value: " + expr);
  const std::string path = expr.substr(0, eq);
  const std::string raw = expr.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }
  json* node = &tree;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (key.empty()) throw ConfigError("config: empty key in override path " + expr);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null())
      throw ConfigError("config: override path crosses a leaf: " + expr);
    pos = dot + 1;
  }
}

}  // namespace

PotentialFamily RunConfig::potential() const {
  const std::string kind = require<std::string>(tree, "potential", "kind");
  const double nu = get_or<double>(tree, "potential", "nu", 1.0);
  if (kind == "power_law")
    return PotentialFamily::power_law(require<double>(tree, "potential", "alpha"), nu);
  if (kind == "finite_range_power_law")
    return PotentialFamily::finite_range(require<double>(tree, "potential", "alpha"),
                                         nu, require<int>(tree, "potential", "m0"));
  throw ConfigError("config: unknown potential.kind '" + kind +
                    "' (custom families are library-only)");
}

SolverConfig RunConfig::solver() const {
  SolverConfig cfg;
  cfg.q = get_or<int>(tree, "grid", "q", 16);
  cfg.R = get_or<double>(tree, "grid", "R", 60.0);

  const json* k_leaf = find(tree, "solver", "K");
  const json* d_leaf = find(tree, "solver", "delta");
  if (k_leaf && d_leaf)
    throw ConfigError("config: give exactly one of solver.K and solver.delta");
  if (k_leaf) {
    cfg.K = k_leaf->get<double>();
  } else if (d_leaf) {
    const double delta = d_leaf->get<double>();
    const double nu = get_or<double>(tree, "potential", "nu", 1.0);
    cfg.K = (1.0 - delta) * 0.5 * nu * nu;
  }
  cfg.tol_fp = get_or<double>(tree, "solver", "tol_fp", 1e-10);
  cfg.tol_tail = get_or<double>(tree, "solver", "tol_tail", 1e-12);
  cfg.max_iter = get_or<long>(tree, "solver", "max_iter", 100000);
  cfg.guard = get_or<double>(tree, "solver", "guard", -1.0);
  cfg.max_truncation = get_or<int>(tree, "solver", "max_truncation", 2000);
  cfg.seed_width = get_or<double>(tree, "solver", "seed_width", 2.0);
  cfg.seed_L = get_or<int>(tree, "solver", "seed_L", 4);
  if (const json* ps = find(tree, "solver", "perturb_seed"))
    cfg.perturb_seed = ps->get<std::uint64_t>();

  const std::string seed = get_or<std::string>(tree, "solver", "seed", "gaussian");
  if (seed == "gaussian") {
    cfg.seed = SeedKind::gaussian;
  } else if (seed == "indicator_wl") {
    cfg.seed = SeedKind::indicator_wl;
  } else if (seed == "user_profile") {
    cfg.seed = SeedKind::user_profile;
    cfg.user_seed =
        load_profile(require<std::string>(tree, "solver", "seed_profile"));
  } else {
    throw ConfigError("config: unknown solver.seed '" + seed + "'");
  }
  return cfg;
}

RunConfig::Simulate RunConfig::simulate() const {
  Simulate s;
  s.N = get_or<int>(tree, "simulate", "N", 256);
  s.dt = get_or<double>(tree, "simulate", "dt", 1e-3);
  s.T_end = get_or<double>(tree, "simulate", "T_end", 10.0);
  s.M_sim = get_or<int>(tree, "simulate", "M_sim", 0);
  s.snapshot_stride = get_or<long>(tree, "simulate", "snapshot_stride", 0);
  return s;
}

std::vector<double> RunConfig::k_list() const {
  return get_or<std::vector<double>>(tree, "sweep", "K_list", {});
}
std::vector<double> RunConfig::delta_list() const {
  return get_or<std::vector<double>>(tree, "sweep", "delta_list", {});
}
std::vector<int> RunConfig::l_list() const {
  return get_or<std::vector<int>>(tree, "sweep", "L_list", {});
}

std::string RunConfig::output_directory() const {
  return get_or<std::string>(tree, "output", "directory", "out");
}
std::vector<std::string> RunConfig::output_formats() const {
  return get_or<std::vector<std::string>>(tree, "output", "formats", {"json", "csv"});
}

RunConfig config_from_json(json tree, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) apply_override(tree, o);
  return RunConfig{std::move(tree)};
}

RunConfig load_config(const std::filesystem::path& file,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  json tree;
  try {
    tree = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: parse error in " + file.string() + ": " + e.what());
  }
  return config_from_json(std::move(tree), overrides);
}

}  // namespace lrwave
