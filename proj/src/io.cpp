#include "lrwave/io.hpp"

#include <nlohmann/json.hpp>
#include <cstdio>
#include <fstream>

#include "lrwave/pwlinear.hpp"

namespace lrwave {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json profile_to_json(const Profile& W) {
  json j;
  j["h"] = W.grid().h();
  j["R"] = W.grid().R();
  j["values"] = std::vector<double>(W.values().data(),
                                    W.values().data() + W.values().size());
  return j;
}

Profile profile_from_json(const json& j) {
  const double h = j.at("h").get<double>();
  const double R = j.at("R").get<double>();
  const int q = static_cast<int>(std::llround(1.0 / h));
  if (!(h > 0) || std::abs(1.0 / h - q) > 1e-9)
    throw ConfigError("profile: h must be 1/q for an even integer q");
  const auto vals = j.at("values").get<std::vector<double>>();
  Eigen::ArrayXd v = Eigen::Map<const Eigen::ArrayXd>(vals.data(), vals.size());
  return Profile(Grid(q, R), std::move(v));
}

Profile load_profile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open profile file " + file.string());
  json j;
  in >> j;
  return profile_from_json(j);
}

json solution_to_json(const WaveSolution& sol, const json& config) {
  json j;
  j["config"] = config;
  j["c"] = sol.c;
  j["K"] = sol.K;
  j["P"] = sol.P;
  j["Q_of_K"] = sol.Q_of_K;
  j["residual_l2"] = sol.residual.l2;
  j["residual_linf"] = sol.residual.linf;
  j["eps1"] = sol.eps1;
  j["iterations"] = sol.iterations;
  j["tail_bound"] = sol.tail_bound;
  j["monotone_certificate"] = sol.monotone_certificate;
  j["M"] = sol.M;
  j["boundary_value"] = sol.profile.boundary_value();
  j["profile"] = profile_to_json(sol.profile);
  return j;
}

json report_to_json(const PropagationReport& rep) {
  json j;
  j["c_measured"] = rep.c_defined ? json(rep.c_measured) : json();
  j["c_defined"] = rep.c_defined;
  j["c_predicted"] = rep.c_predicted;
  j["shape_error"] = rep.shape_error;
  j["energy_drift"] = rep.energy_drift;
  j["ordering_ok"] = rep.ordering_ok;
  j["min_gap"] = rep.min_gap;
  j["steps"] = rep.steps;
  return j;
}

json admissibility_to_json(const AdmissibilityReport& rep) {
  json j;
  j["passed"] = rep.passed;
  j["k_max"] = rep.k_max;
  j["gamma_window"] =
      rep.gamma_window.empty()
          ? json()
          : json{{"lo", rep.gamma_window.lo}, {"hi", rep.gamma_window.hi}};
  j["gamma_ref"] = rep.gamma_ref;
  j["failures"] = rep.failures;
  json series = json::array();
  for (int s = 0; s < 4; ++s) {
    const SeriesEnclosure& e = rep.series_values[s];
    series.push_back({{"name", kSeriesNames[s]},
                      {"finite", rep.series_finite[s]},
                      {"partial", e.partial},
                      {"tail_lo", e.tail_lo},
                      {"tail_hi", e.tail_hi},
                      {"terms", e.terms}});
  }
  j["series_values"] = series;
  return j;
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  return out;
}

}  // namespace

void write_profile_csv(const std::filesystem::path& file, const Profile& W) {
  auto out = open_out(file);
  out << "xi,W,X\n";
  const Eigen::ArrayXd X = reconstruct_x(W);
  for (long i = 0; i < W.grid().n(); ++i)
    out << format_double(W.grid().node(i)) << ',' << format_double(W.values()[i])
        << ',' << format_double(X[i]) << '\n';
}

void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepRow>& rows) {
  auto out = open_out(file);
  out << "K,delta,c,P,Q_of_K,P_minus_Q_margin,eps1,l2_dist_to_W0,identity_residual,iterations\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.K) << ',' << format_double(r.delta) << ','
        << format_double(r.c) << ',' << format_double(r.P) << ','
        << format_double(r.Q_of_K) << ',' << format_double(r.P_minus_Q_margin)
        << ',' << format_double(r.eps1) << ',' << format_double(r.l2_dist_to_W0)
        << ',' << (r.identity_residual ? format_double(*r.identity_residual) : "")
        << ',' << r.iterations << '\n';
  }
}

void write_qstudy_csv(const std::filesystem::path& file, const std::vector<QStudyRow>& rows) {
  auto out = open_out(file);
  out << "L,Qcal_WL,lower_bound,Q_of_K\n";
  for (const QStudyRow& r : rows)
    out << r.L << ',' << format_double(r.Qcal_WL) << ','
        << format_double(r.lower_bound) << ',' << format_double(r.Q_of_K) << '\n';
}

void write_breakdown_csv(const std::filesystem::path& file, const EnergyBreakdown& P,
                         const EnergyBreakdown& Q, const PotentialFamily& fam,
                         double K) {
  auto out = open_out(file);
  out << "m,P_m,Q_m,bound_2Km2C\n";
  const int M = std::min(P.M, Q.M);
  for (int m = 1; m <= M; ++m) {
    double bound = 0.0;
    if (fam.interacts(m)) {
      const double shifted = fam.nu() * m - std::sqrt(2.0 * K * m);
      bound = K * static_cast<double>(m) * m * phi_deriv(fam, m, shifted, 2);
    }
    out << m << ',' << format_double(P.per_m[m - 1]) << ','
        << format_double(Q.per_m[m - 1]) << ',' << format_double(bound) << '\n';
  }
}

void append_trajectory_header(const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "t,j,x,v,strain\n";
}

void append_trajectory_snapshot(const std::filesystem::path& file, const LatticeState& st) {
  std::ofstream out(file, std::ios::app);
  if (!out) throw ConfigError("cannot write " + file.string());
  const Eigen::ArrayXd r = strain_field(st);
  for (long i = 0; i < st.size(); ++i) {
    const long j = i - st.N;
    out << format_double(st.t) << ',' << j << ',' << format_double(st.x[i]) << ','
        << format_double(st.v[i]) << ','
        << (i + 1 < st.size() ? format_double(r[i]) : "") << '\n';
  }
}

}  // namespace lrwave
