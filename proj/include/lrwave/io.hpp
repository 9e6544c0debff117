#pragma once

#include <nlohmann/json_fwd.hpp>
#include <filesystem>
#include <string>
#include <vector>

#include "lrwave/experiments.hpp"
#include "lrwave/lattice.hpp"
#include "lrwave/operators.hpp"
#include "lrwave/solver.hpp"

namespace lrwave {

// JSON schema {h, R, values:[...]}.
nlohmann::json profile_to_json(const Profile& W);
Profile profile_from_json(const nlohmann::json& j);
Profile load_profile(const std::filesystem::path& file);

// Solution schema {config, c, K, P, Q_of_K, residual_l2, residual_linf, eps1,
// iterations, tail_bound, monotone_certificate, M, profile}.
nlohmann::json solution_to_json(const WaveSolution& sol, const nlohmann::json& config);

nlohmann::json report_to_json(const PropagationReport& rep);
nlohmann::json admissibility_to_json(const AdmissibilityReport& rep);

// CSV writers; every file starts with its column schema. Numbers are printed
// with %.17g so reruns are byte-identical.
void write_profile_csv(const std::filesystem::path& file, const Profile& W);
void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepRow>& rows);
void write_qstudy_csv(const std::filesystem::path& file, const std::vector<QStudyRow>& rows);
void write_breakdown_csv(const std::filesystem::path& file, const EnergyBreakdown& P,
                         const EnergyBreakdown& Q, const PotentialFamily& fam, double K);
void append_trajectory_header(const std::filesystem::path& file);
void append_trajectory_snapshot(const std::filesystem::path& file, const LatticeState& st);

std::string format_double(double v);

}  // namespace lrwave
