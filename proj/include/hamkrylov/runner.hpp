#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamkrylov/problems.hpp"
#include "hamkrylov/projection.hpp"

namespace hamkrylov {

struct DiagnosticsConfig {
    bool energy = true;
    std::vector<std::size_t> integrals;
    bool global_error = false;
};

/// One experiment. `methods` may contain "Reference" besides the projection methods.
struct ExperimentConfig {
    ProblemSpec problem;
    std::vector<std::string> methods;
    std::size_t krylov_dim = 4;
    double horizon = 2.0;
    double h = 0.004;
    std::optional<double> restart;
    DiagnosticsConfig diagnostics;
    bool block_j_stabilized = true;
    std::filesystem::path output_dir = "hk_output";
    /// Krylov dimensions for the convergence study; unset for a plain run.
    std::optional<std::vector<std::size_t>> sweep;

    Schedule schedule() const { return {h, horizon, restart}; }
};

/// State dimension 2m implied by a problem spec, without generating it.
std::size_t problem_dimension(const ProblemSpec& spec);

/// Parses and validates a JSON document; unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct MethodOutcome {
    std::string method;
    std::optional<std::filesystem::path> csv;
    std::optional<std::string> error;
    double max_abs_energy_error = 0.0;
    std::optional<double> final_global_error;
    std::size_t projections = 0;
    std::size_t krylov_early_stops = 0;
    std::size_t reduced_dim = 0;
    double max_projection_defect = 0.0;
    bool integral_preservation_claimed = false;
    double seconds = 0.0;
};

struct RunReport {
    std::vector<MethodOutcome> outcomes;
    std::filesystem::path summary;
    std::optional<std::filesystem::path> convergence_csv;
    bool any_failure() const;
};

/// Runs every configured method, one CSV each plus summary.json. A `sweep`
/// block dispatches to the convergence study.
RunReport run(const ExperimentConfig& config);

struct ConvergenceRow {
    std::string method;
    std::size_t krylov_dim = 0;
    std::optional<double> final_global_error;
    std::optional<std::string> error;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    /// Per method, in order of first appearance.
    std::vector<std::pair<std::string, bool>> monotone;
    std::filesystem::path csv;
    bool any_failure() const;
};

/// e_{j+1} <= max(e_j, factor * plateau) for successive Krylov dimensions, where
/// plateau = min_j e_j clamped to [floor, ceiling] is the round-off level the sweep
/// settles at. The ceiling keeps a sweep that never converges from counting as noise.
bool is_monotone_within_noise(const std::vector<double>& errors, double factor = 10.0, double floor = 1e-14,
                              double ceiling = 1e-12);

/// Final-time global error for each (method, 2n) in the sweep; writes convergence.csv.
ConvergenceResult convergence_study(const ExperimentConfig& config);

struct InvariantReport {
    /// Deterministic JSON document (sorted keys, no timings).
    std::string json;
    bool all_pass = false;
};

/// Property checks at desk-scale sizes. The negative control feeds an
/// asymmetric H to the construction invariant.
InvariantReport invariant_suite(std::uint64_t seed, bool negative_control = false);

/// Writes H.mtx, y0.mtx, structure.mtx (Poisson form only) and problem.json.
std::vector<std::filesystem::path> dump_problem(const ExperimentConfig& config);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

} // namespace hamkrylov
