#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "spdelab/config.hpp"

namespace spdelab {

// Command-line overrides applied on top of a parsed config.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    unsigned workers = 1;
    bool deterministic = false;  // pins workers to 1; outputs are byte-stable anyway
    bool allow_unstable = false;
};

RunConfig apply_overrides(RunConfig config, const RunOverrides& overrides);

// Simulates one ensemble of the configured SPDE and writes summary.csv (one row per
// path: terminal-slice functionals) plus optional thinned field CSVs. Returns the
// summary path.
std::filesystem::path run_simulate(const RunConfig& config, const RunOverrides& overrides);

// The reweighting experiment: heat ensemble (d excluded) with Girsanov records per
// localization level, independent direct ensemble (d included), and the per-level
// comparison report (weight normalization vs direct survival, reweighted vs direct
// functional estimates, ESS, weighted KS). Writes transfer_heat.csv,
// transfer_direct.csv, transfer_report.json; returns the report.
nlohmann::json run_transfer_check(const RunConfig& config, const RunOverrides& overrides);

// Support measurement across the configured gamma list with seed-paired ensembles:
// per-gamma support CSVs and a report with medians, containment rates, boundary
// warnings, integrability quantiles, and the paired sign-test table across gamma
// pairs. Writes support_gamma_*.csv and support_report.json; returns the report.
nlohmann::json run_support_scan(const RunConfig& config, const RunOverrides& overrides);

// Compares one numeric column of two stored summary CSVs (unit-weight two-sample KS
// plus means and standard errors). Pure reader: no config needed.
nlohmann::json compare_summaries(const std::filesystem::path& a, const std::filesystem::path& b,
                                 const std::string& column, std::size_t n_permutations,
                                 std::uint64_t seed);

}  // namespace spdelab
