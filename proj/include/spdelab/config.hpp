#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "spdelab/coefficients.hpp"
#include "spdelab/grid.hpp"
#include "spdelab/initial_data.hpp"
#include "spdelab/solver.hpp"

namespace spdelab {

// A full experiment description, parsed from the flat key=value-with-sections config
// format. Field names follow the "section.key" paths used in validation errors.
struct RunConfig {
    // [grid]
    double t_end = 0.0;
    double x_left = 0.0;
    double x_right = 0.0;
    std::size_t n_t = 0;
    std::size_t n_x = 0;
    std::string domain_kind = "truncated-line";  // or "rectangle"

    // [coefficients]
    std::string preset = "";  // heat-power | allen-cahn | kpp | deterministic-heat
    double C = 1.0;
    double gamma = 0.5;

    // [initial]
    std::string initial = "";  // constant | gaussian | bump | plateau
    double height = 0.0;       // constant, plateau
    double center = 0.0;       // gaussian, bump
    double sigma = 0.0;        // gaussian
    double amplitude = 0.0;    // gaussian, bump
    double radius = 0.0;       // bump
    double left = 0.0;         // plateau
    double right = 0.0;        // plateau
    double ramp = 0.0;         // plateau

    // [run]
    std::string boundary = "neumann";  // neumann | dirichlet
    std::size_t ensemble_size = 1;
    std::vector<double> schedule;      // localization levels; default {1,2,4,8,16}
    double epsilon_factor = 1e-6;      // epsilon = factor * max|h| over the grid
    std::uint64_t base_seed = 0;
    std::string output_dir = ".";
    std::size_t thin_every = 0;        // 0: pick so ~100 slices are kept
    bool save_fields = false;
    std::string scheme = "euler";      // euler | exact (support scans)
    std::vector<double> gamma_list;    // support-scan gamma sweep
    std::string functional = "midpoint-tanh";  // midpoint-tanh | midpoint | mass
    double containment_left = 0.0;     // support containment interval; defaults to
    double containment_right = 0.0;    // the middle half of the domain when both 0
};

// Which subcommand the config is being validated for; requirements differ (e.g.
// schedule for transfer-check, gamma_list and compact support for support-scan).
enum class RunMode { simulate, transfer_check, support_scan };

// Strict parse: unknown sections or keys, duplicate keys, and malformed values are
// rejected with the line number and the "section.key" path. Comments (#, ;) and blank
// lines are ignored.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::filesystem::path& path);

// Cross-field validation against every module's preconditions; throws
// std::invalid_argument naming the offending "section.key". Returns the named pieces
// ready to run.
void validate_config(const RunConfig& config, RunMode mode);

// Assembled pieces of a validated config.
SpaceTimeGrid config_grid(const RunConfig& config);
CoefficientSpec config_coefficients(const RunConfig& config);
CoefficientSpec config_coefficients_gamma(const RunConfig& config, double gamma);
InitialData config_initial_data(const RunConfig& config);
Boundary config_boundary(const RunConfig& config);

// Max |h| over the grid's cell centers (the reference scale for epsilon).
double max_abs_initial(const RunConfig& config);

// Canonical "section.key=value" lines, sorted, with round-trip float formatting;
// equal configs produce equal text. output_dir is excluded: it locates the outputs
// but is no part of the experiment, and reruns into fresh directories must hash
// identically.
std::string canonical_text(const RunConfig& config);

// FNV-1a 64-bit digest of the canonical text, as a 16-hex-digit string.
std::string config_hash(const RunConfig& config);

// FNV-1a 64-bit over raw bytes (exposed for tests against published vectors).
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace spdelab
