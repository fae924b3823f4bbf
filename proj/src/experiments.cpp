#include "spdelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spdelab/csv.hpp"
#include "spdelab/diagnostics.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/parallel.hpp"
#include "spdelab/rng.hpp"
#include "spdelab/stats.hpp"
#include "spdelab/summation.hpp"
#include "spdelab/transfer.hpp"

namespace spdelab {

namespace {

constexpr std::size_t kKsPermutations = 500;

unsigned effective_workers(const RunOverrides& overrides) {
    if (overrides.deterministic) return 1;
    return overrides.workers == 0 ? 1u : overrides.workers;
}

SolveOptions base_options(const RunConfig& config, const RunOverrides& overrides) {
    SolveOptions options;
    options.allow_unstable = overrides.allow_unstable;
    options.scheme = config.scheme == "exact" ? StepScheme::split_step_exact
                                              : StepScheme::euler_maruyama;
    return options;
}

double terminal_functional(const RunConfig& config, const FieldPath& path) {
    const auto terminal = path.terminal_slice();
    const std::size_t mid = path.grid.n_x / 2;
    if (config.functional == "midpoint") return terminal[mid];
    if (config.functional == "mass") {
        KahanSum mass;
        for (const double u : terminal) mass.add(u * path.grid.dx);
        return mass.value();
    }
    return std::tanh(terminal[mid]);  // midpoint-tanh
}

std::vector<std::string> output_comments(const RunConfig& config) {
    return {"config_hash=" + config_hash(config),
            "base_seed=" + format_seed(config.base_seed)};
}

std::filesystem::path ensure_output_dir(const RunConfig& config) {
    std::filesystem::path dir(config.output_dir);
    if (!dir.empty()) std::filesystem::create_directories(dir);
    return dir;
}

std::size_t thin_stride(const RunConfig& config, std::size_t n_t) {
    if (config.thin_every > 0) return config.thin_every;
    return std::max<std::size_t>(1, n_t / 100);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

// Population-variance standard error, matching the reweighted estimator's convention.
MeanSe mean_se(std::span<const double> xs) {
    if (xs.empty()) return {};
    KahanSum sum;
    KahanSum sum_sq;
    for (const double x : xs) {
        sum.add(x);
        sum_sq.add(x * x);
    }
    const auto n = static_cast<double>(xs.size());
    const double mean = sum.value() / n;
    const double var = std::max(sum_sq.value() / n - mean * mean, 0.0);
    return {mean, xs.size() > 1 ? std::sqrt(var / n) : 0.0};
}

double binomial_se(double p, std::size_t n) {
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double safe_z(double delta, double se) {
    if (se > 0.0) return delta / se;
    return delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

nlohmann::json quantile_summary(std::vector<double> values) {
    WeightedSample sample;
    sample.values = std::move(values);
    sample.weights.assign(sample.values.size(), 1.0);
    const double p99 = weighted_quantile(sample, 0.99);
    const double top = *std::max_element(sample.values.begin(), sample.values.end());
    nlohmann::json out;
    out["median"] = weighted_quantile(sample, 0.5);
    out["p90"] = weighted_quantile(sample, 0.9);
    out["p99"] = p99;
    out["max"] = top;
    out["heavy_tail"] = top > 10.0 * p99;
    return out;
}

void write_json_file(const std::filesystem::path& file, const nlohmann::json& report) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open output file: " + file.string());
    out << report.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed while writing " + file.string());
}

void write_field_csv(const std::filesystem::path& file, const std::vector<std::string>& comments,
                     const FieldPath& path, std::size_t stride) {
    std::vector<std::string> header{"t"};
    for (std::size_t j = 0; j < path.grid.n_x; ++j) header.push_back("c" + std::to_string(j));
    CsvWriter writer(file, comments, header);
    std::size_t last_written = 0;
    for (std::size_t n = 0; n <= path.grid.n_t; n += stride) {
        std::vector<std::string> row{format_double(path.grid.time(n))};
        for (const double u : path.slice(n)) row.push_back(format_double(u));
        writer.write_row(row);
        last_written = n;
        if (n > path.grid.n_t - stride) break;  // avoid overflow past the end
    }
    if (last_written != path.grid.n_t) {
        std::vector<std::string> row{format_double(path.grid.time(path.grid.n_t))};
        for (const double u : path.terminal_slice()) row.push_back(format_double(u));
        writer.write_row(row);
    }
}

void write_support_series(const std::filesystem::path& file,
                          const std::vector<std::string>& comments, const SpaceTimeGrid& grid,
                          const SupportProfile& profile, std::size_t stride) {
    CsvWriter writer(file, comments, {"t", "left", "right", "width", "touched_boundary"});
    const std::size_t margin = (grid.n_x + 9) / 10;
    auto write_slice = [&](std::size_t n) {
        const auto& slice = profile.slices[n];
        const bool touched =
            !slice.empty && (slice.left < margin || slice.right >= grid.n_x - margin);
        std::vector<std::string> row{format_double(grid.time(n))};
        if (slice.empty) {
            row.push_back("nan");
            row.push_back("nan");
        } else {
            row.push_back(format_double(profile.x_left + static_cast<double>(slice.left) *
                                                             profile.dx));
            row.push_back(format_double(profile.x_left +
                                        static_cast<double>(slice.right + 1) * profile.dx));
        }
        row.push_back(format_double(slice.width));
        row.push_back(touched ? "1" : "0");
        writer.write_row(row);
    };
    std::size_t last_written = 0;
    for (std::size_t n = 0; n <= grid.n_t; n += stride) {
        write_slice(n);
        last_written = n;
        if (n > grid.n_t - stride) break;
    }
    if (last_written != grid.n_t) write_slice(grid.n_t);
}

struct ColumnData {
    std::vector<double> values;
    std::string hash;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (const char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

ColumnData read_column(const std::filesystem::path& file, const std::string& column) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open summary file: " + file.string());
    ColumnData data;
    std::string line;
    bool have_header = false;
    std::size_t column_index = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.find("config_hash") != std::string::npos) {
                data.hash = line.substr(eq + 1);
            }
            continue;
        }
        const auto cells = split_csv_line(line);
        if (!have_header) {
            const auto it = std::find(cells.begin(), cells.end(), column);
            if (it == cells.end()) {
                throw std::invalid_argument("column \"" + column + "\" not found in " +
                                            file.string());
            }
            column_index = static_cast<std::size_t>(it - cells.begin());
            have_header = true;
            continue;
        }
        if (cells.size() <= column_index) {
            throw std::invalid_argument(file.string() + " line " + std::to_string(line_no) +
                                        ": too few columns");
        }
        double v = 0.0;
        try {
            v = std::stod(cells[column_index]);
        } catch (const std::exception&) {
            throw std::invalid_argument(file.string() + " line " + std::to_string(line_no) +
                                        ": cannot parse \"" + cells[column_index] + "\"");
        }
        data.values.push_back(v);
    }
    if (data.values.empty()) {
        throw std::invalid_argument("no data rows in " + file.string());
    }
    return data;
}

}  // namespace

RunConfig apply_overrides(RunConfig config, const RunOverrides& overrides) {
    if (overrides.seed) config.base_seed = *overrides.seed;
    if (overrides.output_dir) config.output_dir = *overrides.output_dir;
    return config;
}

std::filesystem::path run_simulate(const RunConfig& raw_config, const RunOverrides& overrides) {
    const RunConfig config = apply_overrides(raw_config, overrides);
    validate_config(config, RunMode::simulate);
    const SpaceTimeGrid grid = config_grid(config);
    const CoefficientSpec spec = config_coefficients(config);
    const InitialData data = config_initial_data(config);
    const Boundary boundary = config_boundary(config);
    const SolveOptions options = base_options(config, overrides);
    const auto dir = ensure_output_dir(config);
    const auto comments = output_comments(config);
    const std::size_t n_paths = config.ensemble_size;
    const std::size_t stride = thin_stride(config, grid.n_t);

    struct Row {
        std::uint64_t seed = 0;
        double u_mid = 0.0, u_min = 0.0, u_max = 0.0, mass = 0.0, f = 0.0;
    };
    std::vector<Row> rows(n_paths);

    parallel_for(n_paths, effective_workers(overrides), [&](std::size_t k) {
        const std::uint64_t seed = rng::derive_seed(config.base_seed, rng::kTagDirectPath, k);
        auto noise = std::make_shared<NoiseIncrements>(sample_noise(grid, seed));
        const FieldPath path = solve_path(grid, spec, true, data, noise, boundary, options);
        const auto terminal = path.terminal_slice();
        Row& row = rows[k];
        row.seed = seed;
        row.u_mid = terminal[grid.n_x / 2];
        row.u_min = *std::min_element(terminal.begin(), terminal.end());
        row.u_max = *std::max_element(terminal.begin(), terminal.end());
        KahanSum mass;
        for (const double u : terminal) mass.add(u * grid.dx);
        row.mass = mass.value();
        row.f = terminal_functional(config, path);
        if (config.save_fields) {
            // One file per path; its bytes depend only on this path, so writing from
            // inside the worker cannot perturb determinism.
            write_field_csv(dir / ("fields_" + std::to_string(k) + ".csv"), comments, path,
                            stride);
        }
    });

    const auto summary_path = dir / "summary.csv";
    CsvWriter writer(summary_path, comments,
                     {"path", "seed", "u_mid", "u_min", "u_max", "mass", "functional"});
    for (std::size_t k = 0; k < n_paths; ++k) {
        const Row& row = rows[k];
        writer.write_row({std::to_string(k), format_seed(row.seed), format_double(row.u_mid),
                          format_double(row.u_min), format_double(row.u_max),
                          format_double(row.mass), format_double(row.f)});
    }
    return summary_path;
}

nlohmann::json run_transfer_check(const RunConfig& raw_config, const RunOverrides& overrides) {
    const RunConfig config = apply_overrides(raw_config, overrides);
    validate_config(config, RunMode::transfer_check);
    const SpaceTimeGrid grid = config_grid(config);
    const CoefficientSpec spec = config_coefficients(config);
    const InitialData data = config_initial_data(config);
    const Boundary boundary = config_boundary(config);
    const SolveOptions options = base_options(config, overrides);
    const auto dir = ensure_output_dir(config);
    const auto comments = output_comments(config);
    const std::size_t n_paths = config.ensemble_size;
    const std::vector<double>& schedule = config.schedule;
    const std::size_t n_levels = schedule.size();

    // Slimmed-down per-path results: the running quad array is reduced to its final
    // value inside the worker, so 10^4-path ensembles stay small in memory.
    struct PathOutcome {
        std::uint64_t seed = 0;
        double f = 0.0;
        double quad_final = 0.0;
        std::vector<std::size_t> tau;
        std::vector<double> log_xi;
        std::vector<char> survived;
    };

    const auto run_ensemble = [&](rng::StreamTag tag, bool include_d) {
        std::vector<PathOutcome> out(n_paths);
        parallel_for(n_paths, effective_workers(overrides), [&](std::size_t k) {
            const std::uint64_t seed = rng::derive_seed(config.base_seed, tag, k);
            auto noise = std::make_shared<NoiseIncrements>(sample_noise(grid, seed));
            const FieldPath path =
                solve_path(grid, spec, include_d, data, noise, boundary, options);
            const auto records = log_weight_schedule(path, spec, schedule);
            PathOutcome& po = out[k];
            po.seed = seed;
            po.f = terminal_functional(config, path);
            po.quad_final = records.front().quad_final();
            po.tau.reserve(n_levels);
            po.log_xi.reserve(n_levels);
            po.survived.reserve(n_levels);
            for (const TransferRecord& record : records) {
                po.tau.push_back(record.tau_index);
                po.log_xi.push_back(record.log_xi);
                po.survived.push_back(record.survived ? 1 : 0);
            }
        });
        return out;
    };

    const auto heat = run_ensemble(rng::kTagHeatPath, false);
    const auto direct = run_ensemble(rng::kTagDirectPath, true);

    const auto write_records = [&](const std::filesystem::path& file,
                                   const std::vector<PathOutcome>& ensemble) {
        CsvWriter writer(file, comments,
                         {"seed", "n", "tau_index", "quad_final", "log_xi", "survived"});
        for (const PathOutcome& po : ensemble) {
            for (std::size_t level = 0; level < n_levels; ++level) {
                writer.write_row({format_seed(po.seed), format_double(schedule[level]),
                                  std::to_string(po.tau[level]), format_double(po.quad_final),
                                  format_double(po.log_xi[level]),
                                  po.survived[level] ? "1" : "0"});
            }
        }
    };
    write_records(dir / "transfer_heat.csv", heat);
    write_records(dir / "transfer_direct.csv", direct);

    nlohmann::json report;
    report["command"] = "transfer-check";
    report["config_hash"] = config_hash(config);
    report["base_seed"] = config.base_seed;
    report["ensemble_size"] = n_paths;
    report["functional"] = config.functional;
    std::vector<std::string> warnings;

    {
        std::vector<double> quad_heat(n_paths);
        std::vector<double> quad_direct(n_paths);
        for (std::size_t k = 0; k < n_paths; ++k) {
            quad_heat[k] = heat[k].quad_final;
            quad_direct[k] = direct[k].quad_final;
        }
        report["quad_heat"] = quantile_summary(std::move(quad_heat));
        report["quad_direct"] = quantile_summary(std::move(quad_direct));
    }

    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t level = 0; level < n_levels; ++level) {
        const double n_level = schedule[level];
        nlohmann::json entry;
        entry["n"] = n_level;

        std::size_t surv_heat_count = 0;
        std::size_t surv_direct_count = 0;
        for (std::size_t k = 0; k < n_paths; ++k) {
            surv_heat_count += heat[k].survived[level] ? 1 : 0;
            surv_direct_count += direct[k].survived[level] ? 1 : 0;
        }
        const double surv_heat =
            static_cast<double>(surv_heat_count) / static_cast<double>(n_paths);
        const double surv_direct =
            static_cast<double>(surv_direct_count) / static_cast<double>(n_paths);
        entry["survival_heat"] = surv_heat;
        entry["survival_heat_se"] = binomial_se(surv_heat, n_paths);
        entry["survival_direct"] = surv_direct;
        entry["survival_direct_se"] = binomial_se(surv_direct, n_paths);

        // Normalization: the mean stopped weight over the heat ensemble estimates the
        // direct survival probability. Computed under a max-shift for overflow safety.
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n_paths; ++k) {
            if (heat[k].survived[level]) shift = std::max(shift, heat[k].log_xi[level]);
        }
        double mean_weight = 0.0;
        double se_weight = 0.0;
        if (surv_heat_count > 0) {
            KahanSum sum_w;
            KahanSum sum_w_sq;
            for (std::size_t k = 0; k < n_paths; ++k) {
                if (!heat[k].survived[level]) continue;
                const double w = std::exp(heat[k].log_xi[level] - shift);
                sum_w.add(w);
                sum_w_sq.add(w * w);
            }
            const auto n = static_cast<double>(n_paths);
            const double mean_shifted = sum_w.value() / n;
            const double var_shifted =
                std::max(sum_w_sq.value() / n - mean_shifted * mean_shifted, 0.0);
            const double scale = std::exp(shift);
            mean_weight = scale * mean_shifted;
            se_weight = scale * std::sqrt(var_shifted / n);
        }
        entry["mean_weight"] = mean_weight;
        entry["mean_weight_se"] = se_weight;
        entry["z_normalization"] = safe_z(
            mean_weight - surv_direct,
            std::sqrt(se_weight * se_weight +
                      binomial_se(surv_direct, n_paths) * binomial_se(surv_direct, n_paths)));

        // Functional comparison: reweighted heat estimate vs the direct estimate of
        // the same survival-localized functional.
        std::vector<TransferRecord> records(n_paths);
        std::vector<double> f_heat(n_paths);
        for (std::size_t k = 0; k < n_paths; ++k) {
            records[k].quad = {heat[k].quad_final};
            records[k].tau_index = heat[k].tau[level];
            records[k].log_xi = heat[k].log_xi[level];
            records[k].survived = heat[k].survived[level] != 0;
            records[k].n = n_level;
            f_heat[k] = heat[k].f;
        }
        const Expectation reweighted = reweighted_expectation(f_heat, records);
        std::vector<double> g_direct(n_paths);
        for (std::size_t k = 0; k < n_paths; ++k) {
            g_direct[k] = direct[k].survived[level] ? direct[k].f : 0.0;
        }
        const MeanSe direct_estimate = mean_se(g_direct);
        entry["estimate_reweighted"] = reweighted.estimate;
        entry["se_reweighted"] = reweighted.standard_error;
        entry["estimate_direct"] = direct_estimate.mean;
        entry["se_direct"] = direct_estimate.se;
        entry["z_functional"] =
            safe_z(reweighted.estimate - direct_estimate.mean,
                   std::sqrt(reweighted.standard_error * reweighted.standard_error +
                             direct_estimate.se * direct_estimate.se));
        entry["ess"] = reweighted.ess;
        entry["ess_over_n"] = reweighted.ess / static_cast<double>(n_paths);

        // Conditional-law comparison: reweighted heat survivors vs direct survivors.
        if (surv_heat_count == 0 || surv_direct_count == 0) {
            entry["ks"] = nullptr;
            warnings.push_back("level n=" + format_double(n_level) +
                               ": an ensemble has no survivors; ks skipped");
        } else {
            WeightedSample sample_a;
            sample_a.label = "reweighted-heat";
            WeightedSample sample_b;
            sample_b.label = "direct";
            for (std::size_t k = 0; k < n_paths; ++k) {
                if (heat[k].survived[level]) {
                    sample_a.values.push_back(heat[k].f);
                    sample_a.weights.push_back(std::exp(heat[k].log_xi[level] - shift));
                }
                if (direct[k].survived[level]) {
                    sample_b.values.push_back(direct[k].f);
                    sample_b.weights.push_back(1.0);
                }
            }
            const std::uint64_t ks_seed =
                rng::derive_seed(config.base_seed, rng::kTagPermutation, level);
            const KsResult ks = ks_weighted(sample_a, sample_b, kKsPermutations, ks_seed);
            nlohmann::json ks_json;
            ks_json["test"] = "weighted-ks-permutation";
            ks_json["statistic"] = ks.statistic;
            ks_json["p_value"] = ks.p_value;
            ks_json["ess"] = ess(sample_a.weights);
            ks_json["n_a"] = sample_a.values.size();
            ks_json["n_b"] = sample_b.values.size();
            ks_json["seed"] = ks_seed;
            ks_json["config_hash"] = config_hash(config);
            ks_json["n_permutations"] = kKsPermutations;
            entry["ks"] = ks_json;
        }
        levels.push_back(entry);
    }
    report["levels"] = levels;
    report["warnings"] = warnings;

    write_json_file(dir / "transfer_report.json", report);
    return report;
}

nlohmann::json run_support_scan(const RunConfig& raw_config, const RunOverrides& overrides) {
    const RunConfig config = apply_overrides(raw_config, overrides);
    validate_config(config, RunMode::support_scan);
    const SpaceTimeGrid grid = config_grid(config);
    const InitialData data = config_initial_data(config);
    const Boundary boundary = config_boundary(config);
    const SolveOptions options = base_options(config, overrides);
    const auto dir = ensure_output_dir(config);
    const auto comments = output_comments(config);
    const std::size_t n_paths = config.ensemble_size;
    const double epsilon = config.epsilon_factor * max_abs_initial(config);
    const std::size_t stride = thin_stride(config, grid.n_t);

    Interval containment{};
    if (config.containment_left == 0.0 && config.containment_right == 0.0) {
        const double quarter = grid.length() / 4.0;
        containment = {grid.x_left + quarter, grid.x_right - quarter};
    } else {
        containment = {config.containment_left, config.containment_right};
    }

    nlohmann::json report;
    report["command"] = "support-scan";
    report["config_hash"] = config_hash(config);
    report["base_seed"] = config.base_seed;
    report["ensemble_size"] = n_paths;
    report["epsilon"] = epsilon;
    report["containment"] = {{"left", containment.left}, {"right", containment.right}};
    std::vector<std::string> warnings;

    const std::size_t n_gammas = config.gamma_list.size();
    std::vector<std::vector<double>> final_widths(n_gammas);
    std::vector<std::vector<double>> union_widths(n_gammas);
    std::vector<std::vector<char>> contained(n_gammas);
    std::vector<double> containment_rates(n_gammas);
    std::vector<double> median_finals(n_gammas);
    nlohmann::json gammas = nlohmann::json::array();

    for (std::size_t g_idx = 0; g_idx < n_gammas; ++g_idx) {
        const double gamma = config.gamma_list[g_idx];
        const CoefficientSpec spec = config_coefficients_gamma(config, gamma);
        const std::string gamma_token = format_double(gamma);

        struct PathResult {
            std::uint64_t seed = 0;
            SupportProfile profile;
            double integrability = 0.0;
        };
        std::vector<PathResult> results(n_paths);

        parallel_for(n_paths, effective_workers(overrides), [&](std::size_t k) {
            // Same seed across gammas: ensembles are coupled path-by-path, which is
            // what makes the paired sign tests paired.
            const std::uint64_t seed =
                rng::derive_seed(config.base_seed, rng::kTagSupportPath, k);
            auto noise = std::make_shared<NoiseIncrements>(sample_noise(grid, seed));
            const FieldPath path = solve_path(grid, spec, true, data, noise, boundary, options);
            PathResult& pr = results[k];
            pr.seed = seed;
            pr.profile = support_profile(path, epsilon);
            pr.integrability = integrability_functional(path, config.C, gamma);
            if (config.save_fields) {
                write_support_series(dir / ("support_series_gamma_" + gamma_token + "_path_" +
                                            std::to_string(k) + ".csv"),
                                     comments, grid, pr.profile, stride);
            }
        });

        CsvWriter writer(dir / ("support_gamma_" + gamma_token + ".csv"), comments,
                         {"path", "seed", "union_left", "union_right", "union_width",
                          "final_width", "touched_boundary", "integrability"});
        std::vector<double> integrability_values(n_paths);
        std::size_t touched_count = 0;
        final_widths[g_idx].resize(n_paths);
        union_widths[g_idx].resize(n_paths);
        contained[g_idx].resize(n_paths);
        std::vector<SupportProfile> profiles(n_paths);
        for (std::size_t k = 0; k < n_paths; ++k) {
            const PathResult& pr = results[k];
            const auto& uni = pr.profile.union_support;
            std::string union_left = "nan";
            std::string union_right = "nan";
            bool inside = true;
            if (!uni.empty) {
                const double lo =
                    pr.profile.x_left + static_cast<double>(uni.left) * pr.profile.dx;
                const double hi =
                    pr.profile.x_left + static_cast<double>(uni.right + 1) * pr.profile.dx;
                union_left = format_double(lo);
                union_right = format_double(hi);
                inside = lo >= containment.left && hi <= containment.right;
            }
            final_widths[g_idx][k] = pr.profile.slices.back().width;
            union_widths[g_idx][k] = uni.width;
            contained[g_idx][k] = inside ? 1 : 0;
            integrability_values[k] = pr.integrability;
            touched_count += pr.profile.touched_boundary ? 1 : 0;
            profiles[k] = pr.profile;
            writer.write_row({std::to_string(k), format_seed(pr.seed), union_left, union_right,
                              format_double(uni.width),
                              format_double(final_widths[g_idx][k]),
                              pr.profile.touched_boundary ? "1" : "0",
                              format_double(pr.integrability)});
        }

        const double rate = support_containment_rate(profiles, containment);
        containment_rates[g_idx] = rate;
        const double touched_fraction =
            static_cast<double>(touched_count) / static_cast<double>(n_paths);

        WeightedSample finals;
        finals.values = final_widths[g_idx];
        finals.weights.assign(n_paths, 1.0);
        WeightedSample unions;
        unions.values = union_widths[g_idx];
        unions.weights.assign(n_paths, 1.0);
        median_finals[g_idx] = weighted_quantile(finals, 0.5);

        nlohmann::json entry;
        entry["gamma"] = gamma;
        entry["median_final_width"] = median_finals[g_idx];
        entry["median_union_width"] = weighted_quantile(unions, 0.5);
        entry["containment_rate"] = rate;
        entry["touched_fraction"] = touched_fraction;
        entry["integrability"] = quantile_summary(std::move(integrability_values));
        entry["warning_domain_too_small"] = touched_fraction > 0.0;
        if (touched_fraction > 0.0) {
            warnings.push_back("gamma " + gamma_token +
                               ": support entered the outer cells on " +
                               format_double(touched_fraction * 100.0) +
                               "% of paths; widen the domain");
        }
        gammas.push_back(entry);
    }
    report["gammas"] = gammas;

    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < n_gammas; ++i) {
        for (std::size_t j = i + 1; j < n_gammas; ++j) {
            nlohmann::json pair;
            pair["gamma_a"] = config.gamma_list[i];
            pair["gamma_b"] = config.gamma_list[j];
            pair["median_final_width_a"] = median_finals[i];
            pair["median_final_width_b"] = median_finals[j];
            pair["containment_rate_a"] = containment_rates[i];
            pair["containment_rate_b"] = containment_rates[j];

            // One-sided "a narrower than b", per coupled path.
            const SignTestResult width_final =
                paired_sign_test(final_widths[i], final_widths[j]);
            pair["width_final"] = {{"wins", width_final.wins},
                                   {"losses", width_final.losses},
                                   {"ties", width_final.ties},
                                   {"p_value", width_final.p_value}};
            const SignTestResult width_union =
                paired_sign_test(union_widths[i], union_widths[j]);
            pair["width_union"] = {{"wins", width_union.wins},
                                   {"losses", width_union.losses},
                                   {"ties", width_union.ties},
                                   {"p_value", width_union.p_value}};

            // One-sided "a contained where b is not", over discordant coupled paths.
            std::size_t wins = 0;
            std::size_t losses = 0;
            for (std::size_t k = 0; k < n_paths; ++k) {
                if (contained[i][k] && !contained[j][k]) ++wins;
                if (!contained[i][k] && contained[j][k]) ++losses;
            }
            const SignTestResult containment_test = sign_test_counts(wins, losses);
            pair["containment"] = {{"wins", containment_test.wins},
                                   {"losses", containment_test.losses},
                                   {"p_value", containment_test.p_value}};
            pairs.push_back(pair);
        }
    }
    report["pairs"] = pairs;
    report["warnings"] = warnings;

    write_json_file(dir / "support_report.json", report);
    return report;
}

nlohmann::json compare_summaries(const std::filesystem::path& a, const std::filesystem::path& b,
                                 const std::string& column, std::size_t n_permutations,
                                 std::uint64_t seed) {
    const ColumnData data_a = read_column(a, column);
    const ColumnData data_b = read_column(b, column);

    WeightedSample sample_a;
    sample_a.values = data_a.values;
    sample_a.weights.assign(sample_a.values.size(), 1.0);
    sample_a.label = a.string();
    WeightedSample sample_b;
    sample_b.values = data_b.values;
    sample_b.weights.assign(sample_b.values.size(), 1.0);
    sample_b.label = b.string();

    const KsResult ks = ks_weighted(sample_a, sample_b, n_permutations, seed);
    const MeanSe mean_a = mean_se(data_a.values);
    const MeanSe mean_b = mean_se(data_b.values);

    nlohmann::json out;
    out["test"] = "ks-permutation";
    out["column"] = column;
    out["statistic"] = ks.statistic;
    out["p_value"] = ks.p_value;
    out["ess"] = static_cast<double>(sample_a.values.size() + sample_b.values.size());
    out["n_a"] = sample_a.values.size();
    out["n_b"] = sample_b.values.size();
    out["seed"] = seed;
    out["config_hash"] = data_a.hash == data_b.hash ? data_a.hash
                                                    : data_a.hash + ":" + data_b.hash;
    out["config_hash_a"] = data_a.hash;
    out["config_hash_b"] = data_b.hash;
    out["mean_a"] = mean_a.mean;
    out["mean_b"] = mean_b.mean;
    out["se_a"] = mean_a.se;
    out["se_b"] = mean_b.se;
    out["n_permutations"] = n_permutations;
    return out;
}

}  // namespace spdelab
