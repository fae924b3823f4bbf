// Command-line driver: simulate | transfer-check | support-scan | compare.
//
// Exit codes: 0 success, 2 config/validation error, 3 blow-up (a non-finite field
// value), 1 anything else. Everything the commands write is a pure function of
// (config, seed), so identical invocations produce byte-identical outputs.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spdelab/errors.hpp"
#include "spdelab/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    unsigned workers = 1;
    bool deterministic = false;
    bool allow_unstable = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "override run.base_seed");
    cmd->add_option("--workers", args.workers, "threads for the ensemble loop (default 1)");
    cmd->add_flag("--deterministic", args.deterministic,
                  "pin the run to one worker (outputs are byte-stable either way)");
    cmd->add_option("--out", args.out, "output directory (overrides run.output_dir)");
    cmd->add_flag("--allow-unstable-grid", args.allow_unstable,
                  "run even when dt > dx^2/2 (the explicit scheme will likely blow up)");
}

spdelab::RunOverrides overrides_of(const CommonArgs& args) {
    spdelab::RunOverrides overrides;
    overrides.seed = args.seed;
    overrides.output_dir = args.out;
    overrides.workers = args.workers;
    overrides.deterministic = args.deterministic;
    overrides.allow_unstable = args.allow_unstable;
    return overrides;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1d parabolic SPDE laboratory: ensemble simulation, Girsanov reweighting "
                 "checks, and support measurement"};
    app.require_subcommand(1);

    CommonArgs simulate_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one ensemble and write summary.csv (+ optional field CSVs)");
    add_common(simulate, simulate_args);

    CommonArgs transfer_args;
    CLI::App* transfer = app.add_subcommand(
        "transfer-check",
        "heat ensemble with reweighting vs direct ensemble; writes transfer_*.csv and "
        "transfer_report.json");
    add_common(transfer, transfer_args);

    CommonArgs support_args;
    CLI::App* support = app.add_subcommand(
        "support-scan",
        "support-width measurement across run.gamma_list with coupled ensembles; writes "
        "support_gamma_*.csv and support_report.json");
    add_common(support, support_args);

    std::string compare_a;
    std::string compare_b;
    std::string compare_column = "functional";
    std::size_t compare_permutations = 500;
    std::uint64_t compare_seed = 12345;
    std::optional<std::string> compare_out;
    CLI::App* compare = app.add_subcommand(
        "compare", "two-sample KS comparison of one column of two summary CSVs");
    compare->add_option("a", compare_a, "first summary.csv")->required()->check(CLI::ExistingFile);
    compare->add_option("b", compare_b, "second summary.csv")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--column", compare_column, "column to compare (default: functional)");
    compare->add_option("--permutations", compare_permutations,
                        "permutation count for the null (default: 500, minimum 100)");
    compare->add_option("--seed", compare_seed, "permutation seed (default: 12345)");
    compare->add_option("--out", compare_out, "also write the JSON report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help/--version exit 0 through app.exit; every usage or file-existence
        // failure folds into the documented config/validation exit code.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            const auto config = spdelab::parse_config_file(simulate_args.config_path);
            const auto summary = spdelab::run_simulate(config, overrides_of(simulate_args));
            std::cout << "wrote " << summary.string() << "\n";
        } else if (transfer->parsed()) {
            const auto config = spdelab::parse_config_file(transfer_args.config_path);
            const auto report =
                spdelab::run_transfer_check(config, overrides_of(transfer_args));
            for (const auto& level : report.at("levels")) {
                std::cout << "n=" << level.at("n").dump()
                          << " survival_heat=" << level.at("survival_heat").dump()
                          << " survival_direct=" << level.at("survival_direct").dump()
                          << " mean_weight=" << level.at("mean_weight").dump()
                          << " z_norm=" << level.at("z_normalization").dump()
                          << " z_fn=" << level.at("z_functional").dump()
                          << " ess=" << level.at("ess").dump() << "\n";
            }
            std::cout << "wrote transfer_report.json\n";
        } else if (support->parsed()) {
            const auto config = spdelab::parse_config_file(support_args.config_path);
            const auto report = spdelab::run_support_scan(config, overrides_of(support_args));
            for (const auto& entry : report.at("gammas")) {
                std::cout << "gamma=" << entry.at("gamma").dump()
                          << " median_final_width=" << entry.at("median_final_width").dump()
                          << " containment_rate=" << entry.at("containment_rate").dump()
                          << "\n";
            }
            std::cout << "wrote support_report.json\n";
        } else if (compare->parsed()) {
            const auto report = spdelab::compare_summaries(
                compare_a, compare_b, compare_column, compare_permutations, compare_seed);
            std::cout << report.dump(2) << "\n";
            if (compare_out) {
                std::ofstream out(*compare_out);
                if (!out) {
                    throw std::runtime_error("cannot open output file: " + *compare_out);
                }
                out << report.dump(2) << "\n";
            }
        }
    } catch (const spdelab::BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
