// aircal: post-processing, calibration and validation for UAV air-to-ground
// channel measurement campaigns.
//
// Subcommands: process, simulate, montecarlo, sensitivity, pattern.
// Every flag overrides its config-file key; precedence is flag > file >
// default, and the winning values are logged in the run report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aircal/errors.hpp"
#include "aircal/pipeline.hpp"
#include "aircal/run_config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
};

aircal::KeyedConfig load_config(const CommonArgs& args) {
    aircal::KeyedConfig cfg;
    if (!args.config_path.empty()) {
        cfg = aircal::KeyedConfig::parse_file(args.config_path);
    }
    if (!args.out_dir.empty()) {
        cfg.set_override("paths", "out_dir", args.out_dir);
    }
    return cfg;
}

void print_artifacts(const std::vector<std::filesystem::path>& artifacts) {
    for (const auto& p : artifacts) {
        std::cout << "wrote " << p.string() << "\n";
    }
}

} // namespace

namespace {

int run_main(int argc, char** argv) {
    CLI::App app{"UAV air-to-ground channel measurement toolkit"};
    app.require_subcommand(1);

    CommonArgs common;

    // --- process ---
    auto* process = app.add_subcommand("process", "run ingest -> align -> segment -> budget -> fit");
    process->add_option("--config", common.config_path, "keyed config file")->required();
    process->add_option("--out-dir", common.out_dir, "output directory (overrides paths.out_dir)");
    std::optional<double> clock_offset, speed_threshold, min_dwell;
    std::optional<std::uint64_t> min_samples;
    bool mad_filter = false;
    process->add_option("--clock-offset-s", clock_offset, "clock offset added to sample timestamps");
    process->add_option("--speed-threshold", speed_threshold, "hover speed threshold, m/s");
    process->add_option("--min-dwell-s", min_dwell, "minimum dwell duration, s");
    process->add_option("--min-samples", min_samples, "minimum samples per dwell");
    process->add_flag("--mad-filter", mad_filter, "enable the 3xMAD residual outlier gate");

    // --- simulate ---
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic campaign");
    simulate->add_option("--config", common.config_path, "keyed config file")->required();
    simulate->add_option("--out-dir", common.out_dir, "output directory (overrides paths.out_dir)");
    std::optional<std::uint64_t> seed;
    simulate->add_option("--seed", seed, "simulation seed");

    // --- montecarlo ---
    auto* montecarlo = app.add_subcommand("montecarlo", "fit distribution across simulated campaigns");
    montecarlo->add_option("--config", common.config_path, "keyed config file")->required();
    montecarlo->add_option("--out-dir", common.out_dir, "output directory (overrides paths.out_dir)");
    std::size_t runs = 100;
    std::optional<std::uint64_t> mc_seed;
    std::optional<std::uint64_t> jobs;
    montecarlo->add_option("--runs", runs, "number of runs")->required();
    montecarlo->add_option("--seed", mc_seed, "base seed");
    montecarlo->add_option("--jobs", jobs, "worker threads (0 = hardware)");

    // --- sensitivity ---
    auto* sensitivity = app.add_subcommand("sensitivity", "position/attitude error propagation");
    sensitivity->add_option("--config", common.config_path, "keyed config file")->required();
    sensitivity->add_option("--out-dir", common.out_dir, "output directory (overrides paths.out_dir)");

    // --- pattern ---
    auto* pattern = app.add_subcommand("pattern", "inspect or compare antenna patterns");
    pattern->require_subcommand(1);
    auto* inspect = pattern->add_subcommand("inspect", "grid stats of one pattern file");
    std::string inspect_file;
    inspect->add_option("file", inspect_file, "pattern-CSV file")->required();
    std::string inspect_out;
    inspect->add_option("--json", inspect_out, "also write the stats to this JSON file");
    auto* diff = pattern->add_subcommand("diff", "elementwise difference of two patterns");
    std::string diff_a, diff_b, diff_out;
    diff->add_option("a", diff_a, "pattern-CSV file")->required();
    diff->add_option("b", diff_b, "pattern-CSV file")->required();
    diff->add_option("--out", diff_out, "write the difference map as pattern-CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (process->parsed()) {
            auto cfg = load_config(common);
            if (clock_offset) cfg.set_override("align", "clock_offset_s", std::to_string(*clock_offset));
            if (speed_threshold) {
                cfg.set_override("segmentation", "speed_threshold_mps", std::to_string(*speed_threshold));
            }
            if (min_dwell) cfg.set_override("segmentation", "min_dwell_s", std::to_string(*min_dwell));
            if (min_samples) cfg.set_override("segmentation", "min_samples", std::to_string(*min_samples));
            if (mad_filter) cfg.set_override("fit", "mad_filter", "true");
            const aircal::ProcessResult r = aircal::run_process(cfg);
            print_artifacts(r.artifacts);
            std::cout << "alpha = " << r.fit.alpha << ", beta_excess_db = " << r.fit.beta_excess_db
                      << ", rmse_db = " << r.fit.rmse_db << " over " << r.fit.n_points << " dwells\n";
        } else if (simulate->parsed()) {
            auto cfg = load_config(common);
            if (seed) cfg.set_override("simulation", "seed", std::to_string(*seed));
            const aircal::SimulateResult r = aircal::run_simulate(cfg);
            print_artifacts(r.artifacts);
        } else if (montecarlo->parsed()) {
            auto cfg = load_config(common);
            if (mc_seed) cfg.set_override("simulation", "seed", std::to_string(*mc_seed));
            if (jobs) cfg.set_override("montecarlo", "jobs", std::to_string(*jobs));
            const aircal::MonteCarloArtifacts r = aircal::run_montecarlo(cfg, runs);
            print_artifacts(r.artifacts);
            std::cout << "alpha: mean " << r.result.alpha.mean << ", stddev " << r.result.alpha.stddev
                      << " (" << r.result.runs.size() - r.result.n_failed << "/"
                      << r.result.runs.size() << " runs ok)\n";
        } else if (sensitivity->parsed()) {
            auto cfg = load_config(common);
            const aircal::SensitivityArtifacts r = aircal::run_sensitivity(cfg);
            print_artifacts(r.artifacts);
        } else if (inspect->parsed()) {
            const std::string json = aircal::pattern_inspect_json(inspect_file);
            std::cout << json;
            if (!inspect_out.empty()) {
                std::ofstream out(inspect_out, std::ios::binary);
                if (!out) throw aircal::Error(aircal::ErrorCategory::IoError, "cannot write " + inspect_out);
                out << json;
            }
        } else if (diff->parsed()) {
            const aircal::PatternDiffResult r = aircal::pattern_diff_files(diff_a, diff_b);
            std::cout << r.summary;
            if (!diff_out.empty()) {
                std::ofstream out(diff_out, std::ios::binary);
                if (!out) throw aircal::Error(aircal::ErrorCategory::IoError, "cannot write " + diff_out);
                aircal::emit_pattern(out, r.diff.delta);
            }
        }
    } catch (const aircal::Error& e) {
        std::cerr << "aircal: error [" << to_string(e.category()) << "] " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "aircal: error [Unhandled] " << e.what() << "\n";
        return 1;
    }
}
