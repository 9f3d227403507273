#pragma once

// Config-driven orchestration behind the CLI subcommands. Each run_* function
// reads its sections from the keyed config, executes the pipeline, writes the
// artifacts into the configured output directory and returns what it wrote.
// Artifacts carry no timestamps, so identical inputs give identical bytes.

#include <filesystem>
#include <string>
#include <vector>

#include "aircal/fitting.hpp"
#include "aircal/run_config.hpp"
#include "aircal/segmentation.hpp"
#include "aircal/sensitivity.hpp"
#include "aircal/simulator.hpp"

namespace aircal {

struct ProcessResult {
    PathLossFit fit;
    std::vector<HoverSegment> segments;
    std::size_t samples_in = 0;
    std::size_t samples_positioned = 0;
    std::size_t samples_dropped_outside_track = 0;
    std::size_t samples_discarded_in_motion = 0;
    std::vector<std::filesystem::path> artifacts; // pathloss.csv, fit.json, plotdata.csv, run_report.txt
};

ProcessResult run_process(const KeyedConfig& config);

struct SimulateResult {
    std::vector<std::filesystem::path> artifacts; // track.csv, samples.csv, mission.csv, truth.csv
};

SimulateResult run_simulate(const KeyedConfig& config);

struct MonteCarloArtifacts {
    MonteCarloResult result;
    std::vector<std::filesystem::path> artifacts; // montecarlo.json, montecarlo_runs.csv
};

MonteCarloArtifacts run_montecarlo(const KeyedConfig& config, std::size_t n_runs);

struct SensitivityArtifacts {
    SensitivityReport position;
    SensitivityReport attitude;
    std::vector<std::filesystem::path> artifacts; // sensitivity.csv x2, summary txt
};

SensitivityArtifacts run_sensitivity(const KeyedConfig& config);

// `pattern inspect` / `pattern diff` payloads.
std::string pattern_inspect_json(const std::filesystem::path& file);
struct PatternDiffResult {
    PatternDiff diff;
    std::string summary;
};
PatternDiffResult pattern_diff_files(const std::filesystem::path& a,
                                     const std::filesystem::path& b);

// Resolves a pattern config value: either a pattern-CSV path or the literal
// `isotropic:<gain_dbi>`.
AntennaPattern resolve_pattern(const std::string& spec_value);

// Builds a SimulationScenario from [paths]/[transmitter]/[receiver]/[budget]/
// [simulation]/[errors]; shared by simulate and montecarlo.
SimulationScenario build_scenario(const KeyedConfig& config);

} // namespace aircal
