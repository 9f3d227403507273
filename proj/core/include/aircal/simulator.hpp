#pragma once

// Synthetic-campaign generator: flies the waypoint mission under a Friis
// channel with configurable position/attitude/instrument error sources and
// emits campaign files in exactly the formats ingest consumes. Fully
// deterministic for a given (scenario, seed).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aircal/fitting.hpp"
#include "aircal/ingest.hpp"
#include "aircal/link_budget.hpp"
#include "aircal/pattern.hpp"
#include "aircal/segmentation.hpp"

namespace aircal {

struct ErrorModel {
    // Constant per-run GPS bias, std per axis (horizontal axes / vertical).
    double gps_horizontal_sigma_m = 0.0;
    double gps_vertical_sigma_m = 0.0;
    // White per-fix jitter, std per axis.
    double gps_jitter_sigma_m = 0.0;
    // Random-walk drift of the GPS bias, in metres per second of walk rate.
    double gps_bias_walk_sigma_mps = 0.0;
    // True horizontal drift of the hover position, per metre of altitude.
    double wind_drift_gain_per_m = 0.0;
    double yaw_jitter_sigma_deg = 0.0;
    // Sinusoidal roll/pitch of the hovering airframe.
    double wobble_amplitude_deg = 0.0;
    double wobble_rate_hz = 0.0;
    double amp_droop_db_per_min = 0.0;
    double power_noise_sigma_db = 0.0;
};

struct SimulationScenario {
    WaypointMission mission;
    double transit_speed_mps = 5.0;
    double dwell_s = 30.0;
    double sample_rate_hz = 9.0;
    GeodeticPosition tx_position;
    LinkBudgetConfig cfg;
    AntennaPattern tx_pattern = make_uniform_pattern(0.0);
    AntennaPattern rx_pattern = make_uniform_pattern(0.0);
    ErrorModel error_model;
    std::uint64_t seed = 1;
};

struct TruthPoint {
    double t_s = 0.0;
    double d_true_m = 0.0;
    double pl_true_db = 0.0;
};

struct SimulationResult {
    FlightTrack true_track;     // true positions and true yaw
    FlightTrack reported_track; // GPS-perturbed positions, planned yaw
    std::vector<MeasurementSample> samples;
    std::vector<TruthPoint> truth;
};

SimulationResult simulate(const SimulationScenario& scenario);

// truth-CSV: `t_s,d_true_m,pl_true_db`.
void emit_truth_csv(std::ostream& out, const std::vector<TruthPoint>& truth);

struct MonteCarloRun {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error_category; // set when the pipeline failed for this run
    double alpha = 0.0;
    double beta_excess_db = 0.0;
    double rmse_db = 0.0;
    std::size_t n_segments = 0;
};

struct DistributionSummary {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation
    double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
};

struct MonteCarloResult {
    std::vector<MonteCarloRun> runs;
    std::size_t n_failed = 0;
    DistributionSummary alpha;
    DistributionSummary beta_excess_db;
    DistributionSummary rmse_db;
};

struct MonteCarloOptions {
    DetectParams detect;
    FitOptions fit;
    unsigned jobs = 0; // 0 = hardware concurrency; results are identical either way
};

// Runs the full simulate -> align -> segment -> budget -> fit pipeline once
// per derived seed. Per-run pipeline errors are recorded, not fatal.
MonteCarloResult monte_carlo(const SimulationScenario& scenario, std::size_t n_runs,
                             const MonteCarloOptions& options = {});

} // namespace aircal
