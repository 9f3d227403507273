#pragma once

// Ordinary least squares fit of the log-distance path-loss model
//   pl(d) = intercept + alpha * 10*log10(d / 1 m)
// plus residual diagnostics and the report/plot-data artifacts.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "aircal/link_budget.hpp"

namespace aircal {

struct PathLossFit {
    double alpha = 0.0;          // path-loss exponent (slope over 10*log10 d)
    double intercept_db = 0.0;   // fitted loss at d0 = 1 m
    double beta_excess_db = 0.0; // intercept minus free-space loss at d0
    double rmse_db = 0.0;        // over the points used
    std::vector<double> residuals_db; // input order, against the final line
    std::vector<bool> used;           // false for points dropped by the MAD gate
    std::size_t n_points = 0;         // points used
    std::size_t dropped_points = 0;   // points removed by the MAD gate
};

struct FitOptions {
    bool mad_filter = false;      // drop |r - median| > 3*MAD outliers, refit once
    std::vector<double> weights;  // optional per-point weights (empty = unweighted)
};

// Throws DegenerateDesign when fewer than 2 points remain or all distances
// are equal.
PathLossFit fit_log_distance(const std::vector<PathLossPoint>& points, double frequency_hz,
                             const FitOptions& options = {});

struct FitReport {
    PathLossFit fit;
    double frequency_hz = 0.0;
    struct Quartiles {
        double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
    } residual_quartiles_db;
    struct PointRecord {
        std::size_t segment_id = 0;
        double distance_m = 0.0;
        double x_10log10d = 0.0;
        double path_loss_db = 0.0;
        double residual_db = 0.0;
        bool used = true;
    };
    std::vector<PointRecord> points;
};

FitReport fit_report(const PathLossFit& fit, const std::vector<PathLossPoint>& points,
                     double frequency_hz);

std::string fit_report_json(const FitReport& report);
void emit_fit_json(std::ostream& out, const FitReport& report);

// plotdata-CSV: `x_10log10d,pl_db,fitline_db`, sorted by x.
void emit_plotdata_csv(std::ostream& out, const std::vector<PathLossPoint>& points,
                       const PathLossFit& fit);

} // namespace aircal
