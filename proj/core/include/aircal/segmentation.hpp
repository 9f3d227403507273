#pragma once

// Hover-dwell detection in a positioned sample stream, per-dwell power
// averaging, and association of dwells with the planned waypoint mission.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "aircal/geodesy.hpp"
#include "aircal/ingest.hpp"

namespace aircal {

// mission-CSV: header `lat_deg,lon_deg,alt_m`, one waypoint per row.
struct WaypointMission {
    std::vector<GeodeticPosition> waypoints; // >= 1
    double dwell_s = 30.0;                   // planned hover duration
};

WaypointMission parse_mission(std::istream& in);
void emit_mission(std::ostream& out, const WaypointMission& mission);

struct DetectParams {
    double speed_threshold_mps = 0.5;
    double min_dwell_s = 10.0;
    std::size_t min_samples = 30;
    double median_window_s = 1.0; // smoothing window for the speed estimate
};

struct HoverSegment {
    double start_s = 0.0;
    double end_s = 0.0;
    GeodeticPosition centroid;
    double mean_power_dbm = 0.0;          // linear-milliwatt mean (authoritative)
    double db_domain_mean_dbm = 0.0;      // plain dB average, reported alongside
    std::size_t sample_count = 0;
    std::optional<double> yaw_deg;        // circular mean, when every sample carries yaw
    std::optional<std::size_t> matched_waypoint;
    double drift_m = 0.0;                 // horizontal centroid-to-waypoint distance
};

// Central-difference 3D speed at each positioned sample (one-sided at the
// ends), in m/s.
std::vector<double> sample_speeds(const std::vector<PositionedSample>& positioned);

// sample_speeds passed through a moving median of the given time window, the
// speed estimate the detector thresholds on.
std::vector<double> smoothed_speeds(const std::vector<PositionedSample>& positioned,
                                    double window_s = 1.0);

// Maximal runs where the smoothed speed stays below the threshold for at
// least min_dwell_s and min_samples. Segments come out disjoint and
// time-ordered; everything else is motion and is discarded.
std::vector<HoverSegment> detect_hovers(const std::vector<PositionedSample>& positioned,
                                        const DetectParams& params = {});

// Mean in linear milliwatts, returned in dBm. Throws EmptyInput.
double average_power(std::span<const double> samples_dbm);
// Plain arithmetic mean of the dB values (for reporting only).
double db_domain_mean(std::span<const double> samples_dbm);

// Greedy nearest-neighbor assignment in segment order; each waypoint is used
// at most once, leftover segments stay unmatched.
void match_waypoints(std::vector<HoverSegment>& segments, const WaypointMission& mission);

} // namespace aircal
