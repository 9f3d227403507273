#pragma once

// Flight-log and spectrum-analyzer sample parsing, plus time alignment of
// positions to power samples.
//
// track-CSV:  header `t_s,lat_deg,lon_deg,alt_m[,yaw_deg]`, one fix per row.
// sample-CSV: header `t_s,p_dbm`, one sample per row.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aircal/geodesy.hpp"

namespace aircal {

struct TrackFix {
    double t_s = 0.0;
    GeodeticPosition position;
    std::optional<double> yaw_deg;
};

struct FlightTrack {
    std::vector<TrackFix> fixes; // >= 2, timestamps non-decreasing

    double start_s() const { return fixes.front().t_s; }
    double end_s() const { return fixes.back().t_s; }
};

struct MeasurementSample {
    double t_s = 0.0;
    double received_power_dbm = 0.0;
};

struct PositionedSample {
    MeasurementSample sample;
    GeodeticPosition position; // interpolated between bracketing fixes
    std::optional<double> yaw_deg;
};

FlightTrack parse_flight_log(std::istream& in);
std::vector<MeasurementSample> parse_samples(std::istream& in);

void emit_flight_log(std::ostream& out, const FlightTrack& track);
void emit_samples(std::ostream& out, const std::vector<MeasurementSample>& samples);

struct AlignResult {
    std::vector<PositionedSample> positioned;
    std::size_t dropped = 0; // samples outside the track time span
};

// Positions each sample by linear interpolation in ECEF between its
// bracketing fixes (yaw interpolated along the shortest arc when both fixes
// carry one). `clock_offset_s` is added to sample timestamps before matching.
// Samples outside the track span are dropped and counted; if none land
// inside, throws NoOverlap.
AlignResult align(const FlightTrack& track, const std::vector<MeasurementSample>& samples,
                  double clock_offset_s = 0.0);

} // namespace aircal
