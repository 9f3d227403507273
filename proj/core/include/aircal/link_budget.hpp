#pragma once

// Converts averaged received powers into calibrated path-loss values using
// ray geometry, the measured antenna patterns, and the fixed RF-chain
// constants of the measurement rig.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "aircal/geodesy.hpp"
#include "aircal/pattern.hpp"
#include "aircal/segmentation.hpp"

namespace aircal {

struct LinkBudgetConfig {
    double tx_power_dbm = 22.0;
    double tx_cable_loss_db = 10.0;       // signal generator -> transmit antenna
    double rx_cable_loss_db = 2.5;        // amplifier -> spectrum analyzer
    double amplifier_gain_db = 55.0;
    double frequency_hz = 28e9;
    MountOrientation tx_mount{0.0, 15.0, 0.0};
    MountOrientation rx_mount{};          // receive antenna offset on the airframe
};

struct PathLossPoint {
    double distance3d_m = 0.0;
    double path_loss_db = 0.0;
    double tx_gain_db_applied = 0.0;
    double rx_gain_db_applied = 0.0;
    double azimuth_deg = 0.0;   // ray tx -> rx, world frame
    double elevation_deg = 0.0;
    std::size_t segment_id = 0;
    // budget terms echoed for auditability
    double tx_power_dbm = 0.0;
    double tx_cable_loss_db = 0.0;
    double rx_cable_loss_db = 0.0;
    double amplifier_gain_db = 0.0;
    double mean_power_dbm = 0.0;
    bool yaw_fallback = false; // attitude was assumed nose-north (no yaw in the data)
};

// Free-space path loss 20*log10(4*pi*d*f/c) in dB.
double fspl_db(double distance_m, double frequency_hz);

// Path loss of one hover dwell:
//   pl = tx_power - tx_cable_loss + G_tx + G_rx + amplifier_gain
//        - rx_cable_loss - mean_power
// G_tx is evaluated at the horn-local angles of the ray tx -> centroid; G_rx
// at the airframe-local angles of the reciprocal ray, with the segment's yaw
// composed into the rx mount when available (nose-north otherwise).
PathLossPoint extract_path_loss(const HoverSegment& segment, const GeodeticPosition& tx_position,
                                const LinkBudgetConfig& cfg, const AntennaPattern& tx_pattern,
                                const AntennaPattern& rx_pattern, std::size_t segment_id = 0);

// Reconstructs the analyzer reading a PathLossPoint was derived from.
double invert_path_loss(const PathLossPoint& point);

// pathloss-CSV: `d_m,pl_db,gtx_db,grx_db,az_deg,el_deg,segment_id`.
void emit_pathloss_csv(std::ostream& out, const std::vector<PathLossPoint>& points);
std::vector<PathLossPoint> parse_pathloss_csv(std::istream& in);

} // namespace aircal
