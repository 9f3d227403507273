#pragma once

// How position and attitude errors propagate through antenna gains and
// range into path-loss offsets. Each offset is decomposed into a tx-gain, an
// rx-gain and a free-space term so a dB-scale discrepancy is attributable to
// its cause.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "aircal/geodesy.hpp"
#include "aircal/link_budget.hpp"
#include "aircal/pattern.hpp"

namespace aircal {

struct SensitivityEntry {
    // Position mode: the ENU displacement that was applied.
    EnuVector displacement;
    // Attitude mode: the yaw/roll error that was applied.
    double yaw_error_deg = 0.0;
    double roll_error_deg = 0.0;

    double distance_m = 0.0;        // perturbed range
    double tx_gain_error_db = 0.0;  // nominal minus perturbed
    double rx_gain_error_db = 0.0;
    double fspl_error_db = 0.0;     // perturbed minus nominal
    double pl_offset_db = 0.0;      // sum of the three terms
};

struct SensitivityReport {
    enum class Kind { Position, Attitude };
    Kind kind = Kind::Position;
    std::vector<SensitivityEntry> entries;
    std::size_t worst_index = 0; // largest |pl_offset_db|
    // Nominal geometry context.
    double range_m = 0.0;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
};

// Zero plus {0.5, 1, 2, 3, 5, 10} m along +/- each ENU axis.
std::vector<EnuVector> default_displacement_grid();

// Re-evaluates geometry and gains at each displaced receiver position and
// reports the path-loss offset a pipeline assuming the nominal position
// would incur. rx_yaw_deg is the assumed airframe yaw at the nominal point.
SensitivityReport position_sensitivity(const GeodeticPosition& tx_position,
                                       const GeodeticPosition& nominal_rx,
                                       const std::vector<EnuVector>& displacements,
                                       const LinkBudgetConfig& cfg, const AntennaPattern& tx_pattern,
                                       const AntennaPattern& rx_pattern, double rx_yaw_deg = 0.0);

// Perturbs the receive mount (yaw x roll grid) at fixed geometry; only the
// rx gain term can move.
SensitivityReport attitude_sensitivity(const GeodeticPosition& tx_position,
                                       const GeodeticPosition& nominal_rx,
                                       const std::vector<double>& yaw_errors_deg,
                                       const std::vector<double>& roll_errors_deg,
                                       const LinkBudgetConfig& cfg,
                                       const AntennaPattern& rx_pattern, double rx_yaw_deg = 0.0);

// sensitivity-CSV plus a human-readable table.
void emit_sensitivity_csv(std::ostream& out, const SensitivityReport& report);
std::string sensitivity_summary(const SensitivityReport& report);

} // namespace aircal
