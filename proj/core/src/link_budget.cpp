#include "aircal/link_budget.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"

namespace aircal {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;
} // namespace

double fspl_db(double distance_m, double frequency_hz) {
    return 20.0 * std::log10(kFourPi * distance_m * frequency_hz / kSpeedOfLightMps);
}

PathLossPoint extract_path_loss(const HoverSegment& segment, const GeodeticPosition& tx_position,
                                const LinkBudgetConfig& cfg, const AntennaPattern& tx_pattern,
                                const AntennaPattern& rx_pattern, std::size_t segment_id) {
    const EnuVector rx_enu = geodetic_to_enu(segment.centroid, tx_position);
    const RayGeometry ray = ray_geometry(EnuVector{}, rx_enu); // throws ZeroDistance

    const LocalAngles tx_local = world_to_antenna_frame(ray, cfg.tx_mount);
    const double g_tx = gain_at(tx_pattern, tx_local);

    // The UAV sees the reciprocal ray; its yaw rotates the whole antenna
    // assembly, so it composes with the mount's azimuth offset.
    const RayGeometry back_ray = ray_geometry(rx_enu, EnuVector{});
    const double yaw = segment.yaw_deg.value_or(0.0);
    const MountOrientation rx_mount_eff{
        wrap_azimuth_deg(yaw + cfg.rx_mount.boresight_azimuth_deg),
        cfg.rx_mount.uptilt_deg,
        cfg.rx_mount.roll_deg,
    };
    const LocalAngles rx_local = world_to_antenna_frame(back_ray, rx_mount_eff);
    const double g_rx = gain_at(rx_pattern, rx_local);

    PathLossPoint p;
    p.distance3d_m = ray.distance3d_m;
    p.tx_gain_db_applied = g_tx;
    p.rx_gain_db_applied = g_rx;
    p.azimuth_deg = ray.azimuth_deg;
    p.elevation_deg = ray.elevation_deg;
    p.segment_id = segment_id;
    p.tx_power_dbm = cfg.tx_power_dbm;
    p.tx_cable_loss_db = cfg.tx_cable_loss_db;
    p.rx_cable_loss_db = cfg.rx_cable_loss_db;
    p.amplifier_gain_db = cfg.amplifier_gain_db;
    p.mean_power_dbm = segment.mean_power_dbm;
    p.yaw_fallback = !segment.yaw_deg.has_value();
    p.path_loss_db = cfg.tx_power_dbm - cfg.tx_cable_loss_db + g_tx + g_rx +
                     cfg.amplifier_gain_db - cfg.rx_cable_loss_db - segment.mean_power_dbm;
    return p;
}

double invert_path_loss(const PathLossPoint& point) {
    return point.tx_power_dbm - point.tx_cable_loss_db + point.tx_gain_db_applied +
           point.rx_gain_db_applied + point.amplifier_gain_db - point.rx_cable_loss_db -
           point.path_loss_db;
}

void emit_pathloss_csv(std::ostream& out, const std::vector<PathLossPoint>& points) {
    out << "d_m,pl_db,gtx_db,grx_db,az_deg,el_deg,segment_id\n";
    for (const PathLossPoint& p : points) {
        out << csv::format_double(p.distance3d_m) << "," << csv::format_double(p.path_loss_db) << ","
            << csv::format_double(p.tx_gain_db_applied) << ","
            << csv::format_double(p.rx_gain_db_applied) << "," << csv::format_double(p.azimuth_deg)
            << "," << csv::format_double(p.elevation_deg) << "," << p.segment_id << "\n";
    }
}

std::vector<PathLossPoint> parse_pathloss_csv(std::istream& in) {
    const csv::Table table = csv::read_table(in);
    const std::vector<std::string> want = {"d_m",    "pl_db",  "gtx_db",    "grx_db",
                                           "az_deg", "el_deg", "segment_id"};
    if (table.header != want) {
        throw Error(ErrorCategory::MalformedRow, "unexpected pathloss-CSV header");
    }
    std::vector<PathLossPoint> points;
    points.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        PathLossPoint p;
        p.distance3d_m = row[0];
        p.path_loss_db = row[1];
        p.tx_gain_db_applied = row[2];
        p.rx_gain_db_applied = row[3];
        p.azimuth_deg = row[4];
        p.elevation_deg = row[5];
        p.segment_id = static_cast<std::size_t>(row[6]);
        points.push_back(p);
    }
    return points;
}

} // namespace aircal
