#include "aircal/sensitivity.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"

namespace aircal {

namespace {

struct LinkEval {
    double distance_m;
    double tx_gain_db;
    double rx_gain_db;
    RayGeometry ray;
};

LinkEval evaluate_link(const EnuVector& rx_enu, double rx_yaw_deg, double rx_roll_extra_deg,
                       const LinkBudgetConfig& cfg, const AntennaPattern& tx_pattern,
                       const AntennaPattern& rx_pattern) {
    LinkEval ev;
    ev.ray = ray_geometry(EnuVector{}, rx_enu); // throws ZeroDistance
    ev.distance_m = ev.ray.distance3d_m;
    ev.tx_gain_db = gain_at(tx_pattern, world_to_antenna_frame(ev.ray, cfg.tx_mount));

    const RayGeometry back = ray_geometry(rx_enu, EnuVector{});
    const MountOrientation rx_mount_eff{
        wrap_azimuth_deg(rx_yaw_deg + cfg.rx_mount.boresight_azimuth_deg),
        cfg.rx_mount.uptilt_deg,
        cfg.rx_mount.roll_deg + rx_roll_extra_deg,
    };
    ev.rx_gain_db = gain_at(rx_pattern, world_to_antenna_frame(back, rx_mount_eff));
    return ev;
}

void finalize(SensitivityReport& report) {
    double worst = -1.0;
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const double mag = std::abs(report.entries[i].pl_offset_db);
        if (mag > worst) {
            worst = mag;
            report.worst_index = i;
        }
    }
}

} // namespace

std::vector<EnuVector> default_displacement_grid() {
    std::vector<EnuVector> grid;
    grid.push_back({0.0, 0.0, 0.0});
    for (double mag : {0.5, 1.0, 2.0, 3.0, 5.0, 10.0}) {
        grid.push_back({mag, 0.0, 0.0});
        grid.push_back({-mag, 0.0, 0.0});
        grid.push_back({0.0, mag, 0.0});
        grid.push_back({0.0, -mag, 0.0});
        grid.push_back({0.0, 0.0, mag});
        grid.push_back({0.0, 0.0, -mag});
    }
    return grid;
}

SensitivityReport position_sensitivity(const GeodeticPosition& tx_position,
                                       const GeodeticPosition& nominal_rx,
                                       const std::vector<EnuVector>& displacements,
                                       const LinkBudgetConfig& cfg, const AntennaPattern& tx_pattern,
                                       const AntennaPattern& rx_pattern, double rx_yaw_deg) {
    const EnuVector nominal_enu = geodetic_to_enu(nominal_rx, tx_position);
    const LinkEval nominal = evaluate_link(nominal_enu, rx_yaw_deg, 0.0, cfg, tx_pattern, rx_pattern);
    const double nominal_fspl = fspl_db(nominal.distance_m, cfg.frequency_hz);

    SensitivityReport report;
    report.kind = SensitivityReport::Kind::Position;
    report.range_m = nominal.distance_m;
    report.azimuth_deg = nominal.ray.azimuth_deg;
    report.elevation_deg = nominal.ray.elevation_deg;

    for (const EnuVector& disp : displacements) {
        const LinkEval ev =
            evaluate_link(nominal_enu + disp, rx_yaw_deg, 0.0, cfg, tx_pattern, rx_pattern);
        SensitivityEntry e;
        e.displacement = disp;
        e.distance_m = ev.distance_m;
        e.tx_gain_error_db = nominal.tx_gain_db - ev.tx_gain_db;
        e.rx_gain_error_db = nominal.rx_gain_db - ev.rx_gain_db;
        e.fspl_error_db = fspl_db(ev.distance_m, cfg.frequency_hz) - nominal_fspl;
        e.pl_offset_db = e.tx_gain_error_db + e.rx_gain_error_db + e.fspl_error_db;
        report.entries.push_back(e);
    }
    finalize(report);
    return report;
}

SensitivityReport attitude_sensitivity(const GeodeticPosition& tx_position,
                                       const GeodeticPosition& nominal_rx,
                                       const std::vector<double>& yaw_errors_deg,
                                       const std::vector<double>& roll_errors_deg,
                                       const LinkBudgetConfig& cfg,
                                       const AntennaPattern& rx_pattern, double rx_yaw_deg) {
    const EnuVector nominal_enu = geodetic_to_enu(nominal_rx, tx_position);
    const AntennaPattern tx_any = make_uniform_pattern(0.0);
    const LinkEval nominal = evaluate_link(nominal_enu, rx_yaw_deg, 0.0, cfg, tx_any, rx_pattern);

    SensitivityReport report;
    report.kind = SensitivityReport::Kind::Attitude;
    report.range_m = nominal.distance_m;
    report.azimuth_deg = nominal.ray.azimuth_deg;
    report.elevation_deg = nominal.ray.elevation_deg;

    for (double dyaw : yaw_errors_deg) {
        for (double droll : roll_errors_deg) {
            const LinkEval ev = evaluate_link(nominal_enu, rx_yaw_deg + dyaw, droll, cfg, tx_any,
                                              rx_pattern);
            SensitivityEntry e;
            e.yaw_error_deg = dyaw;
            e.roll_error_deg = droll;
            e.distance_m = ev.distance_m;
            e.rx_gain_error_db = nominal.rx_gain_db - ev.rx_gain_db;
            e.pl_offset_db = e.rx_gain_error_db;
            report.entries.push_back(e);
        }
    }
    finalize(report);
    return report;
}

void emit_sensitivity_csv(std::ostream& out, const SensitivityReport& report) {
    out << "kind,east_m,north_m,up_m,yaw_err_deg,roll_err_deg,d_m,"
           "gtx_err_db,grx_err_db,fspl_err_db,pl_offset_db\n";
    const int kind = report.kind == SensitivityReport::Kind::Position ? 0 : 1;
    for (const SensitivityEntry& e : report.entries) {
        out << kind << "," << csv::format_double(e.displacement.east_m) << ","
            << csv::format_double(e.displacement.north_m) << ","
            << csv::format_double(e.displacement.up_m) << "," << csv::format_double(e.yaw_error_deg)
            << "," << csv::format_double(e.roll_error_deg) << "," << csv::format_double(e.distance_m)
            << "," << csv::format_double(e.tx_gain_error_db) << ","
            << csv::format_double(e.rx_gain_error_db) << "," << csv::format_double(e.fspl_error_db)
            << "," << csv::format_double(e.pl_offset_db) << "\n";
    }
}

std::string sensitivity_summary(const SensitivityReport& report) {
    std::ostringstream os;
    const bool position = report.kind == SensitivityReport::Kind::Position;
    os << (position ? "position sensitivity" : "attitude sensitivity") << "\n";
    os << "nominal geometry: range " << csv::format_double(report.range_m, 6) << " m, azimuth "
       << csv::format_double(report.azimuth_deg, 6) << " deg, elevation "
       << csv::format_double(report.elevation_deg, 6) << " deg\n";
    if (position) {
        os << "  east_m north_m   up_m | gtx_err grx_err fspl_err | pl_offset_db\n";
    } else {
        os << "  yaw_err roll_err | grx_err | pl_offset_db\n";
    }
    for (const SensitivityEntry& e : report.entries) {
        char buf[160];
        if (position) {
            std::snprintf(buf, sizeof(buf), "  %6.2f %7.2f %6.2f | %7.3f %7.3f %8.3f | %9.3f\n",
                          e.displacement.east_m, e.displacement.north_m, e.displacement.up_m,
                          e.tx_gain_error_db, e.rx_gain_error_db, e.fspl_error_db, e.pl_offset_db);
        } else {
            std::snprintf(buf, sizeof(buf), "  %7.2f %8.2f | %7.3f | %9.3f\n", e.yaw_error_deg,
                          e.roll_error_deg, e.rx_gain_error_db, e.pl_offset_db);
        }
        os << buf;
    }
    const SensitivityEntry& w = report.entries[report.worst_index];
    os << "worst case: |pl offset| = " << csv::format_double(std::abs(w.pl_offset_db), 6) << " dB";
    if (position) {
        os << " at displacement (" << csv::format_double(w.displacement.east_m, 6) << ", "
           << csv::format_double(w.displacement.north_m, 6) << ", "
           << csv::format_double(w.displacement.up_m, 6) << ") m\n";
    } else {
        os << " at yaw error " << csv::format_double(w.yaw_error_deg, 6) << " deg, roll error "
           << csv::format_double(w.roll_error_deg, 6) << " deg\n";
    }
    return os.str();
}

} // namespace aircal
