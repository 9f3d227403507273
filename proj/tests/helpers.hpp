#pragma once

// Shared fixtures for the test and acceptance suites: synthetic antenna
// patterns with known structure, mission builders, and independent oracles
// kept deliberately separate from the library implementation paths they
// cross-check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aircal/geodesy.hpp"
#include "aircal/pattern.hpp"
#include "aircal/segmentation.hpp"
#include "aircal/simulator.hpp"

namespace testutil {

constexpr double kPi = 3.14159265358979323846;

inline std::vector<double> grid_range(double lo, double hi, double step) {
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
    return out;
}

// Great-circle angle between (az, el) and the (0, 0) boresight.
inline double off_boresight_deg(double az_deg, double el_deg) {
    const double c = std::cos(el_deg * kPi / 180.0) * std::cos(az_deg * kPi / 180.0);
    return std::acos(std::fmin(1.0, std::fmax(-1.0, c))) * 180.0 / kPi;
}

// Gaussian-beam horn: peak gain on the (0,0) boresight, quadratic dB rolloff
// scaled by the half-power beamwidth, floored backlobe.
inline aircal::AntennaPattern make_horn(double peak_dbi = 14.7, double hpbw_deg = 25.0,
                                        double floor_dbi = -25.0) {
    aircal::AntennaPattern p;
    p.label = "horn";
    p.azimuth_deg = grid_range(0.0, 355.0, 5.0);
    p.elevation_deg = grid_range(-90.0, 90.0, 5.0);
    p.gain_dbi.reserve(p.azimuth_deg.size() * p.elevation_deg.size());
    for (double az : p.azimuth_deg) {
        for (double el : p.elevation_deg) {
            const double off = off_boresight_deg(az, el);
            p.gain_dbi.push_back(std::fmax(peak_dbi - 12.0 * (off / hpbw_deg) * (off / hpbw_deg),
                                           floor_dbi));
        }
    }
    return p;
}

// Free-space omni: azimuth-uniform with a mild elevation taper.
inline aircal::AntennaPattern make_omni(double peak_dbi = 2.1) {
    aircal::AntennaPattern p;
    p.label = "omni";
    p.azimuth_deg = grid_range(0.0, 355.0, 5.0);
    p.elevation_deg = grid_range(-90.0, 90.0, 5.0);
    for (double az : p.azimuth_deg) {
        (void)az;
        for (double el : p.elevation_deg) {
            p.gain_dbi.push_back(peak_dbi - 3.0 * (el / 45.0) * (el / 45.0));
        }
    }
    return p;
}

inline double circ_dist_deg(double a, double b) {
    double d = std::abs(std::fmod(a - b, 360.0));
    return std::fmin(d, 360.0 - d);
}

// Omni distorted by the airframe: a deep notch where the gimbal shadows the
// antenna (azimuth 225) and a shallower one near the starboard landing gear
// (azimuth 10).
inline aircal::AntennaPattern make_omni_on_uav(double peak_dbi = 2.1) {
    aircal::AntennaPattern p = make_omni(peak_dbi);
    p.label = "omni-on-uav";
    for (std::size_t i = 0; i < p.n_azimuth(); ++i) {
        for (std::size_t j = 0; j < p.n_elevation(); ++j) {
            const double az = p.azimuth_deg[i];
            const double el = p.elevation_deg[j];
            const double g1 = circ_dist_deg(az, 225.0) / 12.0;
            const double g2 = circ_dist_deg(az, 10.0) / 8.0;
            const double el_w = std::exp(-(el / 40.0) * (el / 40.0));
            p.node(i, j) += (-10.0 * std::exp(-g1 * g1) - 4.0 * std::exp(-g2 * g2)) * el_w;
        }
    }
    return p;
}

// Uniform pattern with a single-node defect of the given depth; every
// elevation of that azimuth column carries the notch.
inline aircal::AntennaPattern make_notch_column(double base_dbi, double notch_az_deg,
                                                double depth_db) {
    aircal::AntennaPattern p;
    p.label = "notch";
    p.azimuth_deg = grid_range(0.0, 355.0, 5.0);
    p.elevation_deg = grid_range(-90.0, 90.0, 5.0);
    for (double az : p.azimuth_deg) {
        for (double el : p.elevation_deg) {
            (void)el;
            p.gain_dbi.push_back(az == notch_az_deg ? base_dbi - depth_db : base_dbi);
        }
    }
    return p;
}

// Independent bilinear oracle: finds the four surrounding nodes by linear
// scan and combines them with product weights. No code shared with gain_at.
inline double bilinear_oracle(const aircal::AntennaPattern& p, double az, double el) {
    az = std::fmod(az, 360.0);
    if (az < 0) az += 360.0;
    el = std::fmin(90.0, std::fmax(-90.0, el));

    const auto& azs = p.azimuth_deg;
    const auto& els = p.elevation_deg;

    std::size_t ai = azs.size() - 1;
    double az_lo = azs.back(), az_hi = azs.front() + 360.0;
    for (std::size_t i = 0; i + 1 < azs.size(); ++i) {
        if (az >= azs[i] && az < azs[i + 1]) {
            ai = i;
            az_lo = azs[i];
            az_hi = azs[i + 1];
            break;
        }
    }
    double a = az;
    if (ai == azs.size() - 1 && a < az_lo) a += 360.0; // wrapped past 0
    const std::size_t ai2 = (ai + 1) % azs.size();
    const double t = (a - az_lo) / (az_hi - az_lo);

    std::size_t ei = 0;
    if (el <= els.front()) {
        ei = 0;
    } else if (el >= els.back()) {
        ei = els.size() - 2;
    } else {
        for (std::size_t j = 0; j + 1 < els.size(); ++j) {
            if (el >= els[j] && el < els[j + 1]) {
                ei = j;
                break;
            }
        }
    }
    double u = (el - els[ei]) / (els[ei + 1] - els[ei]);
    u = std::fmin(1.0, std::fmax(0.0, u));

    return p.node(ai, ei) * (1 - t) * (1 - u) + p.node(ai2, ei) * t * (1 - u) +
           p.node(ai, ei + 1) * (1 - t) * u + p.node(ai2, ei + 1) * t * u;
}

// Straight-line mission: waypoints marching out from the transmitter along a
// bearing, expressed relative to the transmitter antenna position.
inline aircal::WaypointMission line_mission(const aircal::GeodeticPosition& tx, double bearing_deg,
                                            const std::vector<double>& horizontal_m,
                                            const std::vector<double>& up_m, double dwell_s = 30.0) {
    aircal::WaypointMission mission;
    mission.dwell_s = dwell_s;
    const double b = bearing_deg * kPi / 180.0;
    for (std::size_t i = 0; i < horizontal_m.size(); ++i) {
        const double h = horizontal_m[i];
        const double u = up_m[i % up_m.size()];
        mission.waypoints.push_back(
            aircal::enu_to_geodetic({h * std::sin(b), h * std::cos(b), u}, tx));
    }
    return mission;
}

inline std::vector<double> spacings(double first, double step, std::size_t count) {
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(first + step * static_cast<double>(i));
    return out;
}

// Shared default transmitter for synthetic campaigns.
inline aircal::GeodeticPosition test_tx() { return {60.3330, 24.2960, 51.5}; }

// Zero-noise 11-waypoint scenario with isotropic antennas.
inline aircal::SimulationScenario zero_noise_scenario(std::uint64_t seed = 424242) {
    aircal::SimulationScenario sc;
    sc.tx_position = test_tx();
    sc.mission = line_mission(sc.tx_position, 40.0, spacings(30.0, 30.0, 11), {15.0});
    sc.transit_speed_mps = 5.0;
    sc.dwell_s = 30.0;
    sc.sample_rate_hz = 9.0;
    sc.cfg.tx_mount.boresight_azimuth_deg = 40.0;
    sc.seed = seed;
    return sc;
}

// Fresh per-test scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::path("test_scratch") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testutil
