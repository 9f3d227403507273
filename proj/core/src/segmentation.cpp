#include "aircal/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"

namespace aircal {

WaypointMission parse_mission(std::istream& in) {
    WaypointMission mission;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = csv::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tokens = csv::split_line(t);
        if (!have_header) {
            if (tokens.size() != 3 || tokens[0] != "lat_deg" || tokens[1] != "lon_deg" ||
                tokens[2] != "alt_m") {
                throw Error(ErrorCategory::MalformedRow,
                            "line " + std::to_string(line_no) + ": expected header lat_deg,lon_deg,alt_m");
            }
            have_header = true;
            continue;
        }
        if (tokens.size() != 3) {
            throw Error(ErrorCategory::MalformedRow, "line " + std::to_string(line_no) +
                                                         ": expected 3 fields, got " +
                                                         std::to_string(tokens.size()));
        }
        GeodeticPosition wp;
        double v;
        if (!csv::parse_double(tokens[0], v)) {
            throw Error(ErrorCategory::MalformedRow,
                        "line " + std::to_string(line_no) + ": cannot parse latitude '" + tokens[0] + "'");
        }
        wp.latitude_deg = v;
        if (!csv::parse_double(tokens[1], v)) {
            throw Error(ErrorCategory::MalformedRow,
                        "line " + std::to_string(line_no) + ": cannot parse longitude '" + tokens[1] + "'");
        }
        wp.longitude_deg = normalize_longitude_deg(v);
        if (!csv::parse_double(tokens[2], v)) {
            throw Error(ErrorCategory::MalformedRow,
                        "line " + std::to_string(line_no) + ": cannot parse altitude '" + tokens[2] + "'");
        }
        wp.altitude_m = v;
        if (!is_valid_geodetic(wp)) {
            throw Error(ErrorCategory::MalformedRow,
                        "line " + std::to_string(line_no) + ": waypoint out of range");
        }
        mission.waypoints.push_back(wp);
    }
    if (mission.waypoints.empty()) {
        throw Error(ErrorCategory::EmptyInput, "mission has no waypoints");
    }
    return mission;
}

void emit_mission(std::ostream& out, const WaypointMission& mission) {
    out << "lat_deg,lon_deg,alt_m\n";
    for (const GeodeticPosition& wp : mission.waypoints) {
        out << csv::format_double(wp.latitude_deg, 12) << "," << csv::format_double(wp.longitude_deg, 12)
            << "," << csv::format_double(wp.altitude_m, 12) << "\n";
    }
}

std::vector<double> sample_speeds(const std::vector<PositionedSample>& positioned) {
    const std::size_t n = positioned.size();
    std::vector<double> speeds(n, 0.0);
    if (n < 2) return speeds;

    std::vector<Vec3> ecef;
    ecef.reserve(n);
    for (const PositionedSample& p : positioned) ecef.push_back(geodetic_to_ecef(p.position));

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 < n ? i + 1 : n - 1;
        const double dt = positioned[b].sample.t_s - positioned[a].sample.t_s;
        if (dt > 0.0) {
            speeds[i] = (ecef[b] - ecef[a]).norm() / dt;
        } else {
            speeds[i] = i > 0 ? speeds[i - 1] : 0.0; // duplicate timestamps
        }
    }
    return speeds;
}

std::vector<double> smoothed_speeds(const std::vector<PositionedSample>& positioned,
                                    double window_s) {
    const std::vector<double> raw = sample_speeds(positioned);
    const std::size_t n = raw.size();
    std::vector<double> out(n, 0.0);
    const double half = window_s / 2.0;
    std::size_t lo = 0, hi = 0;
    std::vector<double> window;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = positioned[i].sample.t_s;
        while (lo < n && positioned[lo].sample.t_s < t - half) ++lo;
        while (hi < n && positioned[hi].sample.t_s <= t + half) ++hi;
        window.assign(raw.begin() + static_cast<std::ptrdiff_t>(lo),
                      raw.begin() + static_cast<std::ptrdiff_t>(hi));
        const std::size_t mid = window.size() / 2;
        std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(mid), window.end());
        double med = window[mid];
        if (window.size() % 2 == 0) {
            const double lower = *std::max_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(mid));
            med = 0.5 * (lower + med);
        }
        out[i] = med;
    }
    return out;
}

double average_power(std::span<const double> samples_dbm) {
    if (samples_dbm.empty()) {
        throw Error(ErrorCategory::EmptyInput, "cannot average zero power samples");
    }
    double sum_mw = 0.0;
    for (double dbm : samples_dbm) sum_mw += std::pow(10.0, dbm / 10.0);
    return 10.0 * std::log10(sum_mw / static_cast<double>(samples_dbm.size()));
}

double db_domain_mean(std::span<const double> samples_dbm) {
    if (samples_dbm.empty()) {
        throw Error(ErrorCategory::EmptyInput, "cannot average zero power samples");
    }
    double sum = 0.0;
    for (double dbm : samples_dbm) sum += dbm;
    return sum / static_cast<double>(samples_dbm.size());
}

namespace {

HoverSegment make_segment(const std::vector<PositionedSample>& positioned, std::size_t begin,
                          std::size_t end) {
    HoverSegment seg;
    seg.start_s = positioned[begin].sample.t_s;
    seg.end_s = positioned[end - 1].sample.t_s;
    seg.sample_count = end - begin;

    // Accumulate displacements from the first point; summing raw ECEF
    // coordinates would round at the 1e9-metre partial-sum scale.
    const Vec3 ref = geodetic_to_ecef(positioned[begin].position);
    Vec3 offset_sum{0, 0, 0};
    std::vector<double> powers;
    powers.reserve(end - begin);
    double yaw_sin = 0.0, yaw_cos = 0.0;
    bool all_yaw = true;
    for (std::size_t i = begin; i < end; ++i) {
        offset_sum = offset_sum + (geodetic_to_ecef(positioned[i].position) - ref);
        powers.push_back(positioned[i].sample.received_power_dbm);
        if (positioned[i].yaw_deg) {
            yaw_sin += std::sin(deg2rad(*positioned[i].yaw_deg));
            yaw_cos += std::cos(deg2rad(*positioned[i].yaw_deg));
        } else {
            all_yaw = false;
        }
    }
    seg.centroid = ecef_to_geodetic(ref + offset_sum * (1.0 / static_cast<double>(seg.sample_count)));
    seg.mean_power_dbm = average_power(powers);
    seg.db_domain_mean_dbm = db_domain_mean(powers);
    if (all_yaw && (yaw_sin != 0.0 || yaw_cos != 0.0)) {
        seg.yaw_deg = wrap_azimuth_deg(rad2deg(std::atan2(yaw_sin, yaw_cos)));
    }
    return seg;
}

} // namespace

std::vector<HoverSegment> detect_hovers(const std::vector<PositionedSample>& positioned,
                                        const DetectParams& params) {
    std::vector<HoverSegment> segments;
    if (positioned.empty()) return segments;

    const std::vector<double> speed = smoothed_speeds(positioned, params.median_window_s);

    std::size_t run_begin = 0;
    bool in_run = false;
    auto close_run = [&](std::size_t run_end) {
        const double duration = positioned[run_end - 1].sample.t_s - positioned[run_begin].sample.t_s;
        const std::size_t count = run_end - run_begin;
        if (duration >= params.min_dwell_s && count >= params.min_samples) {
            segments.push_back(make_segment(positioned, run_begin, run_end));
        }
    };
    for (std::size_t i = 0; i < positioned.size(); ++i) {
        if (speed[i] < params.speed_threshold_mps) {
            if (!in_run) {
                run_begin = i;
                in_run = true;
            }
        } else if (in_run) {
            close_run(i);
            in_run = false;
        }
    }
    if (in_run) close_run(positioned.size());
    return segments;
}

void match_waypoints(std::vector<HoverSegment>& segments, const WaypointMission& mission) {
    if (mission.waypoints.empty()) {
        throw Error(ErrorCategory::EmptyInput, "mission has no waypoints");
    }
    std::vector<bool> used(mission.waypoints.size(), false);
    for (HoverSegment& seg : segments) {
        seg.matched_waypoint.reset();
        seg.drift_m = 0.0;
        double best = 0.0;
        std::size_t best_idx = 0;
        bool found = false;
        for (std::size_t w = 0; w < mission.waypoints.size(); ++w) {
            if (used[w]) continue;
            const EnuVector offset = geodetic_to_enu(seg.centroid, mission.waypoints[w]);
            const double horizontal = std::hypot(offset.east_m, offset.north_m);
            if (!found || horizontal < best) {
                best = horizontal;
                best_idx = w;
                found = true;
            }
        }
        if (found) {
            used[best_idx] = true;
            seg.matched_waypoint = best_idx;
            seg.drift_m = best;
        }
    }
}

} // namespace aircal
