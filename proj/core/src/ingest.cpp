#include "aircal/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"

namespace aircal {

namespace {

double parse_field(const std::string& token, std::size_t line_no, const char* what) {
    double v;
    if (!csv::parse_double(token, v)) {
        throw Error(ErrorCategory::MalformedRow, "line " + std::to_string(line_no) +
                                                     ": cannot parse " + what + " '" + token + "'");
    }
    return v;
}

} // namespace

FlightTrack parse_flight_log(std::istream& in) {
    FlightTrack track;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool has_yaw_column = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = csv::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tokens = csv::split_line(t);
        if (!have_header) {
            if (tokens.size() < 4 || tokens[0] != "t_s" || tokens[1] != "lat_deg" ||
                tokens[2] != "lon_deg" || tokens[3] != "alt_m") {
                throw Error(ErrorCategory::MalformedRow,
                            "line " + std::to_string(line_no) +
                                ": expected header t_s,lat_deg,lon_deg,alt_m[,yaw_deg]");
            }
            if (tokens.size() == 5 && tokens[4] == "yaw_deg") {
                has_yaw_column = true;
            } else if (tokens.size() != 4) {
                throw Error(ErrorCategory::MalformedRow,
                            "line " + std::to_string(line_no) + ": unexpected track header");
            }
            have_header = true;
            continue;
        }
        const std::size_t want = has_yaw_column ? 5 : 4;
        if (tokens.size() != want) {
            throw Error(ErrorCategory::MalformedRow, "line " + std::to_string(line_no) +
                                                         ": expected " + std::to_string(want) +
                                                         " fields, got " + std::to_string(tokens.size()));
        }
        TrackFix fix;
        fix.t_s = parse_field(tokens[0], line_no, "timestamp");
        fix.position.latitude_deg = parse_field(tokens[1], line_no, "latitude");
        fix.position.longitude_deg = normalize_longitude_deg(parse_field(tokens[2], line_no, "longitude"));
        fix.position.altitude_m = parse_field(tokens[3], line_no, "altitude");
        if (!std::isfinite(fix.t_s) || !is_valid_geodetic(fix.position)) {
            throw Error(ErrorCategory::MalformedRow,
                        "line " + std::to_string(line_no) + ": fix out of range");
        }
        if (has_yaw_column && !tokens[4].empty()) {
            fix.yaw_deg = wrap_azimuth_deg(parse_field(tokens[4], line_no, "yaw"));
        }
        if (!track.fixes.empty() && fix.t_s < track.fixes.back().t_s) {
            throw Error(ErrorCategory::NonMonotoneTime,
                        "line " + std::to_string(line_no) + ": timestamp " +
                            csv::format_double(fix.t_s) + " before previous " +
                            csv::format_double(track.fixes.back().t_s));
        }
        track.fixes.push_back(fix);
    }
    if (track.fixes.size() < 2) {
        throw Error(ErrorCategory::EmptyTrack,
                    "track has " + std::to_string(track.fixes.size()) + " fixes, need at least 2");
    }
    return track;
}

std::vector<MeasurementSample> parse_samples(std::istream& in) {
    std::vector<MeasurementSample> samples;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = csv::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tokens = csv::split_line(t);
        if (!have_header) {
            if (tokens.size() != 2 || tokens[0] != "t_s" || tokens[1] != "p_dbm") {
                throw Error(ErrorCategory::MalformedRow,
                            "line " + std::to_string(line_no) + ": expected header t_s,p_dbm");
            }
            have_header = true;
            continue;
        }
        if (tokens.size() != 2) {
            throw Error(ErrorCategory::MalformedRow, "line " + std::to_string(line_no) +
                                                         ": expected 2 fields, got " +
                                                         std::to_string(tokens.size()));
        }
        MeasurementSample s;
        s.t_s = parse_field(tokens[0], line_no, "timestamp");
        s.received_power_dbm = parse_field(tokens[1], line_no, "power");
        if (!std::isfinite(s.t_s)) {
            throw Error(ErrorCategory::MalformedRow,
                        "line " + std::to_string(line_no) + ": non-finite timestamp");
        }
        if (!std::isfinite(s.received_power_dbm)) {
            throw Error(ErrorCategory::NonFinitePower,
                        "line " + std::to_string(line_no) + ": non-finite power reading");
        }
        samples.push_back(s);
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const MeasurementSample& a, const MeasurementSample& b) { return a.t_s < b.t_s; });
    return samples;
}

void emit_flight_log(std::ostream& out, const FlightTrack& track) {
    const bool yaw = std::any_of(track.fixes.begin(), track.fixes.end(),
                                 [](const TrackFix& f) { return f.yaw_deg.has_value(); });
    out << (yaw ? "t_s,lat_deg,lon_deg,alt_m,yaw_deg\n" : "t_s,lat_deg,lon_deg,alt_m\n");
    for (const TrackFix& f : track.fixes) {
        out << csv::format_double(f.t_s, 12) << "," << csv::format_double(f.position.latitude_deg, 12)
            << "," << csv::format_double(f.position.longitude_deg, 12) << ","
            << csv::format_double(f.position.altitude_m, 12);
        if (yaw) {
            out << ",";
            if (f.yaw_deg) out << csv::format_double(*f.yaw_deg, 12);
        }
        out << "\n";
    }
}

void emit_samples(std::ostream& out, const std::vector<MeasurementSample>& samples) {
    out << "t_s,p_dbm\n";
    for (const MeasurementSample& s : samples) {
        out << csv::format_double(s.t_s, 12) << "," << csv::format_double(s.received_power_dbm, 12)
            << "\n";
    }
}

namespace {

double lerp_circular_deg(double a, double b, double w) {
    double diff = std::fmod(b - a, 360.0);
    if (diff > 180.0) diff -= 360.0;
    if (diff <= -180.0) diff += 360.0;
    return wrap_azimuth_deg(a + w * diff);
}

} // namespace

AlignResult align(const FlightTrack& track, const std::vector<MeasurementSample>& samples,
                  double clock_offset_s) {
    if (track.fixes.size() < 2) {
        throw Error(ErrorCategory::EmptyInput, "track has fewer than 2 fixes");
    }
    if (samples.empty()) {
        throw Error(ErrorCategory::EmptyInput, "no samples to align");
    }

    std::vector<Vec3> fix_ecef;
    fix_ecef.reserve(track.fixes.size());
    for (const TrackFix& f : track.fixes) fix_ecef.push_back(geodetic_to_ecef(f.position));

    std::vector<double> fix_t;
    fix_t.reserve(track.fixes.size());
    for (const TrackFix& f : track.fixes) fix_t.push_back(f.t_s);

    AlignResult result;
    for (const MeasurementSample& s : samples) {
        const double t = s.t_s + clock_offset_s;
        if (t < fix_t.front() || t > fix_t.back()) {
            ++result.dropped;
            continue;
        }
        auto it = std::upper_bound(fix_t.begin(), fix_t.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - fix_t.begin());
        if (hi == fix_t.size()) hi = fix_t.size() - 1; // t == last fix time
        if (hi == 0) hi = 1;                           // t == first fix time with duplicates
        const std::size_t lo = hi - 1;
        const double dt = fix_t[hi] - fix_t[lo];
        const double w = dt > 0.0 ? (t - fix_t[lo]) / dt : 0.0;

        // (1-w)*p0 + w*p1 keeps the endpoints bit-exact.
        const Vec3 p = fix_ecef[lo] * (1.0 - w) + fix_ecef[hi] * w;

        PositionedSample ps;
        ps.sample = s;
        ps.position = ecef_to_geodetic(p);
        const auto& ylo = track.fixes[lo].yaw_deg;
        const auto& yhi = track.fixes[hi].yaw_deg;
        if (ylo && yhi) {
            ps.yaw_deg = lerp_circular_deg(*ylo, *yhi, w);
        }
        result.positioned.push_back(ps);
    }
    if (result.positioned.empty()) {
        throw Error(ErrorCategory::NoOverlap, "no sample timestamps fall within the track span");
    }
    return result;
}

} // namespace aircal
