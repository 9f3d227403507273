#include "aircal/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"
#include "aircal/geodesy.hpp"

namespace aircal {

AntennaPattern make_uniform_pattern(double gain_dbi, std::string label) {
    AntennaPattern p;
    p.azimuth_deg = {0.0, 180.0};
    p.elevation_deg = {-90.0, 90.0};
    p.gain_dbi.assign(4, gain_dbi);
    p.label = std::move(label);
    return p;
}

namespace {

void check_axis(const std::vector<double>& axis, double lo, double hi, bool hi_inclusive,
                const char* name) {
    if (axis.size() < 2) {
        throw Error(ErrorCategory::MalformedGrid,
                    std::string(name) + " axis needs at least 2 grid points");
    }
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double v = axis[i];
        if (!std::isfinite(v) || v < lo || v > hi || (!hi_inclusive && v == hi)) {
            throw Error(ErrorCategory::MalformedGrid, std::string(name) + " value " +
                                                          csv::format_double(v) + " at index " +
                                                          std::to_string(i) + " out of range");
        }
        if (i > 0 && !(axis[i] > axis[i - 1])) {
            throw Error(ErrorCategory::MalformedGrid,
                        std::string(name) + " axis not strictly increasing at index " +
                            std::to_string(i) + " (" + csv::format_double(axis[i - 1]) + " -> " +
                            csv::format_double(v) + ")");
        }
    }
}

} // namespace

void validate_pattern(const AntennaPattern& pattern) {
    check_axis(pattern.azimuth_deg, 0.0, 360.0, false, "azimuth");
    check_axis(pattern.elevation_deg, -90.0, 90.0, true, "elevation");
    if (pattern.gain_dbi.size() != pattern.n_azimuth() * pattern.n_elevation()) {
        throw Error(ErrorCategory::RaggedRows, "gain matrix is " +
                                                   std::to_string(pattern.gain_dbi.size()) +
                                                   " values, grid wants " +
                                                   std::to_string(pattern.n_azimuth() * pattern.n_elevation()));
    }
    for (std::size_t i = 0; i < pattern.n_azimuth(); ++i) {
        for (std::size_t j = 0; j < pattern.n_elevation(); ++j) {
            if (!std::isfinite(pattern.node(i, j))) {
                throw Error(ErrorCategory::NonFiniteGain,
                            "non-finite gain at azimuth row " + std::to_string(i) +
                                ", elevation column " + std::to_string(j));
            }
        }
    }
}

AntennaPattern load_pattern(std::istream& in, std::string label) {
    AntennaPattern p;
    p.label = std::move(label);

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = csv::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tokens = csv::split_line(t);
        if (!have_header) {
            if (tokens.empty() || tokens[0] != "el_deg") {
                throw Error(ErrorCategory::MalformedGrid,
                            "line " + std::to_string(line_no) + ": expected 'el_deg' header row");
            }
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                double v;
                if (!csv::parse_double(tokens[i], v)) {
                    throw Error(ErrorCategory::MalformedGrid,
                                "line " + std::to_string(line_no) + ", column " + std::to_string(i + 1) +
                                    ": cannot parse elevation '" + tokens[i] + "'");
                }
                p.elevation_deg.push_back(v);
            }
            have_header = true;
            continue;
        }
        if (tokens.size() != p.elevation_deg.size() + 1) {
            throw Error(ErrorCategory::RaggedRows,
                        "line " + std::to_string(line_no) + ": expected " +
                            std::to_string(p.elevation_deg.size() + 1) + " fields, got " +
                            std::to_string(tokens.size()));
        }
        double az;
        if (!csv::parse_double(tokens[0], az)) {
            throw Error(ErrorCategory::MalformedGrid, "line " + std::to_string(line_no) +
                                                          ": cannot parse azimuth '" + tokens[0] + "'");
        }
        p.azimuth_deg.push_back(az);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            double g;
            if (!csv::parse_double(tokens[i], g)) {
                throw Error(ErrorCategory::MalformedGrid,
                            "line " + std::to_string(line_no) + ", column " + std::to_string(i + 1) +
                                ": cannot parse gain '" + tokens[i] + "'");
            }
            if (!std::isfinite(g)) {
                throw Error(ErrorCategory::NonFiniteGain,
                            "line " + std::to_string(line_no) + ", column " + std::to_string(i + 1) +
                                ": non-finite gain");
            }
            p.gain_dbi.push_back(g);
        }
    }
    if (!have_header) {
        throw Error(ErrorCategory::MalformedGrid, "pattern file has no header row");
    }
    validate_pattern(p);
    return p;
}

AntennaPattern load_pattern_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCategory::IoError, "cannot open pattern file " + path.string());
    }
    return load_pattern(in, path.stem().string());
}

void emit_pattern(std::ostream& out, const AntennaPattern& pattern) {
    if (!pattern.label.empty()) out << "# pattern: " << pattern.label << "\n";
    out << "el_deg";
    for (double el : pattern.elevation_deg) out << "," << csv::format_double(el, 12);
    out << "\n";
    for (std::size_t i = 0; i < pattern.n_azimuth(); ++i) {
        out << csv::format_double(pattern.azimuth_deg[i], 12);
        for (std::size_t j = 0; j < pattern.n_elevation(); ++j) {
            out << "," << csv::format_double(pattern.node(i, j), 12);
        }
        out << "\n";
    }
}

namespace {

struct Bracket {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

// Clamped, non-periodic bracket (elevation axis).
Bracket bracket_clamped(const std::vector<double>& axis, double v) {
    if (v <= axis.front()) return {0, 1, 0.0};
    if (v >= axis.back()) return {axis.size() - 2, axis.size() - 1, 1.0};
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    const std::size_t lo = hi - 1;
    return {lo, hi, (v - axis[lo]) / (axis[hi] - axis[lo])};
}

// Periodic bracket (azimuth axis); the seam cell spans last -> first + 360.
Bracket bracket_periodic(const std::vector<double>& axis, double v) {
    if (v < axis.front() || v >= axis.back()) {
        const double span = axis.front() + 360.0 - axis.back();
        double local = v - axis.back();
        if (local < 0.0) local += 360.0;
        return {axis.size() - 1, 0, local / span};
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    const std::size_t lo = hi - 1;
    return {lo, hi, (v - axis[lo]) / (axis[hi] - axis[lo])};
}

} // namespace

double gain_at(const AntennaPattern& pattern, double azimuth_deg, double elevation_deg) {
    const double az = wrap_azimuth_deg(azimuth_deg);
    const double el = std::fmin(90.0, std::fmax(-90.0, elevation_deg));

    const Bracket ab = bracket_periodic(pattern.azimuth_deg, az);
    const Bracket eb = bracket_clamped(pattern.elevation_deg, el);
    const double t = ab.frac;
    const double u = eb.frac;

    const double g00 = pattern.node(ab.lo, eb.lo);
    const double g10 = pattern.node(ab.hi, eb.lo);
    const double g01 = pattern.node(ab.lo, eb.hi);
    const double g11 = pattern.node(ab.hi, eb.hi);
    // Constant cells come back bit-exact; a uniform pattern is then immune to
    // angle perturbations identically, not just to rounding.
    if (g00 == g10 && g00 == g01 && g00 == g11) return g00;

    return (1.0 - t) * (1.0 - u) * g00 + t * (1.0 - u) * g10 + (1.0 - t) * u * g01 + t * u * g11;
}

double gain_at(const AntennaPattern& pattern, const LocalAngles& angles) {
    return gain_at(pattern, angles.azimuth_deg, angles.elevation_deg);
}

PatternStats pattern_stats(const AntennaPattern& pattern) {
    PatternStats s;
    std::size_t max_i = 0, max_j = 0;
    s.max_gain_dbi = pattern.node(0, 0);
    s.min_gain_dbi = pattern.node(0, 0);
    for (std::size_t i = 0; i < pattern.n_azimuth(); ++i) {
        for (std::size_t j = 0; j < pattern.n_elevation(); ++j) {
            const double g = pattern.node(i, j);
            if (g > s.max_gain_dbi) {
                s.max_gain_dbi = g;
                max_i = i;
                max_j = j;
            }
            s.min_gain_dbi = std::min(s.min_gain_dbi, g);
        }
    }
    s.max_azimuth_deg = pattern.azimuth_deg[max_i];
    s.max_elevation_deg = pattern.elevation_deg[max_j];

    // Back direction: antipode of the peak, snapped to the nearest grid node.
    const double back_az = wrap_azimuth_deg(s.max_azimuth_deg + 180.0);
    const double back_el = -s.max_elevation_deg;
    std::size_t bi = 0, bj = 0;
    double best_az_dist = 360.0;
    for (std::size_t i = 0; i < pattern.n_azimuth(); ++i) {
        double d = std::abs(pattern.azimuth_deg[i] - back_az);
        d = std::min(d, 360.0 - d);
        if (d < best_az_dist) {
            best_az_dist = d;
            bi = i;
        }
    }
    double best_el_dist = 1e9;
    for (std::size_t j = 0; j < pattern.n_elevation(); ++j) {
        const double d = std::abs(pattern.elevation_deg[j] - back_el);
        if (d < best_el_dist) {
            best_el_dist = d;
            bj = j;
        }
    }
    s.front_to_back_db = s.max_gain_dbi - pattern.node(bi, bj);
    return s;
}

PatternDiff pattern_diff(const AntennaPattern& a, const AntennaPattern& b) {
    if (a.azimuth_deg != b.azimuth_deg || a.elevation_deg != b.elevation_deg) {
        throw Error(ErrorCategory::GridMismatch, "patterns '" + a.label + "' and '" + b.label +
                                                     "' are not on the same grid");
    }
    PatternDiff d;
    d.delta.azimuth_deg = a.azimuth_deg;
    d.delta.elevation_deg = a.elevation_deg;
    d.delta.label = a.label + " - " + b.label;
    d.delta.gain_dbi.resize(a.gain_dbi.size());

    double sum_abs = 0.0;
    std::size_t worst_i = 0, worst_j = 0;
    for (std::size_t i = 0; i < a.n_azimuth(); ++i) {
        for (std::size_t j = 0; j < a.n_elevation(); ++j) {
            const double delta = a.node(i, j) - b.node(i, j);
            d.delta.node(i, j) = delta;
            const double mag = std::abs(delta);
            sum_abs += mag;
            if (mag > d.max_abs_db) {
                d.max_abs_db = mag;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    d.mean_abs_db = sum_abs / static_cast<double>(a.gain_dbi.size());
    d.worst_azimuth_deg = a.azimuth_deg[worst_i];
    d.worst_elevation_deg = a.elevation_deg[worst_j];
    return d;
}

} // namespace aircal
