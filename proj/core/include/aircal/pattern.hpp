#pragma once

// Measured 3D antenna radiation patterns: chamber CSV loading, bilinear gain
// interpolation over the (azimuth, elevation) grid, extrema statistics and
// pattern-vs-pattern comparison (free-space vs on-airframe).

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aircal {

// Gridded gain surface in dBi. Azimuth is periodic: interpolation wraps from
// the last grid column back to the first (+360 deg). Gains are interpolated
// in dB, the usual convention for chamber data.
struct AntennaPattern {
    std::vector<double> azimuth_deg;   // strictly increasing, within [0, 360)
    std::vector<double> elevation_deg; // strictly increasing, within [-90, 90]
    std::vector<double> gain_dbi;      // row-major: [azimuth][elevation]
    std::string label;

    std::size_t n_azimuth() const { return azimuth_deg.size(); }
    std::size_t n_elevation() const { return elevation_deg.size(); }
    double node(std::size_t az_index, std::size_t el_index) const {
        return gain_dbi[az_index * elevation_deg.size() + el_index];
    }
    double& node(std::size_t az_index, std::size_t el_index) {
        return gain_dbi[az_index * elevation_deg.size() + el_index];
    }
};

// Constant-gain pattern on a minimal 2x2 grid; stands in for an isotropic
// antenna and for tests.
AntennaPattern make_uniform_pattern(double gain_dbi, std::string label = "isotropic");

// Validates the grid invariants (monotone axes, >= 2 points per axis, finite
// gains); throws MalformedGrid / NonFiniteGain with context.
void validate_pattern(const AntennaPattern& pattern);

// pattern-CSV: first row `el_deg,<el values...>`, then one row per azimuth:
// `az_deg,g(az,el_1),...` in dBi. Throws MalformedGrid, RaggedRows,
// NonFiniteGain with row/column context.
AntennaPattern load_pattern(std::istream& in, std::string label = "");
AntennaPattern load_pattern_file(const std::filesystem::path& path);
void emit_pattern(std::ostream& out, const AntennaPattern& pattern);

// Bilinear interpolation with periodic azimuth wraparound; elevation queries
// beyond the grid clamp to the nearest edge. Exact at grid nodes.
double gain_at(const AntennaPattern& pattern, double azimuth_deg, double elevation_deg);
double gain_at(const AntennaPattern& pattern, const struct LocalAngles& angles);

struct PatternStats {
    double max_gain_dbi = 0.0;
    double max_azimuth_deg = 0.0;
    double max_elevation_deg = 0.0;
    double min_gain_dbi = 0.0;
    double front_to_back_db = 0.0; // peak minus gain at the node nearest the antipode
};

// Extrema over grid nodes only (no interpolated extrema).
PatternStats pattern_stats(const AntennaPattern& pattern);

struct PatternDiff {
    AntennaPattern delta;       // a - b on the shared grid
    double mean_abs_db = 0.0;
    double max_abs_db = 0.0;
    double worst_azimuth_deg = 0.0;
    double worst_elevation_deg = 0.0;
};

// Elementwise a - b; requires identical grids (GridMismatch otherwise).
PatternDiff pattern_diff(const AntennaPattern& a, const AntennaPattern& b);

} // namespace aircal
