#pragma once

// WGS-84 geodetic <-> ECEF <-> local ENU conversions plus the ray geometry
// and antenna-frame angle extraction the rest of the toolkit is built on.
// All angles cross the API in degrees; radians stay internal.

#include <optional>

namespace aircal {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

// Row-major 3x3 matrix; rows are the target-frame basis vectors expressed in
// the source frame, so `m * v` maps source-frame coordinates to target-frame
// coordinates.
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    Vec3 operator*(const Vec3& v) const;
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
};

namespace wgs84 {
inline constexpr double kSemiMajorAxisM = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kSemiMinorAxisM = kSemiMajorAxisM * (1.0 - kFlattening);
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
} // namespace wgs84

inline constexpr double kSpeedOfLightMps = 299792458.0;

struct GeodeticPosition {
    double latitude_deg = 0.0;  // [-90, 90]
    double longitude_deg = 0.0; // normalized to [-180, 180)
    double altitude_m = 0.0;    // above the WGS-84 ellipsoid
};

struct EnuVector {
    double east_m = 0.0;
    double north_m = 0.0;
    double up_m = 0.0;

    EnuVector operator+(const EnuVector& o) const {
        return {east_m + o.east_m, north_m + o.north_m, up_m + o.up_m};
    }
    EnuVector operator-(const EnuVector& o) const {
        return {east_m - o.east_m, north_m - o.north_m, up_m - o.up_m};
    }
    double norm() const;
};

struct RayGeometry {
    double distance3d_m = 0.0;
    double azimuth_deg = 0.0;   // clockwise from true north, [0, 360)
    double elevation_deg = 0.0; // above horizontal, [-90, 90]
};

// Orientation of an antenna boresight: intrinsic yaw (azimuth), then uptilt
// (pitch), then roll about the boresight.
struct MountOrientation {
    double boresight_azimuth_deg = 0.0; // [0, 360), clockwise from north
    double uptilt_deg = 0.0;            // elevation of the boresight, [-90, 90]
    double roll_deg = 0.0;              // positive rolls "up" toward "right"
};

struct LocalAngles {
    double azimuth_deg = 0.0;   // [0, 360), clockwise around boresight's up axis
    double elevation_deg = 0.0; // [-90, 90]
};

double deg2rad(double deg);
double rad2deg(double rad);

// Folds any longitude into [-180, 180).
double normalize_longitude_deg(double lon_deg);
// Folds any azimuth-like angle into [0, 360).
double wrap_azimuth_deg(double az_deg);
bool is_valid_geodetic(const GeodeticPosition& pos);

Vec3 geodetic_to_ecef(const GeodeticPosition& pos);
GeodeticPosition ecef_to_geodetic(const Vec3& ecef);

// Rotation taking an ECEF displacement into the ENU tangent frame at origin.
Mat3 enu_rotation(const GeodeticPosition& origin);
EnuVector ecef_to_enu(const Vec3& point_ecef, const GeodeticPosition& origin);
Vec3 enu_to_ecef(const EnuVector& enu, const GeodeticPosition& origin);
EnuVector geodetic_to_enu(const GeodeticPosition& point, const GeodeticPosition& origin);
GeodeticPosition enu_to_geodetic(const EnuVector& enu, const GeodeticPosition& origin);

// Distance plus global pointing angles of the ray tx -> rx. Throws
// ZeroDistance when tx == rx (degenerate sample, caller must drop it).
// A perfectly vertical ray reports azimuth 0.
RayGeometry ray_geometry(const EnuVector& tx, const EnuVector& rx);

// Unit ENU direction for global (azimuth, elevation) and back.
Vec3 direction_from_angles(double azimuth_deg, double elevation_deg);
LocalAngles angles_from_direction(const Vec3& direction);

// World(ENU) -> antenna-frame rotation for a mount: rows are the antenna's
// forward/right/up axes in world coordinates. Compose attitudes by matrix
// product: world_to_antenna(offset) * world_to_antenna(vehicle attitude).
Mat3 world_to_antenna_matrix(const MountOrientation& mount);
LocalAngles angles_in_frame(const Mat3& world_to_antenna, const Vec3& world_direction);

// Local antenna angles of a ray; the boresight itself maps to (0, 0).
LocalAngles world_to_antenna_frame(const RayGeometry& ray, const MountOrientation& mount);

} // namespace aircal
