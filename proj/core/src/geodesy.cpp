#include "aircal/geodesy.hpp"

#include <cmath>

#include "aircal/errors.hpp"

namespace aircal {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Mat3::operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        }
    }
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = m[j][i];
        }
    }
    return r;
}

double EnuVector::norm() const {
    return std::sqrt(east_m * east_m + north_m * north_m + up_m * up_m);
}

double deg2rad(double deg) { return deg * (kPi / 180.0); }
double rad2deg(double rad) { return rad * (180.0 / kPi); }

double normalize_longitude_deg(double lon_deg) {
    double lon = std::fmod(lon_deg + 180.0, 360.0);
    if (lon < 0.0) lon += 360.0;
    return lon - 180.0;
}

double wrap_azimuth_deg(double az_deg) {
    double az = std::fmod(az_deg, 360.0);
    if (az < 0.0) az += 360.0;
    if (az == 360.0) az = 0.0; // fmod can land exactly on 360 after the += above
    return az;
}

bool is_valid_geodetic(const GeodeticPosition& pos) {
    return std::isfinite(pos.latitude_deg) && std::isfinite(pos.longitude_deg) &&
           std::isfinite(pos.altitude_m) && pos.latitude_deg >= -90.0 && pos.latitude_deg <= 90.0 &&
           pos.longitude_deg >= -180.0 && pos.longitude_deg < 180.0;
}

Vec3 geodetic_to_ecef(const GeodeticPosition& pos) {
    const double lat = deg2rad(pos.latitude_deg);
    const double lon = deg2rad(pos.longitude_deg);
    const double sin_lat = std::sin(lat);
    const double cos_lat = std::cos(lat);
    // prime-vertical radius of curvature
    const double n = wgs84::kSemiMajorAxisM / std::sqrt(1.0 - wgs84::kEccentricitySq * sin_lat * sin_lat);
    return {(n + pos.altitude_m) * cos_lat * std::cos(lon),
            (n + pos.altitude_m) * cos_lat * std::sin(lon),
            (n * (1.0 - wgs84::kEccentricitySq) + pos.altitude_m) * sin_lat};
}

GeodeticPosition ecef_to_geodetic(const Vec3& ecef) {
    const double a = wgs84::kSemiMajorAxisM;
    const double b = wgs84::kSemiMinorAxisM;
    const double e2 = wgs84::kEccentricitySq;

    const double rho = std::hypot(ecef.x, ecef.y);
    if (rho < 1e-9) {
        // On the polar axis the longitude is undefined; report 0.
        return {ecef.z >= 0.0 ? 90.0 : -90.0, 0.0, std::abs(ecef.z) - b};
    }
    const double lon = std::atan2(ecef.y, ecef.x);

    // Fixed-point iteration on the latitude; converges to machine precision
    // in a handful of steps everywhere off the polar axis.
    double phi = std::atan2(ecef.z, rho * (1.0 - e2));
    double n = a;
    double h = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double sin_phi = std::sin(phi);
        n = a / std::sqrt(1.0 - e2 * sin_phi * sin_phi);
        h = rho / std::cos(phi) - n;
        const double phi_next = std::atan2(ecef.z, rho * (1.0 - e2 * n / (n + h)));
        const bool converged = std::abs(phi_next - phi) < 1e-15;
        phi = phi_next;
        if (converged) break;
    }
    const double sin_phi = std::sin(phi);
    n = a / std::sqrt(1.0 - e2 * sin_phi * sin_phi);
    h = rho / std::cos(phi) - n;

    return {rad2deg(phi), normalize_longitude_deg(rad2deg(lon)), h};
}

Mat3 enu_rotation(const GeodeticPosition& origin) {
    const double lat = deg2rad(origin.latitude_deg);
    const double lon = deg2rad(origin.longitude_deg);
    const double sin_lat = std::sin(lat), cos_lat = std::cos(lat);
    const double sin_lon = std::sin(lon), cos_lon = std::cos(lon);
    Mat3 r;
    r.m[0][0] = -sin_lon;
    r.m[0][1] = cos_lon;
    r.m[0][2] = 0.0;
    r.m[1][0] = -sin_lat * cos_lon;
    r.m[1][1] = -sin_lat * sin_lon;
    r.m[1][2] = cos_lat;
    r.m[2][0] = cos_lat * cos_lon;
    r.m[2][1] = cos_lat * sin_lon;
    r.m[2][2] = sin_lat;
    return r;
}

EnuVector ecef_to_enu(const Vec3& point_ecef, const GeodeticPosition& origin) {
    const Vec3 d = point_ecef - geodetic_to_ecef(origin);
    const Vec3 enu = enu_rotation(origin) * d;
    return {enu.x, enu.y, enu.z};
}

Vec3 enu_to_ecef(const EnuVector& enu, const GeodeticPosition& origin) {
    const Vec3 d = enu_rotation(origin).transposed() * Vec3{enu.east_m, enu.north_m, enu.up_m};
    return geodetic_to_ecef(origin) + d;
}

EnuVector geodetic_to_enu(const GeodeticPosition& point, const GeodeticPosition& origin) {
    return ecef_to_enu(geodetic_to_ecef(point), origin);
}

GeodeticPosition enu_to_geodetic(const EnuVector& enu, const GeodeticPosition& origin) {
    return ecef_to_geodetic(enu_to_ecef(enu, origin));
}

RayGeometry ray_geometry(const EnuVector& tx, const EnuVector& rx) {
    const EnuVector d = rx - tx;
    const double dist = d.norm();
    if (dist == 0.0) {
        throw Error(ErrorCategory::ZeroDistance, "ray endpoints coincide");
    }
    double az;
    if (d.east_m == 0.0 && d.north_m == 0.0) {
        az = 0.0; // vertical ray: azimuth is degenerate, pin it to 0
    } else {
        az = wrap_azimuth_deg(rad2deg(std::atan2(d.east_m, d.north_m)));
    }
    double s = d.up_m / dist;
    s = std::fmin(1.0, std::fmax(-1.0, s));
    return {dist, az, rad2deg(std::asin(s))};
}

Vec3 direction_from_angles(double azimuth_deg, double elevation_deg) {
    const double az = deg2rad(azimuth_deg);
    const double el = deg2rad(elevation_deg);
    return {std::sin(az) * std::cos(el), std::cos(az) * std::cos(el), std::sin(el)};
}

LocalAngles angles_from_direction(const Vec3& direction) {
    const double n = direction.norm();
    double az;
    if (direction.x == 0.0 && direction.y == 0.0) {
        az = 0.0;
    } else {
        az = wrap_azimuth_deg(rad2deg(std::atan2(direction.x, direction.y)));
    }
    double s = direction.z / n;
    s = std::fmin(1.0, std::fmax(-1.0, s));
    return {az, rad2deg(std::asin(s))};
}

Mat3 world_to_antenna_matrix(const MountOrientation& mount) {
    const double yaw = deg2rad(mount.boresight_azimuth_deg);
    const double pitch = deg2rad(mount.uptilt_deg);
    const double roll = deg2rad(mount.roll_deg);

    // Yaw about up, clockwise from north.
    Vec3 fwd{std::sin(yaw), std::cos(yaw), 0.0};
    Vec3 right{std::cos(yaw), -std::sin(yaw), 0.0};
    Vec3 up{0.0, 0.0, 1.0};

    // Pitch up about the right axis.
    const Vec3 fwd_p = fwd * std::cos(pitch) + up * std::sin(pitch);
    const Vec3 up_p = up * std::cos(pitch) - fwd * std::sin(pitch);
    fwd = fwd_p;
    up = up_p;

    // Roll about the boresight; positive brings up toward right.
    const Vec3 right_r = right * std::cos(roll) - up * std::sin(roll);
    const Vec3 up_r = up * std::cos(roll) + right * std::sin(roll);
    right = right_r;
    up = up_r;

    // Antenna frame coordinates are ordered (right, forward, up) so they are
    // structurally another ENU triple: an identity mount gives the identity
    // matrix and nested mounts compose by plain matrix product.
    Mat3 r;
    r.m[0][0] = right.x;
    r.m[0][1] = right.y;
    r.m[0][2] = right.z;
    r.m[1][0] = fwd.x;
    r.m[1][1] = fwd.y;
    r.m[1][2] = fwd.z;
    r.m[2][0] = up.x;
    r.m[2][1] = up.y;
    r.m[2][2] = up.z;
    return r;
}

LocalAngles angles_in_frame(const Mat3& world_to_antenna, const Vec3& world_direction) {
    const Vec3 local = world_to_antenna * world_direction;
    return angles_from_direction(local);
}

LocalAngles world_to_antenna_frame(const RayGeometry& ray, const MountOrientation& mount) {
    const Vec3 dir = direction_from_angles(ray.azimuth_deg, ray.elevation_deg);
    return angles_in_frame(world_to_antenna_matrix(mount), dir);
}

} // namespace aircal
