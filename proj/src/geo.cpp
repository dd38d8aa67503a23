#include "uvgb/geo.hpp"

#include <cmath>
#include <numbers>

#include "uvgb/error.hpp"

namespace uvgb {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

void FramePose::validate() const {
    if (!(std::abs(lat_deg) <= 90.0)) throw DataError("frame " + frame_id + ": latitude out of range");
    if (!(std::abs(lon_deg) <= 180.0)) throw DataError("frame " + frame_id + ": longitude out of range");
    if (!(altitude_agl_m > 0.0)) throw DataError("frame " + frame_id + ": altitude must be positive");
    if (!std::isfinite(yaw_rad)) throw DataError("frame " + frame_id + ": yaw is not finite");
}

LocalXY to_local(const GeoOrigin& origin, double lat_deg, double lon_deg) {
    return {kEarthRadiusM * (lon_deg - origin.lon_deg) * kDegToRad * std::cos(origin.lat_deg * kDegToRad),
            kEarthRadiusM * (lat_deg - origin.lat_deg) * kDegToRad};
}

GeoOrigin from_local(const GeoOrigin& origin, const LocalXY& xy) {
    return {origin.lat_deg + xy.north_m / kEarthRadiusM / kDegToRad,
            origin.lon_deg + xy.east_m / (kEarthRadiusM * std::cos(origin.lat_deg * kDegToRad)) / kDegToRad};
}

GeoPoint pixel_to_ground(const FramePose& pose, const CameraModel& cam, const GeoOrigin& origin, const PixelXY& px) {
    pose.validate();
    const double metres_per_px = compute_gsd(cam, pose.altitude_agl_m) / 100.0;
    const double dx = (px.x - cam.sensor_width_px / 2.0) * metres_per_px;
    const double dy = (px.y - cam.sensor_height_px / 2.0) * metres_per_px;
    const double s = std::sin(pose.yaw_rad);
    const double c = std::cos(pose.yaw_rad);
    const LocalXY centre = to_local(origin, pose.lat_deg, pose.lon_deg);
    GeoPoint p;
    p.east_m = centre.east_m + dx * c - dy * s;
    p.north_m = centre.north_m - dx * s - dy * c;
    p.frame_id = pose.frame_id;
    return p;
}

PixelXY ground_to_pixel(const FramePose& pose, const CameraModel& cam, const GeoOrigin& origin, const LocalXY& ground) {
    pose.validate();
    const double metres_per_px = compute_gsd(cam, pose.altitude_agl_m) / 100.0;
    const LocalXY centre = to_local(origin, pose.lat_deg, pose.lon_deg);
    const double e = ground.east_m - centre.east_m;
    const double n = ground.north_m - centre.north_m;
    const double s = std::sin(pose.yaw_rad);
    const double c = std::cos(pose.yaw_rad);
    const double dx = e * c - n * s;
    const double dy = -(e * s + n * c);
    return {dx / metres_per_px + cam.sensor_width_px / 2.0, dy / metres_per_px + cam.sensor_height_px / 2.0};
}

}  // namespace uvgb
