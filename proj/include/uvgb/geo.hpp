#pragma once

#include <string>

#include "uvgb/optics.hpp"

namespace uvgb {

/// Survey origin for the local tangent plane.
struct GeoOrigin {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

struct FramePose {
    std::string frame_id;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double altitude_agl_m = 1.0;
    double yaw_rad = 0.0;  ///< heading of the image "up" axis, clockwise from north

    void validate() const;  ///< throws DataError on out-of-range fields
};

/// Point on the local tangent plane (metres east/north of the origin).
struct GeoPoint {
    double east_m = 0.0;
    double north_m = 0.0;
    std::string frame_id;
    double confidence = 1.0;
};

struct LocalXY {
    double east_m = 0.0;
    double north_m = 0.0;
};

struct PixelXY {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr double kEarthRadiusM = 6378137.0;

// Equirectangular projection about the origin.
LocalXY to_local(const GeoOrigin& origin, double lat_deg, double lon_deg);
GeoOrigin from_local(const GeoOrigin& origin, const LocalXY& xy);  ///< returns (lat, lon) of xy

/// Nadir camera, flat ground. Pixel coordinates are continuous with the
/// image centre at (width/2, height/2); +x is right, +y is down.
GeoPoint pixel_to_ground(const FramePose& pose, const CameraModel& cam, const GeoOrigin& origin,
                         const PixelXY& px);

/// Inverse of pixel_to_ground for the same pose and camera.
PixelXY ground_to_pixel(const FramePose& pose, const CameraModel& cam, const GeoOrigin& origin,
                        const LocalXY& ground);

}  // namespace uvgb
