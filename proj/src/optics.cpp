#include "uvgb/optics.hpp"

#include <json.hpp>

#include "uvgb/csv.hpp"
#include "uvgb/error.hpp"

namespace uvgb {

void CameraModel::validate() const {
    if (!(focal_length_mm > 0.0) || !(pixel_pitch_um > 0.0) || sensor_width_px <= 0 || sensor_height_px <= 0) {
        throw UsageError("camera model fields must all be strictly positive");
    }
}

double compute_gsd(const CameraModel& cam, double altitude_m) {
    cam.validate();
    if (!(altitude_m > 0.0)) throw UsageError("altitude must be positive");
    // um * m / mm = 1e-6 m * m / 1e-3 m = 1e-3 m = 0.1 cm
    return cam.pixel_pitch_um * altitude_m / (cam.focal_length_mm * 10.0);
}

double altitude_for_gsd(const CameraModel& cam, double target_gsd_cm_per_px) {
    cam.validate();
    if (!(target_gsd_cm_per_px > 0.0)) throw UsageError("target GSD must be positive");
    return target_gsd_cm_per_px * cam.focal_length_mm * 10.0 / cam.pixel_pitch_um;
}

Footprint ground_footprint(const CameraModel& cam, double altitude_m) {
    const double gsd_m = compute_gsd(cam, altitude_m) / 100.0;
    return {gsd_m * cam.sensor_width_px, gsd_m * cam.sensor_height_px};
}

CameraModel xnite_camera() { return {3.6, 13.9, 640, 480}; }

CameraModel xnite_8mp_camera() { return {3.6, 13.9, 3264, 2448}; }

CameraProfiles builtin_camera_profiles() {
    return {{"xnite", xnite_camera()}, {"xnite-8mp", xnite_8mp_camera()}};
}

CameraProfiles load_camera_profiles(const std::filesystem::path& path) {
    CameraProfiles profiles = builtin_camera_profiles();
    try {
        const auto doc = nlohmann::json::parse(csv::read_file(path));
        for (const auto& [name, item] : doc.at("cameras").items()) {
            CameraModel cam;
            cam.focal_length_mm = item.at("focal_length_mm").get<double>();
            cam.pixel_pitch_um = item.at("pixel_pitch_um").get<double>();
            cam.sensor_width_px = item.at("sensor_width_px").get<int>();
            cam.sensor_height_px = item.at("sensor_height_px").get<int>();
            try {
                cam.validate();
            } catch (const UsageError& e) {
                throw DataError("camera profile '" + name + "': " + e.what());
            }
            profiles[name] = cam;
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed camera profile file " + path.string() + ": " + e.what());
    }
    return profiles;
}

CameraModel find_camera(const CameraProfiles& profiles, std::string_view name) {
    const auto it = profiles.find(name);
    if (it == profiles.end()) throw UsageError("unknown camera profile '" + std::string(name) + "'");
    return it->second;
}

}  // namespace uvgb
