#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace uvgb {

/// Pinhole camera. Units are fixed: millimetres, micrometres, pixels.
struct CameraModel {
    double focal_length_mm = 3.6;
    /// Effective pixel size at the capture resolution in use.
    double pixel_pitch_um = 13.9;
    int sensor_width_px = 640;
    int sensor_height_px = 480;

    void validate() const;  ///< throws UsageError unless every field is > 0
};

/// Ground sampling distance in cm/px at the given altitude (metres):
/// pitch[um] * altitude[m] / (focal[mm] * 10).
double compute_gsd(const CameraModel& cam, double altitude_m);

/// Altitude (metres) that yields target_gsd_cm_per_px.
double altitude_for_gsd(const CameraModel& cam, double target_gsd_cm_per_px);

struct Footprint {
    double width_m = 0.0;
    double height_m = 0.0;
};

Footprint ground_footprint(const CameraModel& cam, double altitude_m);

// The UV-G-B X-Nite configuration: 3.6 mm lens, 13.9 um effective pitch.
// "xnite" captures at 640x480, "xnite-8mp" at the full 3264x2448.
CameraModel xnite_camera();
CameraModel xnite_8mp_camera();

using CameraProfiles = std::map<std::string, CameraModel, std::less<>>;

/// Built-in profiles ("xnite", "xnite-8mp").
CameraProfiles builtin_camera_profiles();

// Profile file: { "cameras": { "<name>": { "focal_length_mm": 3.6,
//   "pixel_pitch_um": 13.9, "sensor_width_px": 640, "sensor_height_px": 480 } } }
// Entries override built-ins with the same name.
CameraProfiles load_camera_profiles(const std::filesystem::path& path);

/// Looks `name` up in profiles; throws UsageError if absent.
CameraModel find_camera(const CameraProfiles& profiles, std::string_view name);

}  // namespace uvgb
