#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uvgb/detect.hpp"
#include "uvgb/geo.hpp"
#include "uvgb/image.hpp"

namespace uvgb {

/// Parallel crop rows running east-west at north = first_row_north_m + i * spacing_m.
struct RowLayout {
    int rows = 0;
    double first_row_north_m = 0.0;
    double spacing_m = 1.0;

    /// Index of the nearest row within half a spacing, or nullopt.
    std::optional<int> assign(double north_m) const;
};

inline constexpr double kDefaultDedupRadiusM = 0.1;

/// Greedy clustering by descending confidence (ties by input index): each
/// unclaimed seed absorbs every unclaimed point within radius_m, and absorbed
/// points keep absorbing, so clusters are radius-connected components. The
/// seed (first index) is the representative.
std::vector<std::vector<std::size_t>> dedup_clusters(const std::vector<GeoPoint>& points, double radius_m);

/// One representative per dedup cluster, in cluster order.
std::vector<GeoPoint> dedup_points(const std::vector<GeoPoint>& points, double radius_m);

struct SurveyFrame {
    MonoImage image;
    FramePose pose;
};

struct SurveyParams {
    TilingParams tiling;
    double dedup_radius_m = kDefaultDedupRadiusM;
    std::optional<RowLayout> rows;
    unsigned jobs = 1;
};

struct SurveyReport {
    std::size_t total = 0;          ///< deduplicated flower count
    std::vector<std::size_t> per_row;
    std::size_t off_row = 0;
    std::size_t raw_detections = 0; ///< sum of per-frame counts before dedup
    std::size_t frames = 0;
    std::vector<GeoPoint> points;   ///< deduplicated
};

/// Georeferences box centres, deduplicates globally and assigns rows.
SurveyReport survey_from_detections(const std::vector<FramePose>& poses,
                                    const std::vector<std::vector<Detection>>& detections,
                                    const CameraModel& cam, const GeoOrigin& origin, const SurveyParams& params);

/// Tiled detection on every frame followed by survey_from_detections.
SurveyReport survey_count(const std::vector<SurveyFrame>& frames, const DetectorHandle& handle,
                          const CameraModel& cam, const GeoOrigin& origin, const SurveyParams& params);

// Poses CSV: `frame_id,lat,lon,altitude_m,yaw_deg`.
std::vector<FramePose> parse_poses_csv(std::string_view text);
std::vector<FramePose> read_poses_csv(const std::filesystem::path& path);
std::string format_poses_csv(const std::vector<FramePose>& poses);

// Points CSV: `east_m,north_m,confidence,frame_id`.
std::string format_points_csv(const std::vector<GeoPoint>& points);
std::vector<GeoPoint> parse_points_csv(std::string_view text);

std::string survey_report_csv(const SurveyReport& report);
std::string survey_summary_json(const SurveyReport& report);

}  // namespace uvgb
