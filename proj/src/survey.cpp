#include "uvgb/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "uvgb/csv.hpp"
#include "uvgb/error.hpp"
#include "uvgb/parallel.hpp"

namespace uvgb {

std::optional<int> RowLayout::assign(double north_m) const {
    if (rows <= 0 || !(spacing_m > 0.0)) return std::nullopt;
    const double pos = (north_m - first_row_north_m) / spacing_m;
    const int idx = std::clamp(static_cast<int>(std::lround(pos)), 0, rows - 1);
    if (std::abs(north_m - (first_row_north_m + idx * spacing_m)) <= spacing_m / 2.0) return idx;
    return std::nullopt;
}

std::vector<std::vector<std::size_t>> dedup_clusters(const std::vector<GeoPoint>& points, double radius_m) {
    if (!(radius_m > 0.0)) throw UsageError("dedup radius must be positive");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].confidence > points[b].confidence; });
    const double r2 = radius_m * radius_m;
    std::vector<bool> claimed(points.size(), false);
    std::vector<std::vector<std::size_t>> clusters;
    for (const std::size_t seed : order) {
        if (claimed[seed]) continue;
        claimed[seed] = true;
        std::vector<std::size_t> members{seed};
        // Absorbed points absorb in turn, so a cluster is a whole
        // radius-connected component.
        for (std::size_t next = 0; next < members.size(); ++next) {
            const GeoPoint& from = points[members[next]];
            for (const std::size_t other : order) {
                if (claimed[other]) continue;
                const double de = points[other].east_m - from.east_m;
                const double dn = points[other].north_m - from.north_m;
                if (de * de + dn * dn <= r2) {
                    claimed[other] = true;
                    members.push_back(other);
                }
            }
        }
        clusters.push_back(std::move(members));
    }
    return clusters;
}

std::vector<GeoPoint> dedup_points(const std::vector<GeoPoint>& points, double radius_m) {
    std::vector<GeoPoint> out;
    for (const auto& cluster : dedup_clusters(points, radius_m)) out.push_back(points[cluster.front()]);
    return out;
}

SurveyReport survey_from_detections(const std::vector<FramePose>& poses,
                                    const std::vector<std::vector<Detection>>& detections, const CameraModel& cam,
                                    const GeoOrigin& origin, const SurveyParams& params) {
    if (poses.size() != detections.size()) throw UsageError("one detection list per pose is required");
    cam.validate();
    std::vector<GeoPoint> raw;
    for (std::size_t i = 0; i < poses.size(); ++i) {
        poses[i].validate();
        for (const auto& d : detections[i]) {
            GeoPoint p = pixel_to_ground(poses[i], cam, origin, {d.bbox.center_x(), d.bbox.center_y()});
            p.confidence = d.confidence;
            raw.push_back(std::move(p));
        }
    }

    SurveyReport report;
    report.frames = poses.size();
    report.raw_detections = raw.size();
    report.points = dedup_points(raw, params.dedup_radius_m);
    report.total = report.points.size();
    if (params.rows) report.per_row.assign(static_cast<std::size_t>(std::max(0, params.rows->rows)), 0);
    for (const auto& p : report.points) {
        const auto row = params.rows ? params.rows->assign(p.north_m) : std::nullopt;
        if (row) {
            ++report.per_row[static_cast<std::size_t>(*row)];
        } else {
            ++report.off_row;
        }
    }
    return report;
}

SurveyReport survey_count(const std::vector<SurveyFrame>& frames, const DetectorHandle& handle, const CameraModel& cam,
                          const GeoOrigin& origin, const SurveyParams& params) {
    handle.validate();
    std::vector<std::vector<Detection>> dets(frames.size());
    parallel_for(frames.size(), params.jobs,
                 [&](std::size_t i) { dets[i] = detect_frame_tiled(handle, frames[i].image, params.tiling); });
    std::vector<FramePose> poses;
    poses.reserve(frames.size());
    for (const auto& f : frames) poses.push_back(f.pose);
    return survey_from_detections(poses, dets, cam, origin, params);
}

std::vector<FramePose> parse_poses_csv(std::string_view text) {
    std::vector<FramePose> poses;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = csv::split_line(line);
        const std::string where = "row " + std::to_string(line_no);
        if (!header) {
            if (f != std::vector<std::string>{"frame_id", "lat", "lon", "altitude_m", "yaw_deg"}) {
                throw DataError(where + ": expected header frame_id,lat,lon,altitude_m,yaw_deg");
            }
            header = true;
            continue;
        }
        if (f.size() != 5) throw DataError(where + ": expected 5 fields, got " + std::to_string(f.size()));
        FramePose p;
        p.frame_id = f[0];
        p.lat_deg = csv::to_double(f[1], where + " lat");
        p.lon_deg = csv::to_double(f[2], where + " lon");
        p.altitude_agl_m = csv::to_double(f[3], where + " altitude_m");
        p.yaw_rad = csv::to_double(f[4], where + " yaw_deg") * std::numbers::pi / 180.0;
        p.validate();
        poses.push_back(std::move(p));
    }
    if (!header) throw DataError("row 1: empty poses file");
    return poses;
}

std::vector<FramePose> read_poses_csv(const std::filesystem::path& path) {
    try {
        return parse_poses_csv(csv::read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string format_poses_csv(const std::vector<FramePose>& poses) {
    std::string out = "frame_id,lat,lon,altitude_m,yaw_deg\n";
    for (const auto& p : poses) {
        out += p.frame_id + "," + csv::format_double(p.lat_deg) + "," + csv::format_double(p.lon_deg) + "," +
               csv::format_double(p.altitude_agl_m) + "," + csv::format_double(p.yaw_rad * 180.0 / std::numbers::pi) +
               "\n";
    }
    return out;
}

std::string format_points_csv(const std::vector<GeoPoint>& points) {
    std::string out = "east_m,north_m,confidence,frame_id\n";
    for (const auto& p : points) {
        out += csv::format_double(p.east_m) + "," + csv::format_double(p.north_m) + "," +
               csv::format_double(p.confidence) + "," + p.frame_id + "\n";
    }
    return out;
}

std::vector<GeoPoint> parse_points_csv(std::string_view text) {
    std::vector<GeoPoint> points;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = csv::split_line(line);
        const std::string where = "row " + std::to_string(line_no);
        if (f.size() != 4) throw DataError(where + ": expected 4 fields");
        points.push_back({csv::to_double(f[0], where + " east_m"), csv::to_double(f[1], where + " north_m"), f[3],
                          csv::to_double(f[2], where + " confidence")});
    }
    return points;
}

std::string survey_report_csv(const SurveyReport& report) {
    std::string out = "scope,count\n";
    out += "total," + std::to_string(report.total) + "\n";
    for (std::size_t i = 0; i < report.per_row.size(); ++i) {
        out += "row_" + std::to_string(i) + "," + std::to_string(report.per_row[i]) + "\n";
    }
    out += "off_row," + std::to_string(report.off_row) + "\n";
    out += "raw_detections," + std::to_string(report.raw_detections) + "\n";
    out += "frames," + std::to_string(report.frames) + "\n";
    return out;
}

std::string survey_summary_json(const SurveyReport& report) {
    nlohmann::ordered_json doc;
    doc["total"] = report.total;
    doc["per_row"] = report.per_row;
    doc["off_row"] = report.off_row;
    doc["raw_detections"] = report.raw_detections;
    doc["frames"] = report.frames;
    return doc.dump(2) + "\n";
}

}  // namespace uvgb
