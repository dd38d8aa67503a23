#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "uvgb/geo.hpp"
#include "uvgb/optics.hpp"
#include "uvgb/survey.hpp"

namespace uvgb {

/// Synthetic strawberry field. Rows run east-west, plants sit on a regular
/// grid along each row, flowers are scattered around each plant.
struct FieldSpec {
    int rows = 3;
    int plants_per_row = 12;
    double plant_spacing_m = 0.45;
    double row_spacing_m = 1.2;
    double flowers_per_plant_mean = 3.0;
    double flowers_per_plant_spread = 1.0;  ///< count is uniform in mean ± spread
    double confuser_probability = 0.0;      ///< chance a plant carries one UV-bright fruit
    double flower_radius_px_min = 3.0;
    double flower_radius_px_max = 5.0;
    double canopy_radius_m = 0.2;
    double min_separation_m = 0.15;
    std::uint64_t texture_seed = 7;

    void validate() const;
};

struct FlightSpec {
    double altitude_m = 3.0;
    double overlap = 0.3;  ///< fraction of the footprint shared by neighbouring frames
    CameraModel camera;
    GeoOrigin origin{46.1667, -71.8833};
    double margin_m = 0.3;  ///< extra coverage around the field bounding box

    void validate() const;
};

struct PlantedObject {
    LocalXY position;
    double radius_px = 0.0;
    std::uint8_t brightness = 255;
};

struct SimulatedSurvey {
    std::vector<SurveyFrame> frames;
    std::vector<std::vector<Annotation>> annotations;  ///< flower boxes per frame
    std::vector<PlantedObject> flowers;
    std::vector<PlantedObject> confusers;
    RowLayout rows;
    GeoOrigin origin;
    CameraModel camera;

    std::vector<GeoPoint> flower_points() const;
    std::vector<GeoPoint> confuser_points() const;
};

/// Places flowers and confusers for `field` (deterministic per seed).
void plant_field(const FieldSpec& field, std::uint64_t seed, std::vector<PlantedObject>& flowers,
                 std::vector<PlantedObject>& confusers);

/// Lawnmower frame poses covering the field bounding box with the requested
/// overlap. Tracks run east-west, stepping north.
std::vector<FramePose> plan_lawnmower(const FieldSpec& field, const FlightSpec& flight);

/// Renders every frame and its ground truth. Flowers and confusers are drawn
/// as equally bright disks on a dark textured background.
SimulatedSurvey simulate_survey(const FieldSpec& field, const FlightSpec& flight, std::uint64_t seed,
                                unsigned jobs = 1);

}  // namespace uvgb
