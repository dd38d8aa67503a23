#include "uvgb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uvgb/error.hpp"
#include "uvgb/parallel.hpp"
#include "uvgb/rng.hpp"
#include "uvgb/tiling.hpp"

namespace uvgb {

namespace {

constexpr double kCoarseCellM = 0.08;
constexpr double kFineCellM = 0.02;
constexpr int kPlacementAttempts = 64;

double lattice_value(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    const auto h = derive_seed(seed ^ (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL),
                               static_cast<std::uint64_t>(iy));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(double x, double y, double cell, std::uint64_t seed) {
    const double fx = x / cell;
    const double fy = y / cell;
    const auto ix = static_cast<std::int64_t>(std::floor(fx));
    const auto iy = static_cast<std::int64_t>(std::floor(fy));
    double tx = fx - static_cast<double>(ix);
    double ty = fy - static_cast<double>(iy);
    tx = tx * tx * (3 - 2 * tx);
    ty = ty * ty * (3 - 2 * ty);
    const double a = lattice_value(ix, iy, seed);
    const double b = lattice_value(ix + 1, iy, seed);
    const double c = lattice_value(ix, iy + 1, seed);
    const double d = lattice_value(ix + 1, iy + 1, seed);
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

struct Extent {
    double east_min, east_max, north_min, north_max;
};

Extent field_extent(const FieldSpec& field, double margin) {
    return {-field.canopy_radius_m - margin, (field.plants_per_row - 1) * field.plant_spacing_m + field.canopy_radius_m + margin,
            -field.canopy_radius_m - margin, (field.rows - 1) * field.row_spacing_m + field.canopy_radius_m + margin};
}

std::vector<double> track_centres(double lo, double hi, double footprint, double step) {
    const double span = hi - lo;
    const int n = span <= footprint ? 1 : 1 + static_cast<int>(std::ceil((span - footprint) / step - 1e-12));
    const double mid = (lo + hi) / 2.0;
    std::vector<double> centres;
    for (int i = 0; i < n; ++i) centres.push_back(mid + (i - (n - 1) / 2.0) * step);
    return centres;
}

bool far_enough(const LocalXY& p, const std::vector<PlantedObject>& a, const std::vector<PlantedObject>& b, double sep) {
    auto ok = [&](const std::vector<PlantedObject>& objs) {
        return std::all_of(objs.begin(), objs.end(), [&](const PlantedObject& o) {
            return std::hypot(o.position.east_m - p.east_m, o.position.north_m - p.north_m) >= sep;
        });
    };
    return ok(a) && ok(b);
}

PlantedObject place_near(Rng& rng, const LocalXY& plant, const FieldSpec& field, const std::vector<PlantedObject>& a,
                         const std::vector<PlantedObject>& b) {
    PlantedObject obj;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        // Crowded plants spill outward rather than stacking objects.
        const double reach = field.canopy_radius_m * (1.0 + 2.0 * attempt / kPlacementAttempts);
        const double r = reach * std::sqrt(rng.uniform());
        const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        obj.position = {plant.east_m + r * std::cos(theta), plant.north_m + r * std::sin(theta)};
        if (far_enough(obj.position, a, b, field.min_separation_m)) break;
    }
    obj.radius_px = rng.uniform(field.flower_radius_px_min, field.flower_radius_px_max);
    obj.brightness = static_cast<std::uint8_t>(235 + rng.below(21));
    return obj;
}

struct RenderedFrame {
    MonoImage image;
    std::vector<Annotation> annotations;
};

RenderedFrame render_frame(const FieldSpec& field, const FramePose& pose, const CameraModel& cam, const GeoOrigin& origin,
                           const std::vector<PlantedObject>& flowers, const std::vector<PlantedObject>& confusers) {
    const int w = cam.sensor_width_px;
    const int h = cam.sensor_height_px;
    RenderedFrame out{MonoImage(w, h), {}};

    // Ground position of a pixel centre is affine in (x, y).
    const GeoPoint o = pixel_to_ground(pose, cam, origin, {0.5, 0.5});
    const GeoPoint ox = pixel_to_ground(pose, cam, origin, {1.5, 0.5});
    const GeoPoint oy = pixel_to_ground(pose, cam, origin, {0.5, 1.5});
    const double ex = ox.east_m - o.east_m, nx = ox.north_m - o.north_m;
    const double ey = oy.east_m - o.east_m, ny = oy.north_m - o.north_m;
    const double canopy2 = field.canopy_radius_m * field.canopy_radius_m * 1.5;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double e = o.east_m + ex * x + ey * y;
            const double n = o.north_m + nx * x + ny * y;
            double v = 25.0 + 40.0 * value_noise(e, n, kCoarseCellM, field.texture_seed) +
                       20.0 * value_noise(e, n, kFineCellM, field.texture_seed + 1);
            // Foliage around each plant is somewhat brighter than soil.
            const int row = static_cast<int>(std::lround(n / field.row_spacing_m));
            const int plant = static_cast<int>(std::lround(e / field.plant_spacing_m));
            if (row >= 0 && row < field.rows && plant >= 0 && plant < field.plants_per_row) {
                const double de = e - plant * field.plant_spacing_m;
                const double dn = n - row * field.row_spacing_m;
                if (de * de + dn * dn <= canopy2) v += 35.0;
            }
            out.image.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 190L));
        }
    }

    const BBox frame_rect{0, 0, static_cast<double>(w), static_cast<double>(h)};
    auto draw = [&](const PlantedObject& obj, bool annotate) {
        const PixelXY c = ground_to_pixel(pose, cam, origin, obj.position);
        const double r = obj.radius_px;
        if (c.x + r < 0 || c.y + r < 0 || c.x - r > w || c.y - r > h) return;
        int x0 = w, y0 = h, x1 = -1, y1 = -1;
        for (int y = std::max(0, static_cast<int>(std::floor(c.y - r))); y <= std::min(h - 1, static_cast<int>(std::ceil(c.y + r))); ++y) {
            for (int x = std::max(0, static_cast<int>(std::floor(c.x - r))); x <= std::min(w - 1, static_cast<int>(std::ceil(c.x + r))); ++x) {
                const double dx = x + 0.5 - c.x;
                const double dy = y + 0.5 - c.y;
                if (dx * dx + dy * dy > r * r) continue;
                out.image.at(x, y) = obj.brightness;
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
        }
        if (!annotate || x1 < 0) return;
        const BBox full{c.x - r, c.y - r, 2 * r, 2 * r};
        if (intersect(full, frame_rect).area() < kDefaultMinVisibleFraction * full.area()) return;
        out.annotations.push_back({kFlowerClass, BBox{static_cast<double>(x0), static_cast<double>(y0),
                                                      static_cast<double>(x1 - x0 + 1), static_cast<double>(y1 - y0 + 1)}});
    };
    for (const auto& f : confusers) draw(f, false);
    for (const auto& f : flowers) draw(f, true);
    return out;
}

}  // namespace

void FieldSpec::validate() const {
    if (rows <= 0 || plants_per_row <= 0) throw UsageError("field needs at least one row and one plant per row");
    if (!(plant_spacing_m > 0.0) || !(row_spacing_m > 0.0)) throw UsageError("field spacings must be positive");
    if (!(flowers_per_plant_mean >= 0.0) || !(flowers_per_plant_spread >= 0.0)) {
        throw UsageError("flowers per plant must be non-negative");
    }
    if (!(confuser_probability >= 0.0 && confuser_probability <= 1.0)) throw UsageError("confuser probability must be in [0, 1]");
    if (!(flower_radius_px_min > 0.0 && flower_radius_px_min <= flower_radius_px_max)) {
        throw UsageError("flower radius range must satisfy 0 < min <= max");
    }
    if (!(canopy_radius_m >= 0.0) || !(min_separation_m >= 0.0)) throw UsageError("canopy radius and separation must be >= 0");
}

void FlightSpec::validate() const {
    camera.validate();
    if (!(altitude_m > 0.0)) throw UsageError("flight altitude must be positive");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw UsageError("frame overlap must be in [0, 1)");
    if (!(margin_m >= 0.0)) throw UsageError("coverage margin must be >= 0");
}

std::vector<GeoPoint> SimulatedSurvey::flower_points() const {
    std::vector<GeoPoint> pts;
    for (const auto& f : flowers) pts.push_back({f.position.east_m, f.position.north_m, "", 1.0});
    return pts;
}

std::vector<GeoPoint> SimulatedSurvey::confuser_points() const {
    std::vector<GeoPoint> pts;
    for (const auto& f : confusers) pts.push_back({f.position.east_m, f.position.north_m, "", 1.0});
    return pts;
}

void plant_field(const FieldSpec& field, std::uint64_t seed, std::vector<PlantedObject>& flowers,
                 std::vector<PlantedObject>& confusers) {
    field.validate();
    flowers.clear();
    confusers.clear();
    const long lo = std::max(0L, std::lround(field.flowers_per_plant_mean - field.flowers_per_plant_spread));
    const long hi = std::max(lo, std::lround(field.flowers_per_plant_mean + field.flowers_per_plant_spread));

    // Flowers and confusers draw from separate streams so enabling confusers
    // leaves the flower layout unchanged.
    Rng flower_rng(derive_seed(seed, 1));
    for (int r = 0; r < field.rows; ++r) {
        for (int p = 0; p < field.plants_per_row; ++p) {
            const LocalXY plant{p * field.plant_spacing_m, r * field.row_spacing_m};
            const auto n = lo + static_cast<long>(flower_rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
            for (long k = 0; k < n; ++k) flowers.push_back(place_near(flower_rng, plant, field, flowers, confusers));
        }
    }
    Rng confuser_rng(derive_seed(seed, 2));
    for (int r = 0; r < field.rows; ++r) {
        for (int p = 0; p < field.plants_per_row; ++p) {
            if (!confuser_rng.bernoulli(field.confuser_probability)) continue;
            const LocalXY plant{p * field.plant_spacing_m, r * field.row_spacing_m};
            confusers.push_back(place_near(confuser_rng, plant, field, flowers, confusers));
        }
    }
}

std::vector<FramePose> plan_lawnmower(const FieldSpec& field, const FlightSpec& flight) {
    field.validate();
    flight.validate();
    const Footprint fp = ground_footprint(flight.camera, flight.altitude_m);
    const Extent ext = field_extent(field, flight.margin_m);
    const auto xs = track_centres(ext.east_min, ext.east_max, fp.width_m, fp.width_m * (1.0 - flight.overlap));
    const auto ys = track_centres(ext.north_min, ext.north_max, fp.height_m, fp.height_m * (1.0 - flight.overlap));

    std::vector<FramePose> poses;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const std::size_t i = (j % 2 == 0) ? k : xs.size() - 1 - k;
            const GeoOrigin ll = from_local(flight.origin, {xs[i], ys[j]});
            FramePose pose;
            char id[32];
            std::snprintf(id, sizeof id, "frame_%04zu", poses.size());
            pose.frame_id = id;
            pose.lat_deg = ll.lat_deg;
            pose.lon_deg = ll.lon_deg;
            pose.altitude_agl_m = flight.altitude_m;
            pose.yaw_rad = 0.0;
            poses.push_back(std::move(pose));
        }
    }
    return poses;
}

SimulatedSurvey simulate_survey(const FieldSpec& field, const FlightSpec& flight, std::uint64_t seed, unsigned jobs) {
    SimulatedSurvey sim;
    plant_field(field, seed, sim.flowers, sim.confusers);
    const auto poses = plan_lawnmower(field, flight);
    sim.origin = flight.origin;
    sim.camera = flight.camera;
    sim.rows = {field.rows, 0.0, field.row_spacing_m};
    sim.frames.resize(poses.size());
    sim.annotations.resize(poses.size());
    parallel_for(poses.size(), jobs, [&](std::size_t i) {
        auto rendered = render_frame(field, poses[i], flight.camera, flight.origin, sim.flowers, sim.confusers);
        sim.frames[i] = {std::move(rendered.image), poses[i]};
        sim.annotations[i] = std::move(rendered.annotations);
    });
    return sim;
}

}  // namespace uvgb
