#include "commands.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <memory>

#include <json.hpp>

#include "uvgb/augment.hpp"
#include "uvgb/csv.hpp"
#include "uvgb/dataset.hpp"
#include "uvgb/detect.hpp"
#include "uvgb/error.hpp"
#include "uvgb/eval.hpp"
#include "uvgb/image_io.hpp"
#include "uvgb/optics.hpp"
#include "uvgb/parallel.hpp"
#include "uvgb/radiometry.hpp"
#include "uvgb/simulator.hpp"
#include "uvgb/survey.hpp"
#include "uvgb/tiling.hpp"

namespace uvgb::cli {

namespace fs = std::filesystem;
using csv::format_double;

namespace {

fs::path prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir.string());
    return dir;
}

bool is_image_file(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm";
}

// Sorted image files of a directory, or the single file given.
std::vector<fs::path> list_images(const fs::path& input) {
    std::vector<fs::path> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::directory_iterator(input)) {
            if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    if (files.empty()) throw DataError("no .png or .pgm images found in " + input.string());
    return files;
}

std::map<std::string, fs::path> list_by_stem(const fs::path& dir, std::string_view ext) {
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) files[entry.path().stem().string()] = entry.path();
    }
    return files;
}

struct CameraOptions {
    std::string name = "xnite";
    std::string file;

    void add(CLI::App* sub) {
        sub->add_option("--camera", name, "Camera profile name (built-in: xnite, xnite-8mp)")->capture_default_str();
        sub->add_option("--camera-file", file, "JSON file with additional camera profiles")->check(CLI::ExistingFile);
    }
    CameraModel resolve() const {
        const auto profiles = file.empty() ? builtin_camera_profiles() : load_camera_profiles(file);
        return find_camera(profiles, name);
    }
};

struct DetectorOptions {
    std::string backend = "baseline";
    std::string model;
    int input_size = 416;
    int input_channels = 3;
    double threshold = kDefaultConfidenceThreshold;
    BlobDetectorConfig blob;
    TilingParams tiling;

    void add(CLI::App* sub) {
        sub->add_option("--backend", backend, "Detector backend")->check(CLI::IsMember({"baseline", "onnx"}))->capture_default_str();
        sub->add_option("--model", model, "ONNX model file for --backend onnx");
        sub->add_option("--input-size", input_size, "Square model input size for --backend onnx")->capture_default_str();
        sub->add_option("--input-channels", input_channels, "Model input channels (1 or 3)")->capture_default_str();
        sub->add_option("--threshold", threshold, "Confidence threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        sub->add_option("--brightness", blob.brightness_threshold, "Baseline binarisation threshold")->check(CLI::Range(0, 255))->capture_default_str();
        sub->add_option("--min-area", blob.min_area_px, "Baseline minimum blob area (px)")->capture_default_str();
        sub->add_option("--max-area", blob.max_area_px, "Baseline maximum blob area (px)")->capture_default_str();
        sub->add_option("--min-circularity", blob.min_circularity, "Baseline minimum circularity 4*pi*A/P^2")->capture_default_str();
        sub->add_option("--tile-size", tiling.tile_size, "Tile size (px)")->capture_default_str();
        sub->add_option("--overlap", tiling.overlap, "Tile overlap (px)")->capture_default_str();
        sub->add_option("--dedup-iou", tiling.dedup_iou, "IoU at which detections from overlapping tiles merge")->capture_default_str();
    }

    DetectorHandle resolve() const {
        if (backend == "baseline") return DetectorHandle::baseline(blob, threshold);
        if (model.empty()) throw UsageError("--backend onnx requires --model");
        OnnxModelConfig cfg;
        cfg.model_path = model;
        cfg.input_width = input_size;
        cfg.input_height = input_size;
        cfg.input_channels = input_channels;
        return DetectorHandle::external(make_onnx_backend(cfg), threshold);
    }
};

std::array<double, 3> parse_fractions(const std::string& text) {
    const auto fields = csv::split_line(text);
    if (fields.size() != 3) throw UsageError("--fractions needs three comma-separated values");
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        try {
            out[i] = csv::to_double(fields[i], "--fractions");
        } catch (const DataError& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

}  // namespace

void add_calibrate(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("calibrate", "Fit the pixel-to-%reflectance line from reflectance standards");
    auto samples = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    sub->add_option("--samples", *samples, "CSV: standard_id,percent_reflectance,mean_pixel_value")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", *out_dir, "Output directory (calibration.json, calibration.svg)")->required();
    sub->callback([=] {
        const auto data = read_samples_csv(*samples);
        const auto curve = fit_calibration(data);
        const auto dir = prepare_out_dir(*out_dir);
        csv::write_file(dir / "calibration.json", calibration_record(curve, data.size()));
        csv::write_file(dir / "calibration.svg", calibration_svg(data, curve));
        io.out << "slope=" << format_double(curve.slope) << "\nintercept=" << format_double(curve.intercept)
               << "\nr_squared=" << format_double(curve.r_squared) << "\n";
    });
}

void add_plan(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("plan", "Ground sampling distance for an altitude, or the altitude for a GSD");
    struct Opts {
        double altitude = 0.0;
        double gsd = 0.0;
        CameraOptions camera;
    };
    auto o = std::make_shared<Opts>();
    auto* alt = sub->add_option("--altitude", o->altitude, "Flight altitude above ground (m)");
    auto* gsd = sub->add_option("--gsd", o->gsd, "Target GSD (cm/px)");
    alt->excludes(gsd);
    gsd->excludes(alt);
    o->camera.add(sub);
    sub->callback([=] {
        if (!*alt && !*gsd) throw UsageError("plan needs --altitude or --gsd");
        const CameraModel cam = o->camera.resolve();
        double altitude = o->altitude;
        if (*gsd) {
            altitude = altitude_for_gsd(cam, o->gsd);
            io.out << "altitude_m=" << format_double(altitude) << "\n";
        }
        const double g = compute_gsd(cam, altitude);
        const auto fp = ground_footprint(cam, altitude);
        io.out << "gsd_cm_per_px=" << format_double(g) << "\nfootprint_width_m=" << format_double(fp.width_m)
               << "\nfootprint_height_m=" << format_double(fp.height_m) << "\n";
    });
}

void add_tile(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("tile", "Split a frame into zero-padded tiles (then optionally resize each tile)");
    struct Opts {
        std::string image, annotations, out_dir;
        int tile_size = 768, overlap = 0, resize_to = 0;
        double min_visible = kDefaultMinVisibleFraction;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--image", o->image, "Input frame")->required()->check(CLI::ExistingFile);
    sub->add_option("--annotations", o->annotations, "Frame annotation file to clip per tile")->check(CLI::ExistingFile);
    sub->add_option("--out-dir", o->out_dir, "Output directory")->required();
    sub->add_option("--tile-size", o->tile_size, "Tile size (px)")->capture_default_str();
    sub->add_option("--overlap", o->overlap, "Overlap between neighbouring tiles (px)")->capture_default_str();
    sub->add_option("--resize", o->resize_to, "Resize each tile to this square size after tiling (0 = keep)")->capture_default_str();
    sub->add_option("--min-visible", o->min_visible, "Minimum visible fraction for a clipped box")->capture_default_str();
    sub->callback([=] {
        const MonoImage frame = load_image(o->image);
        std::vector<Annotation> anns;
        if (!o->annotations.empty()) anns = read_annotations(o->annotations, frame.width(), frame.height());
        const auto tiles = tile(frame, o->tile_size, o->overlap);
        const auto dir = prepare_out_dir(o->out_dir);
        const std::string stem = fs::path(o->image).stem().string();
        std::string index = "file,offset_x,offset_y,valid_w,valid_h\n";
        for (const auto& t : tiles) {
            const std::string name = stem + "_x" + std::to_string(t.offset_x) + "_y" + std::to_string(t.offset_y);
            MonoImage img = t.image;
            if (o->resize_to > 0) img = resize(img, o->resize_to, o->resize_to);
            save_image(img, dir / (name + ".png"));
            if (!o->annotations.empty()) {
                const BBox rect{static_cast<double>(t.offset_x), static_cast<double>(t.offset_y),
                                static_cast<double>(o->tile_size), static_cast<double>(o->tile_size)};
                // Normalising by the tile size keeps labels valid after a square resize.
                write_annotations(dir / (name + ".txt"), clip_annotations_to_tile(anns, rect, o->min_visible),
                                  o->tile_size, o->tile_size);
            }
            index += name + ".png," + std::to_string(t.offset_x) + "," + std::to_string(t.offset_y) + "," +
                     std::to_string(t.valid_w) + "," + std::to_string(t.valid_h) + "\n";
        }
        csv::write_file(dir / "tiles.csv", index);
        io.out << "tiles=" << tiles.size() << "\n";
    });
}

void add_augment(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("augment", "Apply flips, rotations, shear, noise and blur to an image and its boxes");
    struct Opts {
        std::string image, annotations, out_dir;
        AugmentSpec spec;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--image", o->image, "Input image")->required()->check(CLI::ExistingFile);
    sub->add_option("--annotations", o->annotations, "Annotation file for the image")->check(CLI::ExistingFile);
    sub->add_option("--out-dir", o->out_dir, "Output directory")->required();
    sub->add_flag("--flip-h", o->spec.flip_h, "Horizontal flip");
    sub->add_flag("--flip-v", o->spec.flip_v, "Vertical flip");
    sub->add_option("--rot90", o->spec.rot90_steps, "Clockwise quarter turns")->check(CLI::Range(0, 3))->capture_default_str();
    sub->add_option("--rotate", o->spec.rot_small_deg, "Small rotation (deg, clockwise)")->check(CLI::Range(-15.0, 15.0))->capture_default_str();
    sub->add_option("--shear-h", o->spec.shear_h_deg, "Horizontal shear (deg)")->check(CLI::Range(-15.0, 15.0))->capture_default_str();
    sub->add_option("--shear-v", o->spec.shear_v_deg, "Vertical shear (deg)")->check(CLI::Range(-15.0, 15.0))->capture_default_str();
    sub->add_option("--noise", o->spec.noise_fraction, "Salt-and-pepper fraction of pixels")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sub->add_option("--blur", o->spec.blur_radius_px, "Gaussian blur radius (px)")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--seed", o->spec.seed, "Seed for stochastic steps")->capture_default_str();
    sub->callback([=] {
        const MonoImage img = load_image(o->image);
        std::vector<Annotation> anns;
        if (!o->annotations.empty()) anns = read_annotations(o->annotations, img.width(), img.height());
        const auto result = augment(img, anns, o->spec);
        const auto dir = prepare_out_dir(o->out_dir);
        const std::string stem = fs::path(o->image).stem().string();
        save_image(result.image, dir / (stem + ".png"));
        write_annotations(dir / (stem + ".txt"), result.annotations, result.image.width(), result.image.height());
        io.out << "width=" << result.image.width() << "\nheight=" << result.image.height()
               << "\nannotations=" << result.annotations.size() << "\n";
    });
}

void add_split(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("split", "Assign train/val/test tags to a dataset manifest");
    struct Opts {
        std::string manifest, out_dir, fractions = "0.4,0.4,0.2";
        std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--manifest", o->manifest, "Input manifest (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", o->out_dir, "Output directory (manifest.json)")->required();
    sub->add_option("--fractions", o->fractions, "train,val,test fractions")->capture_default_str();
    sub->add_option("--seed", o->seed, "Shuffle seed")->capture_default_str();
    sub->callback([=] {
        const auto fractions = parse_fractions(o->fractions);
        const DatasetManifest in = load_manifest(o->manifest, false);
        DatasetManifest out = split_dataset(in, fractions, o->seed);
        // Keep the written paths valid relative to the new location.
        const auto dir = prepare_out_dir(o->out_dir);
        const fs::path base = fs::absolute(fs::path(o->manifest)).parent_path();
        for (auto& e : out.entries) {
            if (e.image.is_relative()) e.image = fs::relative(base / e.image, fs::absolute(dir));
            if (!e.annotation_file.empty() && e.annotation_file.is_relative()) {
                e.annotation_file = fs::relative(base / e.annotation_file, fs::absolute(dir));
            }
        }
        save_manifest(out, dir / "manifest.json");
        std::array<std::size_t, 3> counts{};
        for (const auto& e : out.entries) {
            if (e.split == SplitTag::train) ++counts[0];
            if (e.split == SplitTag::val) ++counts[1];
            if (e.split == SplitTag::test) ++counts[2];
        }
        io.out << "train=" << counts[0] << "\nval=" << counts[1] << "\ntest=" << counts[2] << "\n";
    });
}

void add_detect(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("detect", "Run tiled flower detection and write one detection file per frame");
    struct Opts {
        std::string images, out_dir;
        unsigned jobs = 1;
        DetectorOptions detector;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--images", o->images, "Image file or directory of .png/.pgm frames")->required()->check(CLI::ExistingPath);
    sub->add_option("--out-dir", o->out_dir, "Output directory (<frame>.txt detection files)")->required();
    sub->add_option("--jobs", o->jobs, "Frames processed in parallel")->check(CLI::PositiveNumber)->capture_default_str();
    o->detector.add(sub);
    sub->callback([=] {
        const auto files = list_images(o->images);
        const DetectorHandle handle = o->detector.resolve();
        const auto dir = prepare_out_dir(o->out_dir);
        std::vector<std::size_t> counts(files.size());
        parallel_for(files.size(), o->jobs, [&](std::size_t i) {
            const MonoImage frame = load_image(files[i]);
            const auto dets = detect_frame_tiled(handle, frame, o->detector.tiling);
            write_detections(dir / (files[i].stem().string() + ".txt"), dets, frame.width(), frame.height());
            counts[i] = dets.size();
        });
        std::size_t total = 0;
        for (std::size_t c : counts) total += c;
        io.out << "frames=" << files.size() << "\ndetections=" << total << "\n";
    });
}

void add_eval(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("eval", "Score detection files against ground-truth annotation files");
    struct Opts {
        std::string gt_dir, det_dir, out_dir;
        double iou = 0.5;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--gt", o->gt_dir, "Directory of ground-truth .txt files")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--det", o->det_dir, "Directory of detection .txt files")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--out-dir", o->out_dir, "Output directory (summary.csv, pr_curve.csv, pr_curve.svg)")->required();
    sub->add_option("--iou", o->iou, "IoU threshold for a match")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sub->callback([=] {
        // IoU is invariant under per-axis scaling, so boxes are compared in
        // normalised coordinates without the images.
        FrameAnnotations gts;
        for (const auto& [stem, path] : list_by_stem(o->gt_dir, ".txt")) gts[stem] = read_annotations(path, 1, 1);
        FrameDetections dets;
        for (const auto& [stem, path] : list_by_stem(o->det_dir, ".txt")) dets[stem] = read_detections(path, 1, 1);
        const EvalReport report = evaluate(dets, gts, o->iou);
        const auto dir = prepare_out_dir(o->out_dir);
        csv::write_file(dir / "summary.csv", eval_summary_csv(report));
        csv::write_file(dir / "pr_curve.csv", eval_pr_csv(report));
        csv::write_file(dir / "pr_curve.svg", eval_pr_svg(report));
        io.out << eval_summary_csv(report);
    });
}

namespace {

std::string field_json(const SimulatedSurvey& sim, const FieldSpec& field, const FlightSpec& flight, std::uint64_t seed) {
    nlohmann::ordered_json doc;
    doc["seed"] = seed;
    doc["origin"] = {{"lat", sim.origin.lat_deg}, {"lon", sim.origin.lon_deg}};
    doc["rows"] = {{"count", sim.rows.rows}, {"first_row_north_m", sim.rows.first_row_north_m}, {"spacing_m", sim.rows.spacing_m}};
    doc["camera"] = {{"focal_length_mm", sim.camera.focal_length_mm},
                     {"pixel_pitch_um", sim.camera.pixel_pitch_um},
                     {"sensor_width_px", sim.camera.sensor_width_px},
                     {"sensor_height_px", sim.camera.sensor_height_px}};
    doc["flight"] = {{"altitude_m", flight.altitude_m}, {"overlap", flight.overlap}};
    doc["field"] = {{"plants_per_row", field.plants_per_row},
                    {"plant_spacing_m", field.plant_spacing_m},
                    {"flowers_per_plant_mean", field.flowers_per_plant_mean},
                    {"flowers_per_plant_spread", field.flowers_per_plant_spread},
                    {"confuser_probability", field.confuser_probability}};
    doc["frames"] = sim.frames.size();
    doc["flowers"] = sim.flowers.size();
    doc["confusers"] = sim.confusers.size();
    return doc.dump(2) + "\n";
}

struct FieldFile {
    GeoOrigin origin;
    RowLayout rows;
};

FieldFile read_field_json(const fs::path& path) {
    try {
        const auto doc = nlohmann::json::parse(csv::read_file(path));
        FieldFile f;
        f.origin = {doc.at("origin").at("lat").get<double>(), doc.at("origin").at("lon").get<double>()};
        f.rows = {doc.at("rows").at("count").get<int>(), doc.at("rows").at("first_row_north_m").get<double>(),
                  doc.at("rows").at("spacing_m").get<double>()};
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed field file " + path.string() + ": " + e.what());
    }
}

}  // namespace

void add_simulate(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("simulate", "Render a synthetic field survey with exact ground truth");
    struct Opts {
        std::string out_dir;
        std::uint64_t seed = 1;
        unsigned jobs = 1;
        FieldSpec field;
        FlightSpec flight;
        CameraOptions camera;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--out-dir", o->out_dir, "Output directory")->required();
    sub->add_option("--seed", o->seed, "Layout seed")->capture_default_str();
    sub->add_option("--jobs", o->jobs, "Frames rendered in parallel")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--rows", o->field.rows, "Crop rows")->capture_default_str();
    sub->add_option("--plants", o->field.plants_per_row, "Plants per row")->capture_default_str();
    sub->add_option("--plant-spacing", o->field.plant_spacing_m, "Plant spacing along a row (m)")->capture_default_str();
    sub->add_option("--row-spacing", o->field.row_spacing_m, "Row spacing (m)")->capture_default_str();
    sub->add_option("--flowers-mean", o->field.flowers_per_plant_mean, "Mean flowers per plant")->capture_default_str();
    sub->add_option("--flowers-spread", o->field.flowers_per_plant_spread, "Flowers per plant spread (uniform +/-)")->capture_default_str();
    sub->add_option("--confusers", o->field.confuser_probability, "Probability a plant carries a UV-bright fruit")->capture_default_str();
    sub->add_option("--radius-min", o->field.flower_radius_px_min, "Minimum rendered radius (px)")->capture_default_str();
    sub->add_option("--radius-max", o->field.flower_radius_px_max, "Maximum rendered radius (px)")->capture_default_str();
    sub->add_option("--texture-seed", o->field.texture_seed, "Background texture seed")->capture_default_str();
    sub->add_option("--altitude", o->flight.altitude_m, "Flight altitude (m)")->capture_default_str();
    sub->add_option("--overlap", o->flight.overlap, "Frame overlap fraction")->capture_default_str();
    o->camera.add(sub);
    sub->callback([=] {
        FlightSpec flight = o->flight;
        flight.camera = o->camera.resolve();
        const auto sim = simulate_survey(o->field, flight, o->seed, o->jobs);
        const auto dir = prepare_out_dir(o->out_dir);
        const auto frames_dir = prepare_out_dir(dir / "frames");
        const auto labels_dir = prepare_out_dir(dir / "labels");
        std::vector<FramePose> poses;
        parallel_for(sim.frames.size(), o->jobs, [&](std::size_t i) {
            const auto& f = sim.frames[i];
            save_image(f.image, frames_dir / (f.pose.frame_id + ".png"));
            write_annotations(labels_dir / (f.pose.frame_id + ".txt"), sim.annotations[i], f.image.width(), f.image.height());
        });
        for (const auto& f : sim.frames) poses.push_back(f.pose);
        csv::write_file(dir / "poses.csv", format_poses_csv(poses));
        csv::write_file(dir / "flowers.csv", format_points_csv(sim.flower_points()));
        csv::write_file(dir / "confusers.csv", format_points_csv(sim.confuser_points()));
        csv::write_file(dir / "field.json", field_json(sim, o->field, flight, o->seed));
        io.out << "frames=" << sim.frames.size() << "\nflowers=" << sim.flowers.size()
               << "\nconfusers=" << sim.confusers.size() << "\n";
    });
}

void add_survey(CLI::App& app, Streams io) {
    auto* sub = app.add_subcommand("survey", "Detect, georeference, deduplicate and count flowers over a flight");
    struct Opts {
        std::string frames_dir, poses, field, out_dir;
        std::vector<double> origin;
        double dedup_radius = kDefaultDedupRadiusM;
        unsigned jobs = 1;
        CameraOptions camera;
        DetectorOptions detector;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--frames", o->frames_dir, "Directory of frames named <frame_id>.png/.pgm")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--poses", o->poses, "Poses CSV: frame_id,lat,lon,altitude_m,yaw_deg")->required()->check(CLI::ExistingFile);
    sub->add_option("--field", o->field, "Field description (origin and row layout) written by simulate")->check(CLI::ExistingFile);
    sub->add_option("--origin", o->origin, "Survey origin lat,lon (default: first pose)")->delimiter(',')->expected(2);
    sub->add_option("--out-dir", o->out_dir, "Output directory (report.csv, summary.json, points.csv)")->required();
    sub->add_option("--dedup-radius", o->dedup_radius, "Ground distance under which detections merge (m)")->capture_default_str();
    sub->add_option("--jobs", o->jobs, "Frames processed in parallel")->check(CLI::PositiveNumber)->capture_default_str();
    o->camera.add(sub);
    o->detector.add(sub);
    sub->callback([=] {
        const CameraModel cam = o->camera.resolve();
        const DetectorHandle handle = o->detector.resolve();
        const auto poses = read_poses_csv(o->poses);
        if (poses.empty()) throw DataError("poses file lists no frames");

        SurveyParams params;
        params.tiling = o->detector.tiling;
        params.dedup_radius_m = o->dedup_radius;
        params.jobs = o->jobs;
        GeoOrigin origin{poses.front().lat_deg, poses.front().lon_deg};
        if (!o->field.empty()) {
            const auto f = read_field_json(o->field);
            origin = f.origin;
            params.rows = f.rows;
        }
        if (!o->origin.empty()) origin = {o->origin[0], o->origin[1]};

        std::vector<SurveyFrame> frames(poses.size());
        parallel_for(poses.size(), o->jobs, [&](std::size_t i) {
            fs::path path = fs::path(o->frames_dir) / (poses[i].frame_id + ".png");
            if (!fs::exists(path)) path.replace_extension(".pgm");
            frames[i] = {load_image(path), poses[i]};
        });
        const SurveyReport report = survey_count(frames, handle, cam, origin, params);
        const auto dir = prepare_out_dir(o->out_dir);
        csv::write_file(dir / "report.csv", survey_report_csv(report));
        csv::write_file(dir / "summary.json", survey_summary_json(report));
        csv::write_file(dir / "points.csv", format_points_csv(report.points));
        io.out << survey_report_csv(report);
    });
}

}  // namespace uvgb::cli
