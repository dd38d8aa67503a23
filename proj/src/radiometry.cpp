#include "uvgb/radiometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "uvgb/csv.hpp"
#include "uvgb/error.hpp"
#include "uvgb/rng.hpp"
#include "uvgb/svg.hpp"

namespace uvgb {

CalibrationCurve fit_calibration(const std::vector<ReflectanceSample>& samples) {
    if (samples.size() < 2) throw DataError("calibration needs at least 2 samples, got " + std::to_string(samples.size()));
    for (const auto& s : samples) {
        if (!(s.percent_reflectance >= 0.0 && s.percent_reflectance <= 100.0) ||
            !(s.mean_pixel_value >= 0.0 && s.mean_pixel_value <= 255.0)) {
            throw DataError("sample for standard " + std::to_string(s.standard_id) + " is out of range");
        }
    }
    const double n = static_cast<double>(samples.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& s : samples) {
        mean_x += s.mean_pixel_value;
        mean_y += s.percent_reflectance;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& s : samples) {
        const double dx = s.mean_pixel_value - mean_x;
        const double dy = s.percent_reflectance - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DataError("zero variance in pixel values; cannot fit a calibration line");

    CalibrationCurve curve;
    curve.slope = sxy / sxx;
    curve.intercept = mean_y - curve.slope * mean_x;

    double ss_res = 0.0;
    for (const auto& s : samples) {
        const double r = s.percent_reflectance - (curve.slope * s.mean_pixel_value + curve.intercept);
        ss_res += r * r;
    }
    // A flat response is fitted exactly by a zero slope.
    curve.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);

    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
        return a.mean_pixel_value < b.mean_pixel_value;
    });
    curve.pixel_min = lo->mean_pixel_value;
    curve.pixel_max = hi->mean_pixel_value;
    return curve;
}

ReflectanceEstimate pixel_to_reflectance(const CalibrationCurve& curve, double pixel) {
    const double raw = curve.slope * pixel + curve.intercept;
    ReflectanceEstimate est;
    est.percent_reflectance = std::clamp(raw, 0.0, 100.0);
    est.clamped = raw < 0.0 || raw > 100.0;
    est.extrapolated = pixel < curve.pixel_min || pixel > curve.pixel_max;
    return est;
}

double reflectance_to_pixel(const CalibrationCurve& curve, double percent_reflectance) {
    if (curve.slope == 0.0) throw DataError("calibration slope is zero; reflectance cannot be inverted");
    return (percent_reflectance - curve.intercept) / curve.slope;
}

double sample_from_image(const MonoImage& img, const BBox& region) {
    // Pixel (x, y) belongs to the region when its centre lies inside it.
    const int x0 = std::max(0, static_cast<int>(std::ceil(region.x - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(region.y - 0.5)));
    const int x1 = std::min(img.width(), static_cast<int>(std::ceil(region.right() - 0.5)));
    const int y1 = std::min(img.height(), static_cast<int>(std::ceil(region.bottom() - 0.5)));
    if (x1 <= x0 || y1 <= y0) throw DataError("sample region lies outside the image");
    const auto count = static_cast<std::size_t>(x1 - x0) * static_cast<std::size_t>(y1 - y0);
    if (count < kMinSamplePixels) {
        throw DataError("sample region covers " + std::to_string(count) + " pixels; at least " +
                        std::to_string(kMinSamplePixels) + " are required");
    }
    std::uint64_t sum = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) sum += img.at(x, y);
    }
    return static_cast<double>(sum) / static_cast<double>(count);
}

std::vector<ReflectanceSample> generate_standards(std::uint64_t seed, double slope, double intercept, double noise,
                                                  std::size_t count, double pixel_lo, double pixel_hi) {
    if (count < 2) throw UsageError("need at least 2 standards");
    Rng rng(seed);
    std::vector<ReflectanceSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double px = pixel_lo + (pixel_hi - pixel_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        const double r = slope * px + intercept + rng.uniform(-noise, noise);
        out.push_back({static_cast<int>(i + 1), std::clamp(r, 0.0, 100.0), px});
    }
    return out;
}

std::vector<ReflectanceSample> parse_samples_csv(std::string_view text) {
    std::vector<ReflectanceSample> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_line(line);
        const std::string where = "row " + std::to_string(line_no);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"standard_id", "percent_reflectance", "mean_pixel_value"}) {
                throw DataError(where + ": expected header standard_id,percent_reflectance,mean_pixel_value");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) throw DataError(where + ": expected 3 fields, got " + std::to_string(fields.size()));
        ReflectanceSample s;
        s.standard_id = static_cast<int>(csv::to_int(fields[0], where + " standard_id"));
        s.percent_reflectance = csv::to_double(fields[1], where + " percent_reflectance");
        s.mean_pixel_value = csv::to_double(fields[2], where + " mean_pixel_value");
        if (!(s.percent_reflectance >= 0.0 && s.percent_reflectance <= 100.0)) {
            throw DataError(where + ": percent_reflectance outside [0, 100]");
        }
        if (!(s.mean_pixel_value >= 0.0 && s.mean_pixel_value <= 255.0)) {
            throw DataError(where + ": mean_pixel_value outside [0, 255]");
        }
        out.push_back(s);
    }
    if (!header_seen) throw DataError("row 1: empty calibration file");
    return out;
}

std::vector<ReflectanceSample> read_samples_csv(const std::filesystem::path& path) {
    return parse_samples_csv(csv::read_file(path));
}

std::string format_samples_csv(const std::vector<ReflectanceSample>& samples) {
    std::string out = "standard_id,percent_reflectance,mean_pixel_value\n";
    for (const auto& s : samples) {
        out += std::to_string(s.standard_id) + "," + csv::format_double(s.percent_reflectance) + "," +
               csv::format_double(s.mean_pixel_value) + "\n";
    }
    return out;
}

std::string calibration_record(const CalibrationCurve& curve, std::size_t sample_count) {
    nlohmann::ordered_json doc;
    doc["model"] = "percent_reflectance = slope * pixel + intercept";
    doc["slope"] = curve.slope;
    doc["intercept"] = curve.intercept;
    doc["r_squared"] = curve.r_squared;
    doc["pixel_range"] = {curve.pixel_min, curve.pixel_max};
    doc["samples"] = sample_count;
    return doc.dump(2) + "\n";
}

std::string calibration_svg(const std::vector<ReflectanceSample>& samples, const CalibrationCurve& curve) {
    svg::Series points;
    points.line = false;
    points.color = "#d62728";
    points.label = "standards";
    for (const auto& s : samples) {
        points.x.push_back(s.mean_pixel_value);
        points.y.push_back(s.percent_reflectance);
    }
    svg::Series fit;
    fit.label = "fit R^2=" + csv::format_double(std::round(curve.r_squared * 1e4) / 1e4);
    for (double px : {0.0, 255.0}) {
        fit.x.push_back(px);
        fit.y.push_back(curve.slope * px + curve.intercept);
    }
    svg::PlotSpec spec;
    spec.title = "Reflectance vs pixel value";
    spec.x_label = "pixel value";
    spec.y_label = "% reflectance";
    spec.x_max = 255.0;
    spec.y_max = 100.0;
    return svg::plot(spec, {fit, points});
}

}  // namespace uvgb
