#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uvgb/image.hpp"

namespace uvgb {

struct ReflectanceSample {
    int standard_id = 0;
    double percent_reflectance = 0.0;  ///< [0, 100]
    double mean_pixel_value = 0.0;     ///< [0, 255]
};

/// Linear map %R = slope * pixel + intercept.
struct CalibrationCurve {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double pixel_min = 0.0;
    double pixel_max = 255.0;
};

/// Ordinary least squares with %R as the response and pixel value as the
/// predictor. Throws DataError for fewer than two samples or when all pixel
/// values are equal.
CalibrationCurve fit_calibration(const std::vector<ReflectanceSample>& samples);

struct ReflectanceEstimate {
    double percent_reflectance = 0.0;
    bool clamped = false;       ///< raw value fell outside [0, 100]
    bool extrapolated = false;  ///< pixel outside the fitted pixel range
};

ReflectanceEstimate pixel_to_reflectance(const CalibrationCurve& curve, double pixel);

/// Inverse of the calibration line. Throws DataError for a zero slope.
double reflectance_to_pixel(const CalibrationCurve& curve, double percent_reflectance);

inline constexpr std::size_t kMinSamplePixels = 10;

/// Mean luminance over region ∩ image. Throws DataError when fewer than
/// kMinSamplePixels pixels are covered.
double sample_from_image(const MonoImage& img, const BBox& region);

/// Synthetic reflectance standards for tests and demos: `count` pixel values
/// spread evenly over [pixel_lo, pixel_hi], %R = slope*px + intercept plus
/// uniform noise in [-noise, +noise], clamped to [0, 100].
std::vector<ReflectanceSample> generate_standards(std::uint64_t seed, double slope, double intercept,
                                                  double noise, std::size_t count = 6, double pixel_lo = 12.0,
                                                  double pixel_hi = 240.0);

// CSV with header `standard_id,percent_reflectance,mean_pixel_value`.
// Parse errors carry the 1-based line number.
std::vector<ReflectanceSample> parse_samples_csv(std::string_view text);
std::vector<ReflectanceSample> read_samples_csv(const std::filesystem::path& path);
std::string format_samples_csv(const std::vector<ReflectanceSample>& samples);

/// JSON record of slope/intercept/R²/range.
std::string calibration_record(const CalibrationCurve& curve, std::size_t sample_count);

/// Scatter of samples with the fitted line.
std::string calibration_svg(const std::vector<ReflectanceSample>& samples, const CalibrationCurve& curve);

}  // namespace uvgb
