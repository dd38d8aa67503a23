#pragma once

#include <cstdint>
#include <vector>

#include "uvgb/image.hpp"

namespace uvgb {

struct AugmentSpec {
    bool flip_h = false;
    bool flip_v = false;
    int rot90_steps = 0;          ///< clockwise quarter turns, 0..3
    double rot_small_deg = 0.0;   ///< [-15, 15], positive is clockwise
    double shear_h_deg = 0.0;     ///< [-15, 15]
    double shear_v_deg = 0.0;     ///< [-15, 15]
    double noise_fraction = 0.05; ///< salt-and-pepper share of pixels
    int blur_radius_px = 5;       ///< Gaussian kernel radius, sigma = radius / 3
    std::uint64_t seed = 0;

    /// Spec that leaves image and annotations untouched.
    static AugmentSpec neutral() {
        AugmentSpec s;
        s.noise_fraction = 0.0;
        s.blur_radius_px = 0;
        return s;
    }

    /// Throws UsageError when a field is outside its range.
    void validate() const;
};

struct Augmented {
    MonoImage image;
    std::vector<Annotation> annotations;
};

/// Applies flips, rot90, small rotation and shear (in that order), then
/// salt-and-pepper noise and Gaussian blur. Boxes are mapped corner-wise,
/// replaced by their axis-aligned hull, clipped to the output image and
/// dropped when degenerate.
Augmented augment(const MonoImage& img, const std::vector<Annotation>& anns, const AugmentSpec& spec);

// Individual steps, exposed for composition and testing.
MonoImage flip_horizontal(const MonoImage& img);
MonoImage flip_vertical(const MonoImage& img);
MonoImage rotate90(const MonoImage& img, int steps);
MonoImage add_salt_pepper(const MonoImage& img, double fraction, std::uint64_t seed);
MonoImage gaussian_blur(const MonoImage& img, int radius);

}  // namespace uvgb
