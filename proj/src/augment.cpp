#include "uvgb/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "uvgb/error.hpp"
#include "uvgb/rng.hpp"

namespace uvgb {

namespace {

constexpr double kMaxSmallAngleDeg = 15.0;

// Row-major 2x2 linear part of an affine map about the image centre.
struct Linear2 {
    double a = 1, b = 0, c = 0, d = 1;

    Linear2 then(const Linear2& next) const {
        return {next.a * a + next.b * c, next.a * b + next.b * d, next.c * a + next.d * c, next.c * b + next.d * d};
    }
    Linear2 inverse() const {
        const double det = a * d - b * c;
        return {d / det, -b / det, -c / det, a / det};
    }
    bool identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
};

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Clockwise on screen (y axis points down).
Linear2 rotation(double deg) {
    const double s = std::sin(radians(deg));
    const double c = std::cos(radians(deg));
    return {c, -s, s, c};
}

Linear2 shear_h(double deg) { return {1, std::tan(radians(deg)), 0, 1}; }
Linear2 shear_v(double deg) { return {1, 0, std::tan(radians(deg)), 1}; }

double sample_zero_fill(const MonoImage& img, double sx, double sy) {
    const double fx = sx - 0.5;
    const double fy = sy - 0.5;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double tx = fx - x0;
    const double ty = fy - y0;
    auto px = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return 0.0;
        return img.at(x, y);
    };
    const double top = px(x0, y0) * (1 - tx) + px(x0 + 1, y0) * tx;
    const double bottom = px(x0, y0 + 1) * (1 - tx) + px(x0 + 1, y0 + 1) * tx;
    return top * (1 - ty) + bottom * ty;
}

MonoImage warp_about_centre(const MonoImage& img, const Linear2& forward) {
    const Linear2 inv = forward.inverse();
    const double cx = img.width() / 2.0;
    const double cy = img.height() / 2.0;
    MonoImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double dx = x + 0.5 - cx;
            const double dy = y + 0.5 - cy;
            const double sx = inv.a * dx + inv.b * dy + cx;
            const double sy = inv.c * dx + inv.d * dy + cy;
            const double v = sample_zero_fill(img, sx, sy);
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

// Hull of the transformed corners, clipped to [0,w]x[0,h]. Returns false when
// nothing with positive area remains.
template <typename MapPoint>
bool map_box(BBox& box, int out_w, int out_h, MapPoint&& map) {
    const std::array<std::array<double, 2>, 4> corners{{{box.x, box.y},
                                                         {box.right(), box.y},
                                                         {box.x, box.bottom()},
                                                         {box.right(), box.bottom()}}};
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& [px, py] : corners) {
        const auto [qx, qy] = map(px, py);
        x0 = std::min(x0, qx);
        y0 = std::min(y0, qy);
        x1 = std::max(x1, qx);
        y1 = std::max(y1, qy);
    }
    x0 = std::max(x0, 0.0);
    y0 = std::max(y0, 0.0);
    x1 = std::min(x1, static_cast<double>(out_w));
    y1 = std::min(y1, static_cast<double>(out_h));
    if (!(x1 > x0 && y1 > y0)) return false;
    box = {x0, y0, x1 - x0, y1 - y0};
    return true;
}

template <typename MapPoint>
std::vector<Annotation> map_boxes(const std::vector<Annotation>& anns, int out_w, int out_h, MapPoint&& map) {
    std::vector<Annotation> out;
    out.reserve(anns.size());
    for (auto ann : anns) {
        if (map_box(ann.bbox, out_w, out_h, map)) out.push_back(ann);
    }
    return out;
}

}  // namespace

void AugmentSpec::validate() const {
    if (rot90_steps < 0 || rot90_steps > 3) throw UsageError("rot90_steps must be in {0,1,2,3}");
    for (double deg : {rot_small_deg, shear_h_deg, shear_v_deg}) {
        if (!(std::abs(deg) <= kMaxSmallAngleDeg)) throw UsageError("rotation/shear angles must be in [-15, 15] degrees");
    }
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) throw UsageError("noise_fraction must be in [0, 1]");
    if (blur_radius_px < 0) throw UsageError("blur_radius_px must be >= 0");
}

MonoImage flip_horizontal(const MonoImage& img) {
    MonoImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) out.at(img.width() - 1 - x, y) = img.at(x, y);
    }
    return out;
}

MonoImage flip_vertical(const MonoImage& img) {
    MonoImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        const auto src = img.row(y);
        std::copy(src.begin(), src.end(),
                  out.pixels().begin() + static_cast<std::ptrdiff_t>(img.height() - 1 - y) * img.width());
    }
    return out;
}

MonoImage rotate90(const MonoImage& img, int steps) {
    steps = ((steps % 4) + 4) % 4;
    if (steps == 0) return img;
    if (steps == 2) return flip_vertical(flip_horizontal(img));
    MonoImage out(img.height(), img.width());
    const int h = img.height();
    const int w = img.width();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (steps == 1) {
                out.at(h - 1 - y, x) = img.at(x, y);
            } else {
                out.at(y, w - 1 - x) = img.at(x, y);
            }
        }
    }
    return out;
}

MonoImage add_salt_pepper(const MonoImage& img, double fraction, std::uint64_t seed) {
    MonoImage out = img;
    const std::size_t n = img.size();
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (count == 0) return out;
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto px = out.pixels();
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
        px[idx[i]] = rng.bernoulli(0.5) ? 255 : 0;
    }
    return out;
}

MonoImage gaussian_blur(const MonoImage& img, int radius) {
    if (radius <= 0) return img;
    const double sigma = radius / 3.0;
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[i + radius];
    }
    for (auto& k : kernel) k /= sum;

    const int w = img.width();
    const int h = img.height();
    std::vector<double> tmp(img.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * img.at(std::clamp(x + i, 0, w - 1), y);
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    MonoImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[i + radius] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
        }
    }
    return out;
}

Augmented augment(const MonoImage& img, const std::vector<Annotation>& anns, const AugmentSpec& spec) {
    spec.validate();
    Augmented out{img, anns};

    if (spec.flip_h) {
        const double w = out.image.width();
        out.image = flip_horizontal(out.image);
        for (auto& a : out.annotations) a.bbox.x = w - a.bbox.x - a.bbox.w;
    }
    if (spec.flip_v) {
        const double h = out.image.height();
        out.image = flip_vertical(out.image);
        for (auto& a : out.annotations) a.bbox.y = h - a.bbox.y - a.bbox.h;
    }
    for (int step = 0; step < spec.rot90_steps; ++step) {
        const double h = out.image.height();
        out.image = rotate90(out.image, 1);
        for (auto& a : out.annotations) a.bbox = {h - a.bbox.y - a.bbox.h, a.bbox.x, a.bbox.h, a.bbox.w};
    }
    // Boxes entering here may already extend past the frame; clip them now
    // so every output box lies inside the image even without a warp.
    out.annotations = map_boxes(out.annotations, out.image.width(), out.image.height(),
                                [](double x, double y) { return std::array<double, 2>{x, y}; });

    const Linear2 warp = rotation(spec.rot_small_deg).then(shear_h(spec.shear_h_deg)).then(shear_v(spec.shear_v_deg));
    if (!warp.identity()) {
        out.image = warp_about_centre(out.image, warp);
        const double cx = out.image.width() / 2.0;
        const double cy = out.image.height() / 2.0;
        out.annotations = map_boxes(out.annotations, out.image.width(), out.image.height(), [&](double x, double y) {
            const double dx = x - cx;
            const double dy = y - cy;
            return std::array<double, 2>{warp.a * dx + warp.b * dy + cx, warp.c * dx + warp.d * dy + cy};
        });
    }

    if (spec.noise_fraction > 0.0) out.image = add_salt_pepper(out.image, spec.noise_fraction, derive_seed(spec.seed, 1));
    if (spec.blur_radius_px > 0) out.image = gaussian_blur(out.image, spec.blur_radius_px);
    return out;
}

}  // namespace uvgb
