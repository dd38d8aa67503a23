#include "uvgb/image.hpp"

#include <algorithm>
#include <string>

#include "uvgb/error.hpp"

namespace uvgb {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw UsageError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
    }
}

}  // namespace

MonoImage::MonoImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

MonoImage::MonoImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw UsageError("pixel buffer length " + std::to_string(pixels_.size()) + " does not match " +
                         std::to_string(width) + "x" + std::to_string(height));
    }
}

BBox intersect(const BBox& a, const BBox& b) noexcept {
    const double x0 = std::max(a.x, b.x);
    const double y0 = std::max(a.y, b.y);
    const double x1 = std::min(a.right(), b.right());
    const double y1 = std::min(a.bottom(), b.bottom());
    return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

}  // namespace uvgb
