#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uvgb {

/// Single-channel 8-bit frame, row-major.
class MonoImage {
public:
    MonoImage() = default;
    MonoImage(int width, int height, std::uint8_t fill = 0);
    MonoImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }
    std::size_t size() const noexcept { return pixels_.size(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }
    std::span<const std::uint8_t> row(int y) const {
        return std::span(pixels_).subspan(index(0, y), static_cast<std::size_t>(width_));
    }

    friend bool operator==(const MonoImage&, const MonoImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Axis-aligned box in pixel space; (x, y) is the top-left corner.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double right() const noexcept { return x + w; }
    double bottom() const noexcept { return y + h; }
    double area() const noexcept { return w * h; }
    double center_x() const noexcept { return x + 0.5 * w; }
    double center_y() const noexcept { return y + 0.5 * h; }
    bool valid() const noexcept { return w > 0.0 && h > 0.0; }

    BBox translated(double dx, double dy) const noexcept { return {x + dx, y + dy, w, h}; }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection of two boxes; w/h are zero when they do not overlap.
BBox intersect(const BBox& a, const BBox& b) noexcept;

struct Annotation {
    int class_id = 0;
    BBox bbox;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Detection {
    int class_id = 0;
    BBox bbox;
    double confidence = 0.0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr int kFlowerClass = 0;

}  // namespace uvgb
