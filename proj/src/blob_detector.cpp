#include "uvgb/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "uvgb/error.hpp"

namespace uvgb {

namespace {

// Clockwise from east in image coordinates (y down).
constexpr std::array<int, 8> kDx{1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy{0, 1, 1, 1, 0, -1, -1, -1};

struct Contour {
    double perimeter = 0.0;
    double area = 0.0;  // shoelace area of the polygon through boundary pixel centres
};

// Outer boundary of the component containing (sx, sy), which must be its
// first pixel in raster order. Chain-code tracing with 8-connectivity.
template <typename IsMember>
Contour trace_outer(int sx, int sy, IsMember&& member) {
    auto next_dir = [&](int x, int y, int dir) -> int {
        const int start = (dir % 2 == 0) ? (dir + 7) % 8 : (dir + 6) % 8;
        for (int k = 0; k < 8; ++k) {
            const int d = (start + k) % 8;
            if (member(x + kDx[d], y + kDy[d])) return d;
        }
        return -1;
    };

    Contour c;
    const int first = next_dir(sx, sy, 7);
    if (first < 0) return c;  // isolated pixel

    int x = sx, y = sy, dir = first;
    double twice_area = 0.0;
    while (true) {
        const int nx = x + kDx[dir];
        const int ny = y + kDy[dir];
        c.perimeter += (dir % 2 == 0) ? 1.0 : std::numbers::sqrt2;
        twice_area += static_cast<double>(x) * ny - static_cast<double>(nx) * y;
        x = nx;
        y = ny;
        dir = next_dir(x, y, dir);
        if (x == sx && y == sy && dir == first) break;
    }
    c.area = std::abs(twice_area) / 2.0;
    return c;
}

}  // namespace

void BlobDetectorConfig::validate() const {
    if (brightness_threshold < 0 || brightness_threshold > 255) throw UsageError("brightness_threshold must be in [0, 255]");
    if (!(min_area_px >= 0.0 && min_area_px < max_area_px)) throw UsageError("blob area bounds require 0 <= min < max");
    if (!(min_circularity >= 0.0 && min_circularity <= 1.0)) throw UsageError("min_circularity must be in [0, 1]");
}

std::vector<Blob> find_blobs(const MonoImage& img, int threshold) {
    const int w = img.width();
    const int h = img.height();
    std::vector<int> labels(img.size(), -1);
    auto fg = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && img.at(x, y) >= threshold; };
    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

    std::vector<Blob> blobs;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!fg(x, y) || labels[idx(x, y)] >= 0) continue;
            const int label = static_cast<int>(blobs.size());
            int x0 = x, x1 = x, y0 = y, y1 = y;
            std::size_t area = 0;
            std::uint64_t sum = 0;
            labels[idx(x, y)] = label;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++area;
                sum += img.at(cx, cy);
                x0 = std::min(x0, cx);
                x1 = std::max(x1, cx);
                y0 = std::min(y0, cy);
                y1 = std::max(y1, cy);
                for (int d = 0; d < 8; ++d) {
                    const int nx = cx + kDx[d];
                    const int ny = cy + kDy[d];
                    if (fg(nx, ny) && labels[idx(nx, ny)] < 0) {
                        labels[idx(nx, ny)] = label;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            const auto contour = trace_outer(x, y, [&](int px, int py) {
                return px >= 0 && py >= 0 && px < w && py < h && labels[idx(px, py)] == label;
            });
            Blob b;
            b.bounds = {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x1 - x0 + 1),
                        static_cast<double>(y1 - y0 + 1)};
            b.area = area;
            b.perimeter = contour.perimeter;
            b.circularity = contour.perimeter > 0.0
                                ? std::min(1.0, 4.0 * std::numbers::pi * contour.area / (contour.perimeter * contour.perimeter))
                                : 0.0;
            b.mean_brightness = static_cast<double>(sum) / static_cast<double>(area);
            blobs.push_back(b);
        }
    }
    return blobs;
}

std::vector<Detection> detect_blobs(const MonoImage& img, const BlobDetectorConfig& cfg) {
    cfg.validate();
    std::vector<Detection> dets;
    for (const auto& b : find_blobs(img, cfg.brightness_threshold)) {
        const auto area = static_cast<double>(b.area);
        if (area < cfg.min_area_px || area > cfg.max_area_px) continue;
        if (b.circularity < cfg.min_circularity) continue;
        dets.push_back({kFlowerClass, b.bounds, std::clamp(b.mean_brightness / 255.0, 0.0, 1.0)});
    }
    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
        return a.bbox.x < b.bbox.x;
    });
    return dets;
}

}  // namespace uvgb
