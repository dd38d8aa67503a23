#include "uvgb/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uvgb/error.hpp"
#include "uvgb/eval.hpp"

namespace uvgb {

namespace {

std::uint8_t to_pixel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct AxisSample {
    int i0 = 0;
    int i1 = 0;
    double t = 0.0;
};

// Pixel-centre alignment: output centre maps to (o + 0.5) * scale - 0.5,
// clamped to the source extent.
std::vector<AxisSample> axis_samples(int in, int out) {
    std::vector<AxisSample> samples(static_cast<std::size_t>(out));
    const double scale = static_cast<double>(in) / out;
    for (int o = 0; o < out; ++o) {
        double src = (o + 0.5) * scale - 0.5;
        src = std::clamp(src, 0.0, static_cast<double>(in - 1));
        const int i0 = static_cast<int>(std::floor(src));
        const int i1 = std::min(i0 + 1, in - 1);
        samples[o] = {i0, i1, src - i0};
    }
    return samples;
}

}  // namespace

MonoImage resize(const MonoImage& img, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw UsageError("zero target dimension in resize");
    if (out_w == img.width() && out_h == img.height()) return img;

    const auto xs = axis_samples(img.width(), out_w);
    const auto ys = axis_samples(img.height(), out_h);
    MonoImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const auto& sy = ys[y];
        for (int x = 0; x < out_w; ++x) {
            const auto& sx = xs[x];
            const double top = img.at(sx.i0, sy.i0) * (1.0 - sx.t) + img.at(sx.i1, sy.i0) * sx.t;
            const double bottom = img.at(sx.i0, sy.i1) * (1.0 - sx.t) + img.at(sx.i1, sy.i1) * sx.t;
            out.at(x, y) = to_pixel(top * (1.0 - sy.t) + bottom * sy.t);
        }
    }
    return out;
}

std::vector<int> tile_offsets(int extent, int tile_size, int overlap) {
    if (overlap < 0 || tile_size <= overlap) {
        throw UsageError("tile_size (" + std::to_string(tile_size) + ") must exceed overlap (" +
                         std::to_string(overlap) + ") and overlap must be >= 0");
    }
    const int stride = tile_size - overlap;
    std::vector<int> offsets{0};
    while (offsets.back() + tile_size < extent) offsets.push_back(offsets.back() + stride);
    return offsets;
}

std::vector<Tile> tile(const MonoImage& img, int tile_size, int overlap) {
    const auto xs = tile_offsets(img.width(), tile_size, overlap);
    const auto ys = tile_offsets(img.height(), tile_size, overlap);
    std::vector<Tile> tiles;
    tiles.reserve(xs.size() * ys.size());
    for (int oy : ys) {
        for (int ox : xs) {
            Tile t;
            t.offset_x = ox;
            t.offset_y = oy;
            t.valid_w = std::min(tile_size, img.width() - ox);
            t.valid_h = std::min(tile_size, img.height() - oy);
            t.image = MonoImage(tile_size, tile_size, 0);
            for (int y = 0; y < t.valid_h; ++y) {
                const auto src = img.row(oy + y).subspan(static_cast<std::size_t>(ox), static_cast<std::size_t>(t.valid_w));
                std::copy(src.begin(), src.end(), t.image.pixels().begin() + static_cast<std::ptrdiff_t>(y) * tile_size);
            }
            tiles.push_back(std::move(t));
        }
    }
    return tiles;
}

std::vector<BBox> tile_rects(int frame_w, int frame_h, int tile_size, int overlap) {
    const auto xs = tile_offsets(frame_w, tile_size, overlap);
    const auto ys = tile_offsets(frame_h, tile_size, overlap);
    std::vector<BBox> rects;
    rects.reserve(xs.size() * ys.size());
    for (int oy : ys) {
        for (int ox : xs) {
            rects.push_back({static_cast<double>(ox), static_cast<double>(oy),
                             static_cast<double>(std::min(tile_size, frame_w - ox)),
                             static_cast<double>(std::min(tile_size, frame_h - oy))});
        }
    }
    return rects;
}

std::vector<Annotation> clip_annotations_to_tile(const std::vector<Annotation>& anns, const BBox& tile_rect,
                                                 double min_visible_fraction) {
    if (!tile_rect.valid()) throw UsageError("tile rectangle must have positive area");
    if (!(min_visible_fraction > 0.0 && min_visible_fraction <= 1.0)) {
        throw UsageError("min_visible_fraction must be in (0, 1]");
    }
    std::vector<Annotation> out;
    for (const auto& ann : anns) {
        const bool inside = ann.bbox.x >= tile_rect.x && ann.bbox.y >= tile_rect.y &&
                            ann.bbox.right() <= tile_rect.right() && ann.bbox.bottom() <= tile_rect.bottom();
        const BBox inter = inside ? ann.bbox : intersect(ann.bbox, tile_rect);
        if (!inter.valid()) continue;
        if (inter.area() < min_visible_fraction * ann.bbox.area()) continue;
        out.push_back({ann.class_id, inter.translated(-tile_rect.x, -tile_rect.y)});
    }
    return out;
}

std::vector<Detection> non_max_suppression(std::vector<Detection> dets, double iou_threshold) {
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw UsageError("NMS IoU threshold must be in [0, 1]");
    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
        return a.bbox.x < b.bbox.x;
    });
    std::vector<Detection> kept;
    for (const auto& d : dets) {
        const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            if (k.class_id != d.class_id) return false;
            if (!intersect(k.bbox, d.bbox).valid()) return false;
            return iou(k.bbox, d.bbox) >= iou_threshold;
        });
        if (!duplicate) kept.push_back(d);
    }
    return kept;
}

std::vector<Detection> stitch_detections(const std::vector<TileDetections>& per_tile, double dedup_iou) {
    std::vector<Detection> all;
    for (const auto& t : per_tile) {
        for (const auto& d : t.detections) {
            Detection moved = d;
            moved.bbox = d.bbox.translated(t.offset_x, t.offset_y);
            all.push_back(moved);
        }
    }
    return non_max_suppression(std::move(all), dedup_iou);
}

}  // namespace uvgb
