#pragma once

#include <vector>

#include "uvgb/image.hpp"

namespace uvgb {

/// Bilinear resize with pixel-centre alignment. Output is clamped to [0,255].
MonoImage resize(const MonoImage& img, int out_w, int out_h);

struct Tile {
    MonoImage image;
    int offset_x = 0;
    int offset_y = 0;
    int valid_w = 0;  ///< unpadded width inside the frame
    int valid_h = 0;
};

/// Tile offsets along one axis for a frame of `extent` pixels.
std::vector<int> tile_offsets(int extent, int tile_size, int overlap);

/// Grid tiling with stride tile_size - overlap. Edge tiles are zero padded to
/// tile_size x tile_size. Tiles are ordered row-major by offset.
std::vector<Tile> tile(const MonoImage& img, int tile_size, int overlap = 0);

/// Rectangles of the unpadded part of each tile, in frame coordinates, in
/// the same order as tile().
std::vector<BBox> tile_rects(int frame_w, int frame_h, int tile_size, int overlap = 0);

inline constexpr double kDefaultMinVisibleFraction = 0.25;

/// Intersects each annotation with tile_rect and re-expresses it in tile
/// coordinates. Annotations keeping less than min_visible_fraction of their
/// original area are dropped.
std::vector<Annotation> clip_annotations_to_tile(const std::vector<Annotation>& anns, const BBox& tile_rect,
                                                 double min_visible_fraction = kDefaultMinVisibleFraction);

struct TileDetections {
    std::vector<Detection> detections;
    int offset_x = 0;
    int offset_y = 0;
};

/// Non-maximum suppression: keeps the highest-confidence box of every group
/// overlapping with IoU >= iou_threshold. Boxes that do not intersect are
/// never suppressed. Output order is confidence descending, ties by (y, x).
std::vector<Detection> non_max_suppression(std::vector<Detection> dets, double iou_threshold);

/// Translates per-tile detections into frame coordinates and merges
/// duplicates from overlapping tiles by NMS at dedup_iou.
std::vector<Detection> stitch_detections(const std::vector<TileDetections>& per_tile, double dedup_iou);

}  // namespace uvgb
