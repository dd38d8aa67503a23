#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uvgb/image.hpp"

namespace uvgb {

enum class SplitTag { unsplit, train, val, test };

std::string_view to_string(SplitTag tag) noexcept;
SplitTag parse_split_tag(std::string_view text);

struct ManifestEntry {
    std::filesystem::path image;
    std::filesystem::path annotation_file;  ///< may be empty
    std::vector<Annotation> annotations;
    SplitTag split = SplitTag::unsplit;
};

struct DatasetManifest {
    std::vector<std::string> class_names{"flower"};
    std::vector<ManifestEntry> entries;

    /// Throws DataError on duplicate image paths or unknown class ids.
    void validate() const;
};

/// Shuffles entries with `seed` and assigns train/val/test tags by
/// cumulative fractions. Part sizes use largest-remainder rounding, ties
/// going to the earlier part.
DatasetManifest split_dataset(const DatasetManifest& manifest, std::array<double, 3> fractions, std::uint64_t seed);

/// Largest-remainder apportionment of `total` items over `fractions`.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> fractions);

// Manifest file: JSON object
//   { "classes": ["flower"],
//     "entries": [ { "image": "a.png", "annotations": "a.txt", "split": "train" } ] }
// Relative paths are resolved against the manifest's directory on load and
// written as given on save.
DatasetManifest load_manifest(const std::filesystem::path& path, bool load_annotations = true);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Annotation text files: one `class_id cx cy w h` line per box, centre and
// size normalised by the image dimensions, written with 6 decimals.
std::vector<Annotation> parse_annotations(std::string_view text, int image_w, int image_h);
std::string format_annotations(const std::vector<Annotation>& anns, int image_w, int image_h);
std::vector<Annotation> read_annotations(const std::filesystem::path& path, int image_w, int image_h);
void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& anns, int image_w,
                       int image_h);

// Detection text files: `class_id cx cy w h confidence`, normalised.
std::vector<Detection> parse_detections(std::string_view text, int image_w, int image_h);
std::string format_detections(const std::vector<Detection>& dets, int image_w, int image_h);
std::vector<Detection> read_detections(const std::filesystem::path& path, int image_w, int image_h);
void write_detections(const std::filesystem::path& path, const std::vector<Detection>& dets, int image_w,
                      int image_h);

}  // namespace uvgb
