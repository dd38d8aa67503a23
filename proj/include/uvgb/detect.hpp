#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "uvgb/image.hpp"

namespace uvgb {

struct BlobDetectorConfig {
    int brightness_threshold = 200;  ///< pixels >= threshold are foreground
    double min_area_px = 12.0;
    double max_area_px = 2000.0;
    double min_circularity = 0.6;  ///< 4*pi*A / P^2

    void validate() const;
};

/// One 8-connected foreground component.
struct Blob {
    BBox bounds;
    std::size_t area = 0;
    double perimeter = 0.0;
    double circularity = 0.0;
    double mean_brightness = 0.0;
};

/// Labels 8-connected components of pixels >= threshold and measures them.
/// Components are returned in raster order of their first pixel.
std::vector<Blob> find_blobs(const MonoImage& img, int threshold);

/// Brightness-blob baseline: components passing the area and circularity
/// filters become class-0 detections with confidence mean_brightness / 255.
/// Sorted by confidence descending, ties by (y, x) of the box.
std::vector<Detection> detect_blobs(const MonoImage& img, const BlobDetectorConfig& cfg);

/// Narrow boundary to a neural detector: one frame in, scored boxes out.
/// Implementations must tolerate calls from different threads; they may
/// serialize internally.
class InferenceBackend {
public:
    virtual ~InferenceBackend() = default;
    virtual std::vector<Detection> infer(const MonoImage& img) = 0;
    virtual std::string name() const = 0;
};

struct OnnxModelConfig {
    std::filesystem::path model_path;
    int input_width = 416;
    int input_height = 416;
    int input_channels = 3;  ///< mono frames are replicated when 3
    double nms_iou = 0.45;
};

/// YOLO-style ONNX model run through OpenCV dnn. Output rows are
/// (cx, cy, w, h, objectness, class scores...) in input-pixel units.
/// Throws BackendError when the model cannot be loaded or the build has no
/// ONNX support.
std::shared_ptr<InferenceBackend> make_onnx_backend(const OnnxModelConfig& cfg);

bool onnx_backend_available() noexcept;

enum class DetectorKind { baseline, external };

inline constexpr double kDefaultConfidenceThreshold = 0.51;

struct DetectorHandle {
    DetectorKind kind = DetectorKind::baseline;
    BlobDetectorConfig blob;
    std::shared_ptr<InferenceBackend> backend;  ///< set for external
    double confidence_threshold = kDefaultConfidenceThreshold;

    static DetectorHandle baseline(BlobDetectorConfig cfg = {},
                                   double threshold = kDefaultConfidenceThreshold);
    static DetectorHandle external(std::shared_ptr<InferenceBackend> backend,
                                   double threshold = kDefaultConfidenceThreshold);

    void validate() const;
};

/// Raw detector output filtered to confidence >= handle.confidence_threshold.
std::vector<Detection> run_detector(const DetectorHandle& handle, const MonoImage& img);

struct TilingParams {
    int tile_size = 768;
    int overlap = 0;
    double dedup_iou = 0.5;
};

/// Tiles the frame, runs the detector per tile and stitches the results.
std::vector<Detection> detect_frame_tiled(const DetectorHandle& handle, const MonoImage& frame,
                                          const TilingParams& tiling = {});

}  // namespace uvgb
