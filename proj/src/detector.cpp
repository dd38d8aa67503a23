#include <algorithm>
#include <string>

#include "uvgb/detect.hpp"
#include "uvgb/error.hpp"
#include "uvgb/tiling.hpp"

namespace uvgb {

DetectorHandle DetectorHandle::baseline(BlobDetectorConfig cfg, double threshold) {
    DetectorHandle h;
    h.kind = DetectorKind::baseline;
    h.blob = cfg;
    h.confidence_threshold = threshold;
    h.validate();
    return h;
}

DetectorHandle DetectorHandle::external(std::shared_ptr<InferenceBackend> backend, double threshold) {
    DetectorHandle h;
    h.kind = DetectorKind::external;
    h.backend = std::move(backend);
    h.confidence_threshold = threshold;
    h.validate();
    return h;
}

void DetectorHandle::validate() const {
    if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
        throw UsageError("confidence threshold must be in [0, 1]");
    }
    if (kind == DetectorKind::baseline) blob.validate();
    if (kind == DetectorKind::external && !backend) throw BackendError("external detector has no inference backend");
}

std::vector<Detection> run_detector(const DetectorHandle& handle, const MonoImage& img) {
    handle.validate();
    std::vector<Detection> raw;
    if (handle.kind == DetectorKind::baseline) {
        raw = detect_blobs(img, handle.blob);
    } else {
        try {
            raw = handle.backend->infer(img);
        } catch (const BackendError&) {
            throw;
        } catch (const std::exception& e) {
            throw BackendError(handle.backend->name() + " inference failed: " + e.what());
        }
    }
    std::erase_if(raw, [&](const Detection& d) { return d.confidence < handle.confidence_threshold; });
    return raw;
}

std::vector<Detection> detect_frame_tiled(const DetectorHandle& handle, const MonoImage& frame,
                                          const TilingParams& tiling) {
    std::vector<TileDetections> per_tile;
    for (const auto& t : tile(frame, tiling.tile_size, tiling.overlap)) {
        per_tile.push_back({run_detector(handle, t.image), t.offset_x, t.offset_y});
    }
    return stitch_detections(per_tile, tiling.dedup_iou);
}

}  // namespace uvgb

#ifndef UVGB_HAVE_ONNX
namespace uvgb {

bool onnx_backend_available() noexcept { return false; }

std::shared_ptr<InferenceBackend> make_onnx_backend(const OnnxModelConfig& cfg) {
    throw BackendError("this build has no ONNX support; cannot load " + cfg.model_path.string());
}

}  // namespace uvgb
#endif
