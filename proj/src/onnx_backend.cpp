#include <algorithm>
#include <mutex>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include "uvgb/detect.hpp"
#include "uvgb/error.hpp"
#include "uvgb/tiling.hpp"

namespace uvgb {

namespace {

class OnnxBackend final : public InferenceBackend {
public:
    explicit OnnxBackend(OnnxModelConfig cfg) : cfg_(std::move(cfg)) {
        try {
            net_ = cv::dnn::readNetFromONNX(cfg_.model_path.string());
        } catch (const cv::Exception& e) {
            throw BackendError("cannot load ONNX model " + cfg_.model_path.string() + ": " + e.what());
        }
        if (net_.empty()) throw BackendError("ONNX model " + cfg_.model_path.string() + " is empty");
        net_.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
        net_.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
    }

    std::vector<Detection> infer(const MonoImage& img) override {
        const MonoImage input = resize(img, cfg_.input_width, cfg_.input_height);
        const int sizes[] = {1, cfg_.input_channels, cfg_.input_height, cfg_.input_width};
        cv::Mat blob(4, sizes, CV_32F);
        auto* data = blob.ptr<float>();
        const std::size_t plane = input.size();
        for (int c = 0; c < cfg_.input_channels; ++c) {
            for (std::size_t i = 0; i < plane; ++i) data[c * plane + i] = input.pixels()[i] / 255.0f;
        }

        cv::Mat out;
        {
            // cv::dnn::Net is not re-entrant.
            std::lock_guard lock(mutex_);
            try {
                net_.setInput(blob);
                out = net_.forward().clone();
            } catch (const cv::Exception& e) {
                throw BackendError(std::string("ONNX forward pass failed: ") + e.what());
            }
        }
        return decode(out, img.width(), img.height());
    }

    std::string name() const override { return "onnx:" + cfg_.model_path.filename().string(); }

private:
    std::vector<Detection> decode(const cv::Mat& out, int frame_w, int frame_h) const {
        if (out.dims != 3 || out.size[0] != 1 || out.size[2] < 6) {
            throw BackendError("unexpected ONNX output shape; expected [1, N, 5 + classes]");
        }
        const int rows = out.size[1];
        const int cols = out.size[2];
        const double sx = static_cast<double>(frame_w) / cfg_.input_width;
        const double sy = static_cast<double>(frame_h) / cfg_.input_height;
        std::vector<Detection> dets;
        const auto* p = out.ptr<float>();
        for (int r = 0; r < rows; ++r, p += cols) {
            const auto best = std::max_element(p + 5, p + cols);
            const double conf = std::clamp(static_cast<double>(p[4]) * *best, 0.0, 1.0);
            if (!(p[2] > 0.0f && p[3] > 0.0f)) continue;
            BBox box{(p[0] - p[2] / 2.0) * sx, (p[1] - p[3] / 2.0) * sy, p[2] * sx, p[3] * sy};
            dets.push_back({static_cast<int>(best - (p + 5)), box, conf});
        }
        return non_max_suppression(std::move(dets), cfg_.nms_iou);
    }

    OnnxModelConfig cfg_;
    cv::dnn::Net net_;
    std::mutex mutex_;
};

}  // namespace

bool onnx_backend_available() noexcept { return true; }

std::shared_ptr<InferenceBackend> make_onnx_backend(const OnnxModelConfig& cfg) {
    if (cfg.input_width <= 0 || cfg.input_height <= 0) throw UsageError("ONNX input size must be positive");
    if (cfg.input_channels != 1 && cfg.input_channels != 3) throw UsageError("ONNX input channels must be 1 or 3");
    if (!std::filesystem::is_regular_file(cfg.model_path)) {
        throw BackendError("model file not readable: " + cfg.model_path.string());
    }
    return std::make_shared<OnnxBackend>(cfg);
}

}  // namespace uvgb
