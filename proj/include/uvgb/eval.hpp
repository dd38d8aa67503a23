#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uvgb/image.hpp"

namespace uvgb {

/// Intersection over union. Throws UsageError for a non-positive-area box.
double iou(const BBox& a, const BBox& b);

struct MatchedPair {
    std::size_t detection = 0;
    std::size_t ground_truth = 0;
    double iou = 0.0;
};

struct MatchResult {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::vector<MatchedPair> pairs;
    /// Per detection (input order): true when matched.
    std::vector<bool> detection_matched;
};

/// Order in which detections are ranked: confidence descending, ties by the
/// box (y, x, h, w), then input index.
std::vector<std::size_t> ranking_order(const std::vector<Detection>& dets);

/// Greedy one-to-one matching: detections in ranking order each claim the
/// unmatched ground truth of highest IoU, provided IoU >= iou_threshold.
/// Class ids are not inspected; filter by class first.
MatchResult match_detections(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                             double iou_threshold = 0.5);

struct Rates {
    double tp_rate = 0.0;
    double fp_rate = 0.0;
    double fn_rate = 0.0;
};

/// Each count over tp + fp + fn. Throws UsageError when all are zero.
Rates rates(std::size_t tp, std::size_t fp, std::size_t fn);

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
    double confidence = 0.0;
};

/// All-points interpolated AP from ranked TP flags. `total_gt` is the number
/// of ground truths the flags were matched against.
double average_precision_from_flags(const std::vector<bool>& tp_in_rank_order, std::size_t total_gt);

/// AP for a single class (all-points interpolation of the precision
/// envelope). 1 when both inputs are empty, 0 when only gts is empty.
double average_precision(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                         double iou_threshold = 0.5);

using FrameDetections = std::map<std::string, std::vector<Detection>>;
using FrameAnnotations = std::map<std::string, std::vector<Annotation>>;

struct ClassEval {
    int class_id = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double ap = 0.0;
    std::vector<PrPoint> pr_curve;
};

struct EvalReport {
    double iou_threshold = 0.5;
    std::size_t frames = 0;
    std::size_t detections = 0;
    std::size_t ground_truths = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    std::optional<Rates> rates;  ///< absent when tp + fp + fn == 0
    double map = 0.0;
    std::vector<ClassEval> classes;  ///< sorted by class id
};

/// Matches per frame and class, then pools all frames before computing
/// counts, rates and AP. Throws DataError when the frame keys differ.
EvalReport evaluate(const FrameDetections& dets, const FrameAnnotations& gts, double iou_threshold = 0.5);

std::string eval_summary_csv(const EvalReport& report);
std::string eval_pr_csv(const EvalReport& report);
std::string eval_pr_svg(const EvalReport& report);

}  // namespace uvgb
