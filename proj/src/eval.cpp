#include "uvgb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "uvgb/csv.hpp"
#include "uvgb/error.hpp"
#include "uvgb/svg.hpp"

namespace uvgb {

double iou(const BBox& a, const BBox& b) {
    if (!a.valid() || !b.valid()) throw UsageError("IoU requires positive-area boxes");
    const double inter = intersect(a, b).area();
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

namespace {

// Deterministic ranking key independent of input order.
auto rank_key(const Detection& d) { return std::make_tuple(-d.confidence, d.bbox.y, d.bbox.x, d.bbox.h, d.bbox.w); }

}  // namespace

std::vector<std::size_t> ranking_order(const std::vector<Detection>& dets) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank_key(dets[a]) < rank_key(dets[b]); });
    return order;
}

MatchResult match_detections(const std::vector<Detection>& dets, const std::vector<Annotation>& gts,
                             double iou_threshold) {
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw UsageError("IoU threshold must be in [0, 1]");
    MatchResult result;
    result.detection_matched.assign(dets.size(), false);
    std::vector<bool> gt_taken(gts.size(), false);
    for (const std::size_t di : ranking_order(dets)) {
        double best = 0.0;
        std::size_t best_gt = gts.size();
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (gt_taken[gi]) continue;
            const double v = iou(dets[di].bbox, gts[gi].bbox);
            if (v > best) {
                best = v;
                best_gt = gi;
            }
        }
        // A box with no overlap is never a match, even at threshold 0.
        if (best_gt < gts.size() && best >= iou_threshold) {
            gt_taken[best_gt] = true;
            result.detection_matched[di] = true;
            result.pairs.push_back({di, best_gt, best});
        }
    }
    result.tp = result.pairs.size();
    result.fp = dets.size() - result.tp;
    result.fn = gts.size() - result.tp;
    return result;
}

Rates rates(std::size_t tp, std::size_t fp, std::size_t fn) {
    const std::size_t total = tp + fp + fn;
    if (total == 0) throw UsageError("rates are undefined when tp, fp and fn are all zero");
    const double t = static_cast<double>(total);
    return {static_cast<double>(tp) / t, static_cast<double>(fp) / t, static_cast<double>(fn) / t};
}

double average_precision_from_flags(const std::vector<bool>& tp_in_rank_order, std::size_t total_gt) {
    if (total_gt == 0) return tp_in_rank_order.empty() ? 1.0 : 0.0;
    const std::size_t n = tp_in_rank_order.size();
    std::vector<double> precision(n);
    std::size_t tp = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (tp_in_rank_order[k]) ++tp;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    }
    // Envelope: best precision at this recall or any higher one.
    for (std::size_t k = n; k-- > 1;) precision[k - 1] = std::max(precision[k - 1], precision[k]);
    double ap = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (tp_in_rank_order[k]) ap += precision[k];
    }
    return ap / static_cast<double>(total_gt);
}

double average_precision(const std::vector<Detection>& dets, const std::vector<Annotation>& gts, double iou_threshold) {
    const auto match = match_detections(dets, gts, iou_threshold);
    std::vector<bool> flags;
    flags.reserve(dets.size());
    for (const std::size_t i : ranking_order(dets)) flags.push_back(match.detection_matched[i]);
    return average_precision_from_flags(flags, gts.size());
}

EvalReport evaluate(const FrameDetections& dets, const FrameAnnotations& gts, double iou_threshold) {
    {
        std::vector<std::string> missing;
        for (const auto& [k, v] : dets) {
            if (!gts.contains(k)) missing.push_back("detections for unknown frame '" + k + "'");
        }
        for (const auto& [k, v] : gts) {
            if (!dets.contains(k)) missing.push_back("no detections entry for frame '" + k + "'");
        }
        if (!missing.empty()) throw DataError("mismatched frame sets: " + missing.front() +
                                              (missing.size() > 1 ? " (and " + std::to_string(missing.size() - 1) + " more)" : ""));
    }

    std::set<int> class_ids;
    EvalReport report;
    report.iou_threshold = iou_threshold;
    report.frames = gts.size();
    for (const auto& [k, v] : dets) {
        report.detections += v.size();
        for (const auto& d : v) class_ids.insert(d.class_id);
    }
    for (const auto& [k, v] : gts) {
        report.ground_truths += v.size();
        for (const auto& a : v) class_ids.insert(a.class_id);
    }

    struct Ranked {
        Detection det;
        bool tp;
    };
    for (const int cls : class_ids) {
        ClassEval ce;
        ce.class_id = cls;
        std::vector<Ranked> pooled;
        std::size_t class_gts = 0;
        for (const auto& [frame, frame_gts_all] : gts) {
            std::vector<Detection> fd;
            std::vector<Annotation> fg;
            for (const auto& d : dets.at(frame)) {
                if (d.class_id == cls) fd.push_back(d);
            }
            for (const auto& a : frame_gts_all) {
                if (a.class_id == cls) fg.push_back(a);
            }
            const auto m = match_detections(fd, fg, iou_threshold);
            ce.tp += m.tp;
            ce.fp += m.fp;
            ce.fn += m.fn;
            class_gts += fg.size();
            for (const std::size_t i : ranking_order(fd)) pooled.push_back({fd[i], m.detection_matched[i]});
        }
        // Frames are visited in key order, so a stable sort keeps ties deterministic.
        std::stable_sort(pooled.begin(), pooled.end(),
                         [](const Ranked& a, const Ranked& b) { return rank_key(a.det) < rank_key(b.det); });
        std::vector<bool> flags;
        std::size_t tp = 0;
        for (std::size_t k = 0; k < pooled.size(); ++k) {
            flags.push_back(pooled[k].tp);
            if (pooled[k].tp) ++tp;
            const double recall = class_gts ? static_cast<double>(tp) / static_cast<double>(class_gts) : 0.0;
            ce.pr_curve.push_back({recall, static_cast<double>(tp) / static_cast<double>(k + 1), pooled[k].det.confidence});
        }
        ce.ap = average_precision_from_flags(flags, class_gts);
        report.tp += ce.tp;
        report.fp += ce.fp;
        report.fn += ce.fn;
        report.classes.push_back(std::move(ce));
    }

    if (report.tp + report.fp > 0) report.precision = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fp);
    if (report.tp + report.fn > 0) report.recall = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fn);
    if (report.tp + report.fp + report.fn > 0) report.rates = rates(report.tp, report.fp, report.fn);
    if (report.classes.empty()) {
        report.map = 1.0;
    } else {
        double sum = 0.0;
        for (const auto& c : report.classes) sum += c.ap;
        report.map = sum / static_cast<double>(report.classes.size());
    }
    return report;
}

namespace {

std::string rate_fields(const std::optional<Rates>& r) {
    if (!r) return ",,";
    return csv::format_double(r->tp_rate) + "," + csv::format_double(r->fp_rate) + "," + csv::format_double(r->fn_rate);
}

}  // namespace

std::string eval_summary_csv(const EvalReport& report) {
    std::string out = "scope,iou_threshold,frames,detections,ground_truths,tp,fp,fn,tp_rate,fp_rate,fn_rate,precision,recall,ap\n";
    out += "all," + csv::format_double(report.iou_threshold) + "," + std::to_string(report.frames) + "," +
           std::to_string(report.detections) + "," + std::to_string(report.ground_truths) + "," +
           std::to_string(report.tp) + "," + std::to_string(report.fp) + "," + std::to_string(report.fn) + "," +
           rate_fields(report.rates) + "," + csv::format_double(report.precision) + "," +
           csv::format_double(report.recall) + "," + csv::format_double(report.map) + "\n";
    for (const auto& c : report.classes) {
        const std::size_t total = c.tp + c.fp + c.fn;
        const auto r = total ? std::optional<Rates>(rates(c.tp, c.fp, c.fn)) : std::nullopt;
        const double p = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
        const double rc = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
        out += "class_" + std::to_string(c.class_id) + "," + csv::format_double(report.iou_threshold) + "," +
               std::to_string(report.frames) + "," + std::to_string(c.tp + c.fp) + "," + std::to_string(c.tp + c.fn) +
               "," + std::to_string(c.tp) + "," + std::to_string(c.fp) + "," + std::to_string(c.fn) + "," +
               rate_fields(r) + "," + csv::format_double(p) + "," + csv::format_double(rc) + "," +
               csv::format_double(c.ap) + "\n";
    }
    return out;
}

std::string eval_pr_csv(const EvalReport& report) {
    std::string out = "class_id,rank,confidence,recall,precision\n";
    for (const auto& c : report.classes) {
        for (std::size_t k = 0; k < c.pr_curve.size(); ++k) {
            const auto& p = c.pr_curve[k];
            out += std::to_string(c.class_id) + "," + std::to_string(k + 1) + "," + csv::format_double(p.confidence) +
                   "," + csv::format_double(p.recall) + "," + csv::format_double(p.precision) + "\n";
        }
    }
    return out;
}

std::string eval_pr_svg(const EvalReport& report) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    std::vector<svg::Series> series;
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        const auto& c = report.classes[i];
        svg::Series s;
        s.color = palette[i % std::size(palette)];
        s.label = "class " + std::to_string(c.class_id) + " AP=" + csv::format_double(std::round(c.ap * 1e4) / 1e4);
        for (const auto& p : c.pr_curve) {
            s.x.push_back(p.recall);
            s.y.push_back(p.precision);
        }
        series.push_back(std::move(s));
    }
    svg::PlotSpec spec;
    spec.title = "Precision-recall @ IoU " + csv::format_double(report.iou_threshold);
    spec.x_label = "recall";
    spec.y_label = "precision";
    return svg::plot(spec, series);
}

}  // namespace uvgb
