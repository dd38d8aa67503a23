#include "uvgb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "uvgb/csv.hpp"
#include "uvgb/error.hpp"
#include "uvgb/image_io.hpp"
#include "uvgb/rng.hpp"

namespace uvgb {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(SplitTag tag) noexcept {
    switch (tag) {
        case SplitTag::train: return "train";
        case SplitTag::val: return "val";
        case SplitTag::test: return "test";
        case SplitTag::unsplit: break;
    }
    return "unsplit";
}

SplitTag parse_split_tag(std::string_view text) {
    if (text == "train") return SplitTag::train;
    if (text == "val") return SplitTag::val;
    if (text == "test") return SplitTag::test;
    if (text == "unsplit" || text.empty()) return SplitTag::unsplit;
    throw DataError("unknown split tag '" + std::string(text) + "'");
}

void DatasetManifest::validate() const {
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (!seen.insert(e.image.string()).second) throw DataError("duplicate image path in manifest: " + e.image.string());
        for (const auto& a : e.annotations) {
            if (a.class_id < 0 || static_cast<std::size_t>(a.class_id) >= class_names.size()) {
                throw DataError("class id " + std::to_string(a.class_id) + " in " + e.image.string() +
                                " is not in the class list");
            }
        }
    }
}

std::vector<std::size_t> apportion(std::size_t total, std::span<const double> fractions) {
    std::vector<std::size_t> sizes(fractions.size());
    std::vector<double> remainders(fractions.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double exact = fractions[i] * static_cast<double>(total);
        sizes[i] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = exact - std::floor(exact);
        assigned += sizes[i];
    }
    std::vector<std::size_t> order(fractions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++sizes[order[k % order.size()]];
    return sizes;
}

DatasetManifest split_dataset(const DatasetManifest& manifest, std::array<double, 3> fractions, std::uint64_t seed) {
    if (manifest.entries.empty()) throw DataError("cannot split an empty manifest");
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f >= 0.0)) throw UsageError("split fractions must be non-negative");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw UsageError("split fractions must sum to 1");

    const std::size_t n = manifest.entries.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);

    const auto sizes = apportion(n, fractions);
    constexpr std::array tags{SplitTag::train, SplitTag::val, SplitTag::test};
    DatasetManifest out;
    out.class_names = manifest.class_names;
    out.entries.reserve(n);
    std::size_t pos = 0;
    for (std::size_t part = 0; part < tags.size(); ++part) {
        for (std::size_t k = 0; k < sizes[part]; ++k, ++pos) {
            ManifestEntry e = manifest.entries[order[pos]];
            e.split = tags[part];
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

DatasetManifest load_manifest(const fs::path& path, bool load_annotations) {
    json doc;
    try {
        doc = json::parse(csv::read_file(path));
    } catch (const json::exception& e) {
        throw DataError("malformed manifest " + path.string() + ": " + e.what());
    }
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() || base.empty() ? fs::path(p) : base / p; };

    DatasetManifest m;
    try {
        m.class_names = doc.at("classes").get<std::vector<std::string>>();
        for (const auto& item : doc.at("entries")) {
            ManifestEntry e;
            e.image = item.at("image").get<std::string>();
            if (item.contains("annotations")) e.annotation_file = item.at("annotations").get<std::string>();
            e.split = parse_split_tag(item.value("split", std::string("unsplit")));
            if (load_annotations && !e.annotation_file.empty()) {
                const MonoImage img = load_image(resolve(e.image.string()));
                e.annotations = read_annotations(resolve(e.annotation_file.string()), img.width(), img.height());
            }
            m.entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw DataError("malformed manifest " + path.string() + ": " + e.what());
    }
    m.validate();
    return m;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
    json doc;
    doc["classes"] = manifest.class_names;
    doc["entries"] = json::array();
    for (const auto& e : manifest.entries) {
        json item;
        item["image"] = e.image.string();
        if (!e.annotation_file.empty()) item["annotations"] = e.annotation_file.string();
        item["split"] = std::string(to_string(e.split));
        doc["entries"].push_back(std::move(item));
    }
    csv::write_file(path, doc.dump(2) + "\n");
}

namespace {

std::vector<std::vector<std::string>> tokenized_lines(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        lines.push_back(std::move(tokens));
    }
    return lines;
}

void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) throw UsageError("image dimensions must be positive for box conversion");
}

BBox from_normalized(double cx, double cy, double w, double h, int iw, int ih) {
    return {(cx - w / 2.0) * iw, (cy - h / 2.0) * ih, w * iw, h * ih};
}

std::string format_box(int class_id, const BBox& b, int iw, int ih) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f", class_id, b.center_x() / iw, b.center_y() / ih, b.w / iw,
                  b.h / ih);
    return buf;
}

template <typename Item>
std::vector<Item> parse_boxes(std::string_view text, int iw, int ih, bool with_confidence) {
    check_dims(iw, ih);
    const std::size_t fields = with_confidence ? 6 : 5;
    std::vector<Item> out;
    int line_no = 0;
    for (const auto& tokens : tokenized_lines(text)) {
        ++line_no;
        if (tokens.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (tokens.size() != fields) {
            throw DataError(where + ": expected " + std::to_string(fields) + " fields, got " + std::to_string(tokens.size()));
        }
        const auto cls = csv::to_int(tokens[0], where + " class_id");
        if (cls < 0) throw DataError(where + ": negative class id");
        const double cx = csv::to_double(tokens[1], where + " cx");
        const double cy = csv::to_double(tokens[2], where + " cy");
        const double w = csv::to_double(tokens[3], where + " w");
        const double h = csv::to_double(tokens[4], where + " h");
        if (!(w > 0.0 && h > 0.0)) throw DataError(where + ": box size must be positive");
        Item item;
        item.class_id = static_cast<int>(cls);
        item.bbox = from_normalized(cx, cy, w, h, iw, ih);
        if constexpr (requires { item.confidence; }) {
            const double c = csv::to_double(tokens[5], where + " confidence");
            if (!(c >= 0.0 && c <= 1.0)) throw DataError(where + ": confidence outside [0, 1]");
            item.confidence = c;
        }
        out.push_back(item);
    }
    return out;
}

}  // namespace

std::vector<Annotation> parse_annotations(std::string_view text, int image_w, int image_h) {
    return parse_boxes<Annotation>(text, image_w, image_h, false);
}

std::string format_annotations(const std::vector<Annotation>& anns, int image_w, int image_h) {
    check_dims(image_w, image_h);
    std::string out;
    for (const auto& a : anns) out += format_box(a.class_id, a.bbox, image_w, image_h) + "\n";
    return out;
}

std::vector<Annotation> read_annotations(const fs::path& path, int image_w, int image_h) {
    try {
        return parse_annotations(csv::read_file(path), image_w, image_h);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_annotations(const fs::path& path, const std::vector<Annotation>& anns, int image_w, int image_h) {
    csv::write_file(path, format_annotations(anns, image_w, image_h));
}

std::vector<Detection> parse_detections(std::string_view text, int image_w, int image_h) {
    return parse_boxes<Detection>(text, image_w, image_h, true);
}

std::string format_detections(const std::vector<Detection>& dets, int image_w, int image_h) {
    check_dims(image_w, image_h);
    std::string out;
    char buf[32];
    for (const auto& d : dets) {
        std::snprintf(buf, sizeof buf, " %.6f\n", d.confidence);
        out += format_box(d.class_id, d.bbox, image_w, image_h) + buf;
    }
    return out;
}

std::vector<Detection> read_detections(const fs::path& path, int image_w, int image_h) {
    try {
        return parse_detections(csv::read_file(path), image_w, image_h);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_detections(const fs::path& path, const std::vector<Detection>& dets, int image_w, int image_h) {
    csv::write_file(path, format_detections(dets, image_w, image_h));
}

}  // namespace uvgb
