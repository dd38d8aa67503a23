#include "uvgb/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace uvgb::svg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string plot(const PlotSpec& spec, const std::vector<Series>& series) {
    constexpr double left = 60, right = 20, top = 40, bottom = 50;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    const double xspan = spec.x_max > spec.x_min ? spec.x_max - spec.x_min : 1.0;
    const double yspan = spec.y_max > spec.y_min ? spec.y_max - spec.y_min : 1.0;
    auto sx = [&](double x) { return left + (std::clamp(x, spec.x_min, spec.x_max) - spec.x_min) / xspan * pw; };
    auto sy = [&](double y) { return top + ph - (std::clamp(y, spec.y_min, spec.y_max) - spec.y_min) / yspan * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
           std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(spec.title) + "</text>\n";
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = spec.x_min + xspan * i / 5.0;
        const double fy = spec.y_min + yspan * i / 5.0;
        out += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(top + ph + 16) + "\" text-anchor=\"middle\">" +
               num(fx) + "</text>\n";
        out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(fy) + 4) + "\" text-anchor=\"end\">" + num(fy) +
               "</text>\n";
    }
    out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(spec.height - 10.0) + "\" text-anchor=\"middle\">" +
           escape(spec.x_label) + "</text>\n";
    out += "<text transform=\"translate(14," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           escape(spec.y_label) + "</text>\n";

    double legend_y = top + 16;
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.line) {
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < n; ++i) out += num(sx(s.x[i])) + "," + num(sy(s.y[i])) + " ";
            out += "\"/>\n";
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                out += "<circle cx=\"" + num(sx(s.x[i])) + "\" cy=\"" + num(sy(s.y[i])) + "\" r=\"4\" fill=\"" +
                       s.color + "\"/>\n";
            }
        }
        if (!s.label.empty()) {
            out += "<text x=\"" + num(left + pw - 8) + "\" y=\"" + num(legend_y) + "\" text-anchor=\"end\" fill=\"" +
                   s.color + "\">" + escape(s.label) + "</text>\n";
            legend_y += 16;
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace uvgb::svg
