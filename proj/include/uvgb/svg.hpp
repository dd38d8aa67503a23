#pragma once

#include <string>
#include <vector>

namespace uvgb::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool line = true;  ///< polyline when true, markers otherwise
    std::string label;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int width = 640;
    int height = 480;
};

/// Minimal static XY plot with axes, ticks and a legend.
std::string plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace uvgb::svg
