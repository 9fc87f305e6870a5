#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace seqcast::plot {

inline constexpr std::size_t kMaxSeries = 8;

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (t, value)
};

struct ChartOptions {
    std::string title;
    std::string x_label = "t [s]";
    std::string y_label = "velocity [m/s]";
    int width = 800;
    int height = 420;
};

/// Self-contained SVG line chart with axes and a legend; identical input
/// yields byte-identical output.
std::string plot_series(std::span<const Series> series, const ChartOptions& options = {});

}  // namespace seqcast::plot
