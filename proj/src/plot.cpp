#include "seqcast/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "seqcast/error.hpp"

namespace seqcast::plot {

namespace {

constexpr const char* kPalette[kMaxSeries] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double value, int decimals = 2) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

std::string tick_label(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4g", std::abs(value) < 1e-12 ? 0.0 : value);
    return buffer;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void widen_if_flat() {
        if (hi - lo < 1e-12) {
            lo -= 1.0;
            hi += 1.0;
        }
    }
};

}  // namespace

std::string plot_series(std::span<const Series> series, const ChartOptions& options) {
    if (series.empty()) fail(ErrorCode::EmptySeries, "no series to plot");
    if (series.size() > kMaxSeries) {
        fail(ErrorCode::TooManySeries, std::to_string(series.size()) + " series exceed the limit of 8");
    }
    Range xr;
    Range yr;
    for (const auto& s : series) {
        if (s.points.empty()) fail(ErrorCode::EmptySeries, "series '" + s.name + "' has no points");
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) {
                fail(ErrorCode::NonFiniteInput, "series '" + s.name + "' has a non-finite point");
            }
            xr.include(x);
            yr.include(y);
        }
    }
    xr.widen_if_flat();
    yr.widen_if_flat();

    const double left = 70.0;
    const double right = options.width - 150.0;
    const double top = 40.0;
    const double bottom = options.height - 50.0;
    const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
    const auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + ' ' +
           std::to_string(options.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
               escape_xml(options.title) + "</text>\n";
    }

    // Axes, grid and ticks.
    svg += "<g stroke=\"#000\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(right) + "\" y2=\"" +
           fixed(bottom) + "\"/>\n";
    svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(left) + "\" y2=\"" +
           fixed(bottom) + "\"/>\n";
    svg += "</g>\n<g fill=\"#000\">\n";
    constexpr int kTicks = 5;
    for (int k = 0; k < kTicks; ++k) {
        const double fraction = static_cast<double>(k) / (kTicks - 1);
        const double xv = xr.lo + fraction * (xr.hi - xr.lo);
        const double yv = yr.lo + fraction * (yr.hi - yr.lo);
        svg += "<line x1=\"" + fixed(px(xv)) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(px(xv)) + "\" y2=\"" +
               fixed(bottom + 5) + "\" stroke=\"#000\"/>\n";
        svg += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(bottom + 18) + "\" text-anchor=\"middle\">" +
               tick_label(xv) + "</text>\n";
        svg += "<line x1=\"" + fixed(left - 5) + "\" y1=\"" + fixed(py(yv)) + "\" x2=\"" + fixed(right) +
               "\" y2=\"" + fixed(py(yv)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(py(yv) + 4) + "\" text-anchor=\"end\">" +
               tick_label(yv) + "</text>\n";
    }
    svg += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(options.height - 12.0) +
           "\" text-anchor=\"middle\">" + escape_xml(options.x_label) + "</text>\n";
    svg += "<text transform=\"translate(18 " + fixed((top + bottom) / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape_xml(options.y_label) + "</text>\n";
    svg += "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[s]) + "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [x, y] : series[s].points) {
            if (!first) svg += ' ';
            first = false;
            svg += fixed(px(x)) + ',' + fixed(py(y));
        }
        svg += "\"/>\n";
    }

    svg += "<g class=\"legend\">\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double y = top + 10.0 + 20.0 * static_cast<double>(s);
        svg += "<line x1=\"" + fixed(right + 15) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(right + 40) +
               "\" y2=\"" + fixed(y) + "\" stroke=\"" + kPalette[s] + "\" stroke-width=\"3\"/>\n";
        svg += "<text x=\"" + fixed(right + 46) + "\" y=\"" + fixed(y + 4) + "\">" + escape_xml(series[s].name) +
               "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace seqcast::plot
