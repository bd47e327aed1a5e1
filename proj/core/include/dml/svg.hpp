#pragma once

#include <string>
#include <vector>

namespace dml {

// Deterministic SVG line plots: fixed 900x600 viewport, no timestamps,
// fixed number formatting, so identical inputs give identical bytes.
struct SvgSeries {
    std::string id;           // group id, also used in the legend
    std::string color;        // CSS color
    std::vector<double> x, y;
    bool dashed = false;
};

struct SvgPlot {
    std::string title;
    std::string x_label, y_label;
    std::vector<SvgSeries> series;
    // marker points drawn as filled circles
    struct Marker {
        double x, y;
        std::string color;
        std::string label;
    };
    std::vector<Marker> markers;

    std::string render() const;
    void write(const std::string& path) const;
};

}  // namespace dml
