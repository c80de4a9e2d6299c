#pragma once

#include <string>
#include <vector>

namespace ratchet {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false;
};

struct PlotOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool loglog = false;  // log10 on both axes; nonpositive points dropped
    int width = 640;
    int height = 480;
};

// Minimal SVG chart: axes, ticks, one polyline or point set per series.
void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& opt);

}  // namespace ratchet
