#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasespace/gridfield.hpp"

namespace phasespace::plot {

/// Minimal truecolor PNG writer (8-bit RGB, no interlacing).
void write_png(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb);

/// Renders a 2D grid as a pixel map, nearest-neighbour upscaled. Fields that
/// go negative get a diverging palette centered at zero; nonnegative fields a
/// sequential one. The field time is stamped in the corner.
void heatmap_png(const GridField& f, const std::string& path, int scale = 4);

struct Series {
    std::vector<double> x;
    std::vector<double> y;
};

/// Line chart of one or more series on shared axes with min/max tick labels.
void line_png(const std::vector<Series>& series, const std::string& path, int width = 640,
              int height = 400);

/// Scans a run artifact directory: every grid_*.field becomes a PNG, and
/// observables.csv becomes trace charts. Returns the number of files written.
int render_plots(const std::string& dir);

}  // namespace phasespace::plot
