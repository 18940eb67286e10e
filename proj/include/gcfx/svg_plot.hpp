#pragma once

#include <string>
#include <vector>

#include "gcfx/common.hpp"

namespace gcfx {

struct PlotSeries {
  std::string label;
  std::vector<double> ys;
};

/// Minimal static SVG renderers for the report artifacts. One x value per
/// sample, shared across series.
void svg_line_plot(const std::string& path, const std::string& title,
                   const std::string& x_label,
                   const std::vector<double>& xs,
                   const std::vector<PlotSeries>& series);

/// Grid heatmap; values are clipped to [0, 1] for the color ramp.
void svg_heatmap(const std::string& path, const std::string& title,
                 const Mat& grid);

}  // namespace gcfx
