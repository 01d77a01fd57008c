#pragma once

#include <string>
#include <vector>

#include "gaze3d/matrix.hpp"

namespace gaze3d {

// Minimal SVG 1.1 emission (rect/line/text only), enough for the correlation
// heatmap and the importance bar chart.
std::string svg_heatmap(const Matrix& values, const std::vector<std::string>& labels,
                        const std::string& title);

std::string svg_bar_chart(const std::vector<double>& values,
                          const std::vector<std::string>& labels,
                          const std::string& title);

}  // namespace gaze3d
