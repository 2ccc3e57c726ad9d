#pragma once

#include "pspec/contours.hpp"
#include "pspec/numerical_range.hpp"

#include <string>

namespace pspec {

/// Minimal SVG renderer: frame with tick labels, eigenvalue crosses, contour
/// polylines labeled by log10(epsilon), and an optional dashed
/// numerical-range boundary.
struct SvgOptions {
    int width = 640;
    int height = 560;
    std::string title;
};

void write_svg_plot(const std::string& path, const GridSpec& window,
                    const std::vector<Complex>& eigenvalues,
                    const ContourSet& contours,
                    const NumericalRangeBoundary* range = nullptr,
                    const SvgOptions& opts = {});

}  // namespace pspec
