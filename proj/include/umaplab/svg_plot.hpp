#ifndef UMAPLAB_SVG_PLOT_HPP
#define UMAPLAB_SVG_PLOT_HPP

#include "umaplab/common.hpp"

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

namespace umaplab {

struct ScatterStyle {
    double width = 640.0;
    double height = 640.0;
    double margin = 40.0;
    double radius = 3.0;
    std::string title;
};

/**
 * 2-D scatter of the first two columns of `points` as standalone SVG.
 * One <circle> per row; rows are colored by label when `labels` is non-empty.
 * A single-column input is plotted against zero.
 */
void write_scatter_svg(std::ostream& out, const RowMatrix& points, std::span<const int> labels = {},
                       const ScatterStyle& style = {});
void write_scatter_svg(const std::filesystem::path& path, const RowMatrix& points, std::span<const int> labels = {},
                       const ScatterStyle& style = {});

} // namespace umaplab

#endif
