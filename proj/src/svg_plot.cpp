#include "umaplab/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace umaplab {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

Range padded_range(const Eigen::Ref<const Eigen::VectorXd>& v) {
    Range r{v.minCoeff(), v.maxCoeff()};
    if (!(r.hi > r.lo)) {
        r.lo -= 1.0;
        r.hi += 1.0;
    }
    return r;
}

} // namespace

void write_scatter_svg(std::ostream& out, const RowMatrix& points, std::span<const int> labels,
                       const ScatterStyle& style) {
    const auto n = points.rows();
    if (n == 0 || points.cols() == 0) {
        throw ConfigError("svg_plot", "nothing to plot");
    }
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
        throw ConfigError("svg_plot", "label count " + std::to_string(labels.size()) + " does not match " +
                                          std::to_string(n) + " points");
    }
    const Eigen::VectorXd xs = points.col(0);
    const Eigen::VectorXd ys = points.cols() > 1 ? Eigen::VectorXd(points.col(1)) : Eigen::VectorXd::Zero(n);
    const Range rx = padded_range(xs);
    const Range ry = padded_range(ys);
    const double plot_w = style.width - 2.0 * style.margin;
    const double plot_h = style.height - 2.0 * style.margin;
    auto sx = [&](double x) { return style.margin + (x - rx.lo) / (rx.hi - rx.lo) * plot_w; };
    auto sy = [&](double y) { return style.height - style.margin - (y - ry.lo) / (ry.hi - ry.lo) * plot_h; };

    out << std::fixed << std::setprecision(2);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
        << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty()) {
        out << "<text x=\"" << style.width / 2.0 << "\" y=\"" << style.margin / 2.0
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(style.title)
            << "</text>\n";
    }

    // Axes along the bottom and left edges of the plot area, with end labels.
    const double x0 = style.margin;
    const double x1 = style.width - style.margin;
    const double y0 = style.height - style.margin;
    const double y1 = style.margin;
    out << "<g stroke=\"black\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\"/>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    out << std::setprecision(3);
    out << "<text x=\"" << x0 << "\" y=\"" << y0 + 14 << "\">" << rx.lo << "</text>\n";
    out << "<text x=\"" << x1 << "\" y=\"" << y0 + 14 << "\" text-anchor=\"end\">" << rx.hi << "</text>\n";
    out << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 << "\" text-anchor=\"end\">" << ry.lo << "</text>\n";
    out << "<text x=\"" << x0 - 4 << "\" y=\"" << y1 + 4 << "\" text-anchor=\"end\">" << ry.hi << "</text>\n";
    out << "</g>\n";

    out << std::setprecision(2);
    out << "<g stroke=\"none\" fill-opacity=\"0.8\">\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        const char* color = kPalette[0];
        if (!labels.empty()) {
            const int l = labels[static_cast<std::size_t>(i)];
            color = kPalette[static_cast<std::size_t>(((l % 10) + 10) % 10)];
        }
        out << "<circle cx=\"" << sx(xs(i)) << "\" cy=\"" << sy(ys(i)) << "\" r=\"" << style.radius << "\" fill=\""
            << color << "\"/>\n";
    }
    out << "</g>\n</svg>\n";
}

void write_scatter_svg(const std::filesystem::path& path, const RowMatrix& points, std::span<const int> labels,
                       const ScatterStyle& style) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("svg_plot", "cannot open '" + path.string() + "' for writing");
    }
    write_scatter_svg(out, points, labels, style);
}

} // namespace umaplab
