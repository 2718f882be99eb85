#include "umaplab/synth_data.hpp"
#include "umaplab/random.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace umaplab {

namespace {

constexpr const char* kModule = "synth_data";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) {
        return false;
    }
    if (cell.front() == '+') {
        cell.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

bool parse_int(std::string_view cell, int& out) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return !cell.empty() && ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

} // namespace

DataMatrix::DataMatrix(RowMatrix points) : points_(std::move(points)) {
    if (points_.rows() < 1) {
        throw ConfigError(kModule, "a data matrix needs at least 1 point");
    }
    if (points_.cols() < 1) {
        throw ConfigError(kModule, "a data matrix needs at least 1 dimension");
    }
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        for (Eigen::Index j = 0; j < points_.cols(); ++j) {
            if (!std::isfinite(points_(i, j))) {
                throw ConfigError(kModule, "non-finite coordinate at point " + std::to_string(i) +
                                               ", dimension " + std::to_string(j));
            }
        }
    }
}

LabeledDataset gen_blobs(std::size_t n_per_cluster,
                         const std::vector<std::vector<double>>& centers,
                         double std_dev,
                         std::uint64_t seed) {
    if (centers.empty()) {
        throw ConfigError(kModule, "gen_blobs requires at least one center");
    }
    if (n_per_cluster < 1) {
        throw ConfigError(kModule, "gen_blobs requires n_per_cluster >= 1");
    }
    if (!(std_dev > 0.0)) {
        throw ConfigError(kModule, "gen_blobs requires std > 0");
    }
    const std::size_t dim = centers.front().size();
    if (dim == 0) {
        throw ConfigError(kModule, "gen_blobs centers must have at least one coordinate");
    }
    for (const auto& c : centers) {
        if (c.size() != dim) {
            throw ConfigError(kModule, "gen_blobs centers have inconsistent dimensions");
        }
    }

    const std::size_t n = n_per_cluster * centers.size();
    RowMatrix points(n, dim);
    std::vector<int> labels(n);
    Rng rng(seed);
    std::size_t row = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (std::size_t s = 0; s < n_per_cluster; ++s, ++row) {
            for (std::size_t j = 0; j < dim; ++j) {
                points(row, j) = rng.normal(centers[c][j], std_dev);
            }
            labels[row] = static_cast<int>(c);
        }
    }

    LabeledDataset out;
    out.data = DataMatrix(std::move(points));
    out.labels = std::move(labels);
    return out;
}

LabeledDataset gen_two_moons(std::size_t n, double noise, std::uint64_t seed) {
    if (n < 2) {
        throw ConfigError(kModule, "gen_two_moons requires n >= 2");
    }
    if (!(noise >= 0.0)) {
        throw ConfigError(kModule, "gen_two_moons requires noise >= 0");
    }
    const std::size_t n_upper = (n + 1) / 2;
    const std::size_t n_lower = n - n_upper;
    RowMatrix points(n, 2);
    std::vector<int> labels(n);

    auto angle = [](std::size_t i, std::size_t count) {
        return count > 1 ? M_PI * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    };
    for (std::size_t i = 0; i < n_upper; ++i) {
        const double t = angle(i, n_upper);
        points(i, 0) = std::cos(t);
        points(i, 1) = std::sin(t);
        labels[i] = 0;
    }
    for (std::size_t i = 0; i < n_lower; ++i) {
        const double t = angle(i, n_lower);
        points(n_upper + i, 0) = 1.0 - std::cos(t);
        points(n_upper + i, 1) = 0.5 - std::sin(t);
        labels[n_upper + i] = 1;
    }
    if (noise > 0.0) {
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            points(i, 0) += rng.normal(0.0, noise);
            points(i, 1) += rng.normal(0.0, noise);
        }
    }
    return {DataMatrix(std::move(points)), std::move(labels)};
}

LabeledDataset load_csv(const std::filesystem::path& path, bool has_labels) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(kModule, "cannot open " + path.string(), 0, 0);
    }

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool first_content = true;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_commas(line);

        if (first_content) {
            first_content = false;
            bool numeric = true;
            for (auto cell : cells) {
                double tmp;
                if (!parse_double(cell, tmp)) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) {
                width = cells.size();
                continue; // header row
            }
        }

        if (width == 0) {
            width = cells.size();
        } else if (cells.size() != width) {
            throw ParseError(kModule,
                             path.string() + ": row " + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " columns, expected " + std::to_string(width),
                             line_no, 0);
        }

        const std::size_t n_coords = has_labels ? cells.size() - 1 : cells.size();
        if (n_coords == 0) {
            throw ParseError(kModule, path.string() + ": row " + std::to_string(line_no) + " has no coordinates",
                             line_no, 0);
        }
        std::vector<double> row(n_coords);
        for (std::size_t c = 0; c < n_coords; ++c) {
            if (!parse_double(cells[c], row[c])) {
                throw ParseError(kModule,
                                 path.string() + ": non-numeric cell '" + std::string(trim(cells[c])) + "' at row " +
                                     std::to_string(line_no) + ", column " + std::to_string(c + 1),
                                 line_no, c + 1);
            }
        }
        if (has_labels) {
            int label;
            if (!parse_int(cells.back(), label)) {
                throw ParseError(kModule,
                                 path.string() + ": label '" + std::string(trim(cells.back())) + "' at row " +
                                     std::to_string(line_no) + ", column " + std::to_string(cells.size()) +
                                     " is not an integer",
                                 line_no, cells.size());
            }
            labels.push_back(label);
        }
        rows.push_back(std::move(row));
    }

    if (rows.size() < 2) {
        throw ParseError(kModule, path.string() + ": need at least 2 data rows, found " + std::to_string(rows.size()),
                         line_no, 0);
    }

    RowMatrix points(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            points(i, j) = rows[i][j];
        }
    }
    if (!has_labels) {
        labels.assign(rows.size(), 0);
    }
    return {DataMatrix(std::move(points)), std::move(labels)};
}

void write_csv(const std::filesystem::path& path,
               const RowMatrix& points,
               std::span<const int> labels,
               const std::vector<std::string>& header) {
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(points.rows())) {
        throw ConfigError(kModule, "label count does not match point count");
    }
    std::ofstream out(path);
    if (!out) {
        throw ConfigError(kModule, "cannot write " + path.string());
    }
    out.precision(17);
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            out << (c ? "," : "") << header[c];
        }
        out << '\n';
    }
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j) {
            out << (j ? "," : "") << points(i, j);
        }
        if (!labels.empty()) {
            out << ',' << labels[i];
        }
        out << '\n';
    }
}

} // namespace umaplab
