#ifndef UMAPLAB_SYNTH_DATA_HPP
#define UMAPLAB_SYNTH_DATA_HPP

#include "umaplab/common.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

/**
 * @file synth_data.hpp
 *
 * @brief Labeled synthetic point clouds and CSV input/output.
 */

namespace umaplab {

/**
 * @brief n points in D ambient dimensions, one point per row.
 *
 * Construction validates that D >= 1 and every coordinate is finite. A single point
 * is representable (a one-sample blob); the neighbor search and the CSV loader
 * enforce n >= 2.
 */
class DataMatrix {
public:
    DataMatrix() = default;
    explicit DataMatrix(RowMatrix points);

    const RowMatrix& points() const { return points_; }
    std::size_t n() const { return static_cast<std::size_t>(points_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }

private:
    RowMatrix points_;
};

/**
 * Points plus integer class ids. Labels are evaluation metadata only;
 * nothing in the graph construction reads them.
 */
struct LabeledDataset {
    DataMatrix data;
    std::vector<int> labels;
};

/**
 * Isotropic Gaussian blobs, `n_per_cluster` samples around each center.
 * Points are emitted cluster by cluster and labelled with the center index.
 */
LabeledDataset gen_blobs(std::size_t n_per_cluster,
                         const std::vector<std::vector<double>>& centers,
                         double std_dev,
                         std::uint64_t seed);

/**
 * Two interleaved unit half-circles with Gaussian noise.
 * The first ceil(n/2) points lie on the upper arc centred at (0, 0) (label 0);
 * the rest on the lower arc centred at (1, 0.5) (label 1).
 * Angles are evenly spaced over [0, pi] on each arc.
 */
LabeledDataset gen_two_moons(std::size_t n, double noise, std::uint64_t seed);

/**
 * Reads a comma-separated numeric table. A first row containing any non-numeric
 * cell is treated as a header. When `has_labels` is set the last column must hold
 * integers and becomes the label vector; otherwise all labels are 0.
 */
LabeledDataset load_csv(const std::filesystem::path& path, bool has_labels);

/// Writes points (and labels, when given) with 17 significant digits.
void write_csv(const std::filesystem::path& path,
               const RowMatrix& points,
               std::span<const int> labels = {},
               const std::vector<std::string>& header = {});

} // namespace umaplab

#endif
