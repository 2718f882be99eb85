#ifndef UMAPLAB_NEIGHBOR_GRAPH_HPP
#define UMAPLAB_NEIGHBOR_GRAPH_HPP

#include "umaplab/common.hpp"
#include "umaplab/synth_data.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace umaplab {

enum class Metric { euclidean };

/// Looks up a metric by name; throws ConfigError for unknown names.
Metric parse_metric(std::string_view name);

/// Distance between two points under `metric`.
double distance(Metric metric, std::span<const double> x, std::span<const double> y);

/**
 * @brief Directed k-nearest-neighbor lists, stored row-major as n x k arrays.
 *
 * Row i lists the k nearest other points of i by ascending distance, ties broken
 * by the smaller index. Zero-distance (duplicate) neighbors are kept.
 */
struct KnnGraph {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<Index> indices;
    std::vector<double> distances;

    std::span<const Index> neighbors(std::size_t i) const { return {indices.data() + i * k, k}; }
    std::span<const double> neighbor_distances(std::size_t i) const { return {distances.data() + i * k, k}; }
};

/**
 * Exact k-NN by brute force: all n-1 distances per row, then a partial sort on
 * (distance, index). Requires 1 <= k <= n - 1.
 */
KnnGraph knn_search(const DataMatrix& data, std::size_t k, Metric metric = Metric::euclidean);

} // namespace umaplab

#endif
