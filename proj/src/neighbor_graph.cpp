#include "umaplab/neighbor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace umaplab {

namespace {
constexpr const char* kModule = "neighbor_graph";
}

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") {
        return Metric::euclidean;
    }
    throw ConfigError(kModule, "unknown metric '" + std::string(name) + "'");
}

double distance(Metric metric, std::span<const double> x, std::span<const double> y) {
    switch (metric) {
    case Metric::euclidean: {
        double total = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double delta = x[j] - y[j];
            total += delta * delta;
        }
        return std::sqrt(total);
    }
    }
    throw ConfigError(kModule, "unsupported metric");
}

KnnGraph knn_search(const DataMatrix& data, std::size_t k, Metric metric) {
    const std::size_t n = data.n();
    if (n < 2) {
        throw ConfigError(kModule, "neighbor search needs at least 2 points, got " + std::to_string(n));
    }
    if (k < 1 || k >= n) {
        throw ConfigError(kModule, "k must satisfy 1 <= k <= n - 1 (k = " + std::to_string(k) +
                                       ", n = " + std::to_string(n) + ")");
    }

    const RowMatrix& x = data.points();
    const std::size_t dim = data.dim();
    auto point = [&](std::size_t i) { return std::span<const double>(x.data() + i * dim, dim); };

    KnnGraph out;
    out.n = n;
    out.k = k;
    out.indices.resize(n * k);
    out.distances.resize(n * k);

    std::vector<std::pair<double, Index>> candidates(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                candidates[c++] = {distance(metric, point(i), point(j)), static_cast<Index>(j)};
            }
        }
        // Lexicographic pair ordering gives the smaller-index tie rule.
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
        for (std::size_t r = 0; r < k; ++r) {
            out.distances[i * k + r] = candidates[r].first;
            out.indices[i * k + r] = candidates[r].second;
        }
    }
    return out;
}

} // namespace umaplab
