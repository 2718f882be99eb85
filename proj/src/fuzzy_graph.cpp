#include "umaplab/fuzzy_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace umaplab {

namespace {

constexpr const char* kModule = "fuzzy_graph";

double adjusted_gap(double distance, double rho) {
    return std::max(0.0, distance - rho);
}

} // namespace

std::size_t SmoothKnnParams::num_flagged() const {
    return static_cast<std::size_t>(
        std::count_if(status.begin(), status.end(), [](SigmaStatus s) { return s != SigmaStatus::solved; }));
}

double membership_sum(std::span<const double> distances, double rho, double sigma) {
    double total = 0.0;
    for (double d : distances) {
        total += std::exp(-adjusted_gap(d, rho) / sigma);
    }
    return total;
}

SmoothKnnParams smooth_knn_params(const KnnGraph& knn, const SmoothKnnOptions& options) {
    if (knn.k < 2) {
        throw ConfigError(kModule, "bandwidth calibration needs k >= 2 (log2 k must exceed 0), got k = " +
                                       std::to_string(knn.k));
    }
    const std::size_t n = knn.n;
    const double target = std::log2(static_cast<double>(knn.k));

    SmoothKnnParams out;
    out.rho.assign(n, 0.0);
    out.sigma.assign(n, 0.0);
    out.status.assign(n, SigmaStatus::solved);
    out.residual.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto dist = knn.neighbor_distances(i);

        double rho = 0.0;
        for (double d : dist) {
            if (d > 0.0) {
                rho = d; // rows are sorted, so the first positive distance is the minimum
                break;
            }
        }

        std::size_t zero_gaps = 0;
        double positive_sum = 0.0;
        std::size_t positive_count = 0;
        for (double d : dist) {
            const double gap = adjusted_gap(d, rho);
            if (gap > 0.0) {
                positive_sum += gap;
                ++positive_count;
            } else {
                ++zero_gaps;
            }
        }

        const double scale = positive_count > 0 ? positive_sum / static_cast<double>(positive_count) : 1.0;
        double lo = options.bracket_lo * scale;
        double hi = options.bracket_hi * scale;

        double sigma;
        SigmaStatus status = SigmaStatus::solved;
        if (positive_count == 0) {
            // The sum is k for every sigma.
            sigma = hi;
            status = SigmaStatus::all_gaps_zero;
        } else if (static_cast<double>(zero_gaps) >= target) {
            // The sum decreases towards zero_gaps as sigma -> 0 and never reaches the target.
            sigma = lo;
            status = SigmaStatus::target_below_floor;
        } else if (membership_sum(dist, rho, lo) > target) {
            sigma = lo;
            status = SigmaStatus::outside_bracket;
        } else if (membership_sum(dist, rho, hi) < target) {
            sigma = hi;
            status = SigmaStatus::outside_bracket;
        } else {
            // The sum is increasing in sigma.
            for (int iter = 0; iter < options.max_iterations; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) {
                    break;
                }
                if (membership_sum(dist, rho, mid) < target) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const double r_lo = std::abs(membership_sum(dist, rho, lo) - target);
            const double r_hi = std::abs(membership_sum(dist, rho, hi) - target);
            sigma = r_lo <= r_hi ? lo : hi;
        }

        const double residual = std::abs(membership_sum(dist, rho, sigma) - target);
        if (status == SigmaStatus::solved && residual > options.tolerance) {
            status = SigmaStatus::outside_bracket;
        }
        out.rho[i] = rho;
        out.sigma[i] = sigma;
        out.status[i] = status;
        out.residual[i] = residual;
    }
    return out;
}

double DirectedWeights::weight(std::size_t i, std::size_t j) const {
    for (const auto& e : row(i)) {
        if (e.col == j) {
            return e.weight;
        }
    }
    return 0.0;
}

DirectedWeights directed_weights(const KnnGraph& knn, const SmoothKnnParams& params) {
    if (params.rho.size() != knn.n || params.sigma.size() != knn.n) {
        throw ConfigError(kModule, "smooth-kNN parameters do not match the neighbor graph");
    }
    DirectedWeights out;
    out.n = knn.n;
    out.row_ptr.reserve(knn.n + 1);
    out.row_ptr.push_back(0);
    out.entries.reserve(knn.n * knn.k);
    for (std::size_t i = 0; i < knn.n; ++i) {
        const auto idx = knn.neighbors(i);
        const auto dist = knn.neighbor_distances(i);
        for (std::size_t r = 0; r < knn.k; ++r) {
            const double w = std::exp(-adjusted_gap(dist[r], params.rho[i]) / params.sigma[i]);
            if (w > 0.0) {
                out.entries.push_back({idx[r], w});
            }
        }
        out.row_ptr.push_back(out.entries.size());
    }
    return out;
}

double fuzzy_union(double a, double b) {
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return std::min(1.0, hi + lo * (1.0 - hi));
}

SimilarityGraph SimilarityGraph::from_edges(std::size_t n, std::vector<Edge> edges) {
    for (auto& e : edges) {
        if (e.i == e.j) {
            throw ConfigError(kModule, "self-loop at vertex " + std::to_string(e.i));
        }
        if (e.i >= n || e.j >= n) {
            throw ConfigError(kModule, "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                           ") out of range for n = " + std::to_string(n));
        }
        if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
            throw ConfigError(kModule, "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                           ") weight outside [0, 1]");
        }
        if (e.i > e.j) {
            std::swap(e.i, e.j);
        }
    }
    std::erase_if(edges, [](const Edge& e) { return e.weight == 0.0; });
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return x.i != y.i ? x.i < y.i : x.j < y.j;
    });
    for (std::size_t e = 1; e < edges.size(); ++e) {
        if (edges[e].i == edges[e - 1].i && edges[e].j == edges[e - 1].j) {
            throw ConfigError(kModule, "duplicate edge (" + std::to_string(edges[e].i) + ", " +
                                           std::to_string(edges[e].j) + ")");
        }
    }

    SimilarityGraph g;
    g.n_ = n;
    std::vector<std::size_t> counts(n, 0);
    for (const auto& e : edges) {
        ++counts[e.i];
        ++counts[e.j];
    }
    g.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        g.row_ptr_[i + 1] = g.row_ptr_[i] + counts[i];
    }
    g.entries_.resize(g.row_ptr_[n]);
    std::vector<std::size_t> fill(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
    for (const auto& e : edges) {
        g.entries_[fill[e.i]++] = {e.j, e.weight};
        g.entries_[fill[e.j]++] = {e.i, e.weight};
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(g.entries_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[i]),
                  g.entries_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[i + 1]),
                  [](const Entry& x, const Entry& y) { return x.col < y.col; });
    }
    g.edges_ = std::move(edges);
    return g;
}

SimilarityGraph SimilarityGraph::from_dense(const Eigen::MatrixXd& weights) {
    if (weights.rows() != weights.cols()) {
        throw ConfigError(kModule, "dense weight matrix must be square");
    }
    const auto n = static_cast<std::size_t>(weights.rows());
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (w != 0.0) {
                edges.push_back({static_cast<Index>(i), static_cast<Index>(j), w});
            }
        }
    }
    return from_edges(n, std::move(edges));
}

double SimilarityGraph::weight(std::size_t i, std::size_t j) const {
    const auto row = neighbors(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Entry& e, std::size_t col) { return e.col < col; });
    return (it != row.end() && it->col == j) ? it->weight : 0.0;
}

std::vector<double> SimilarityGraph::degrees() const {
    std::vector<double> deg(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (const auto& e : neighbors(i)) {
            deg[i] += e.weight;
        }
    }
    return deg;
}

Eigen::MatrixXd SimilarityGraph::to_dense() const {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& e : edges_) {
        dense(e.i, e.j) = e.weight;
        dense(e.j, e.i) = e.weight;
    }
    return dense;
}

SimilarityGraph symmetrize(const DirectedWeights& directed) {
    struct Half {
        Index lo;
        Index hi;
        bool forward; // stored as lo -> hi
        double weight;
    };
    std::vector<Half> halves;
    halves.reserve(directed.entries.size());
    for (std::size_t i = 0; i < directed.n; ++i) {
        for (const auto& e : directed.row(i)) {
            const auto src = static_cast<Index>(i);
            if (src == e.col) {
                throw ConfigError(kModule, "directed weights contain a self-loop at " + std::to_string(i));
            }
            halves.push_back({std::min(src, e.col), std::max(src, e.col), src < e.col, e.weight});
        }
    }
    std::sort(halves.begin(), halves.end(), [](const Half& x, const Half& y) {
        if (x.lo != y.lo) {
            return x.lo < y.lo;
        }
        if (x.hi != y.hi) {
            return x.hi < y.hi;
        }
        return x.forward && !y.forward;
    });

    std::vector<SimilarityGraph::Edge> edges;
    edges.reserve(halves.size());
    for (std::size_t h = 0; h < halves.size();) {
        double forward = 0.0;
        double backward = 0.0;
        std::size_t next = h;
        while (next < halves.size() && halves[next].lo == halves[h].lo && halves[next].hi == halves[h].hi) {
            (halves[next].forward ? forward : backward) = halves[next].weight;
            ++next;
        }
        edges.push_back({halves[h].lo, halves[h].hi, fuzzy_union(forward, backward)});
        h = next;
    }
    return SimilarityGraph::from_edges(directed.n, std::move(edges));
}

FuzzyGraphResult build_fuzzy_graph(const KnnGraph& knn, const SmoothKnnOptions& options) {
    FuzzyGraphResult out;
    out.params = smooth_knn_params(knn, options);
    out.graph = symmetrize(directed_weights(knn, out.params));
    return out;
}

void write_edge_list(std::ostream& out, const SimilarityGraph& graph) {
    char buffer[64];
    for (const auto& e : graph.edges()) {
        auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), e.weight, std::chars_format::general, 17);
        out << e.i << ' ' << e.j << ' ' << std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)) << '\n';
    }
}

void write_edge_list(const std::filesystem::path& path, const SimilarityGraph& graph) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError(kModule, "cannot write " + path.string());
    }
    write_edge_list(out, graph);
}

SimilarityGraph read_edge_list(std::istream& in, std::size_t n) {
    std::vector<SimilarityGraph::Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    std::size_t max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream fields(line);
        long long i = -1;
        long long j = -1;
        double w = 0.0;
        std::string rest;
        if (!(fields >> i >> j >> w) || (fields >> rest) || i < 0 || j < 0 || i >= j) {
            throw ParseError(kModule, "malformed edge-list line " + std::to_string(line_no) + ": '" + line + "'",
                             line_no, 0);
        }
        max_index = std::max(max_index, static_cast<std::size_t>(j));
        edges.push_back({static_cast<Index>(i), static_cast<Index>(j), w});
    }
    const std::size_t count = std::max(n, edges.empty() ? std::size_t{0} : max_index + 1);
    return SimilarityGraph::from_edges(count, std::move(edges));
}

SimilarityGraph read_edge_list(const std::filesystem::path& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(kModule, "cannot open " + path.string(), 0, 0);
    }
    return read_edge_list(in, n);
}

} // namespace umaplab
