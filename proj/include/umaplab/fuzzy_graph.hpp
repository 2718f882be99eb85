#ifndef UMAPLAB_FUZZY_GRAPH_HPP
#define UMAPLAB_FUZZY_GRAPH_HPP

#include "umaplab/common.hpp"
#include "umaplab/neighbor_graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

/**
 * @file fuzzy_graph.hpp
 *
 * @brief The fuzzy neighbor graph: per-point bandwidth calibration, directed
 * exponential memberships and their probabilistic-union symmetrization.
 */

namespace umaplab {

/// Outcome of the per-point bandwidth search.
enum class SigmaStatus {
    solved,
    /// Every adjusted gap is zero, so the membership sum equals k for any sigma.
    all_gaps_zero,
    /// The sum stays above log2(k) for every positive sigma (too many zero gaps).
    target_below_floor,
    /// The root lies outside the search bracket.
    outside_bracket,
};

/**
 * Per-point local connectivity offset `rho` and bandwidth `sigma`.
 * Rows whose calibration equation has no root in the bracket are flagged and
 * carry a clamped sigma.
 */
struct SmoothKnnParams {
    std::vector<double> rho;
    std::vector<double> sigma;
    std::vector<SigmaStatus> status;
    /// |sum_j exp(-max(0, d_ij - rho_i) / sigma_i) - log2 k| at the returned sigma.
    std::vector<double> residual;

    bool flagged(std::size_t i) const { return status[i] != SigmaStatus::solved; }
    std::size_t num_flagged() const;
};

/// Bisection settings for the bandwidth search. The bracket is relative to the
/// mean positive gap of the row.
struct SmoothKnnOptions {
    double bracket_lo = 1e-8;
    double bracket_hi = 1e4;
    int max_iterations = 64;
    double tolerance = 1e-5;
};

/// sum_j exp(-max(0, d_j - rho) / sigma) over one neighbor row.
double membership_sum(std::span<const double> distances, double rho, double sigma);

/**
 * Calibrates every row so that the membership sum equals log2(k).
 * Requires k >= 2. Unsolvable rows are clamped to the bracket edge closest to
 * where the sum approaches the target and flagged; they are not errors.
 */
SmoothKnnParams smooth_knn_params(const KnnGraph& knn, const SmoothKnnOptions& options = {});

/**
 * @brief Sparse directed membership matrix in compressed-row form.
 *
 * Row i holds v_{j|i} for the k-NN edges of i, every weight in (0, 1].
 * Memberships that underflow to exactly zero are not stored.
 */
struct DirectedWeights {
    struct Entry {
        Index col;
        double weight;
    };

    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<Entry> entries;

    std::span<const Entry> row(std::size_t i) const {
        return {entries.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
    }
    /// v_{j|i}, or 0 when j is not a stored neighbor of i.
    double weight(std::size_t i, std::size_t j) const;
};

DirectedWeights directed_weights(const KnnGraph& knn, const SmoothKnnParams& params);

/// Probabilistic t-conorm a + b - ab, evaluated as max + min * (1 - max) so the
/// result is exactly commutative and never below either argument.
double fuzzy_union(double a, double b);

/**
 * @brief Sparse symmetric weighted graph with zero diagonal.
 *
 * The canonical storage is the upper-triangle edge list (i < j), sorted. Both
 * adjacency directions are materialized from it, so (i, j) and (j, i) agree
 * bit for bit.
 */
class SimilarityGraph {
public:
    struct Edge {
        Index i;
        Index j;
        double weight;
    };
    struct Entry {
        Index col;
        double weight;
    };

    SimilarityGraph() = default;

    /**
     * Builds a graph from undirected edges. Each edge must have i != j, both ends
     * in [0, n), weight in [0, 1], and appear once (in either orientation).
     * Zero-weight edges are dropped.
     */
    static SimilarityGraph from_edges(std::size_t n, std::vector<Edge> edges);

    /// Dense symmetric input; only the strict upper triangle is read.
    static SimilarityGraph from_dense(const Eigen::MatrixXd& weights);

    std::size_t n() const { return n_; }
    /// Upper-triangle edges, sorted by (i, j).
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t num_edges() const { return edges_.size(); }
    /// Stored entries in both directions.
    std::size_t nnz() const { return entries_.size(); }

    std::span<const Entry> neighbors(std::size_t i) const {
        return {entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }
    double weight(std::size_t i, std::size_t j) const;

    /// d_i = sum_j v_ij, summed in column order.
    std::vector<double> degrees() const;

    Eigen::MatrixXd to_dense() const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<Entry> entries_;
};

SimilarityGraph symmetrize(const DirectedWeights& directed);

/// Full construction: calibration, directed weights, symmetrization.
struct FuzzyGraphResult {
    SmoothKnnParams params;
    SimilarityGraph graph;
};
FuzzyGraphResult build_fuzzy_graph(const KnnGraph& knn, const SmoothKnnOptions& options = {});

/// Edge-list text: one `i j v_ij` line per edge with i < j, 17 significant digits.
void write_edge_list(std::ostream& out, const SimilarityGraph& graph);
void write_edge_list(const std::filesystem::path& path, const SimilarityGraph& graph);

/// Reads the edge-list format. The vertex count is max index + 1 unless `n` is larger.
SimilarityGraph read_edge_list(std::istream& in, std::size_t n = 0);
SimilarityGraph read_edge_list(const std::filesystem::path& path, std::size_t n = 0);

} // namespace umaplab

#endif
