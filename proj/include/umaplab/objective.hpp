#ifndef UMAPLAB_OBJECTIVE_HPP
#define UMAPLAB_OBJECTIVE_HPP

#include "umaplab/common.hpp"
#include "umaplab/embedding_kernel.hpp"
#include "umaplab/fuzzy_graph.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <vector>

/**
 * @file objective.hpp
 *
 * @brief Full-batch fuzzy cross-entropy and its attraction/repulsion pieces,
 * the Laplacian forms of the attraction, the second-order error bound, and the
 * expected and per-step losses of negative-sampling SGD.
 *
 * Sums over "i != j" run over ordered pairs, so every undirected edge counts twice.
 */

namespace umaplab {

/// Phi is kept within [kLogClamp, 1 - kLogClamp] wherever log(1 - Phi) is taken.
inline constexpr double kLogClamp = 1e-12;

/// log(1 - Phi) with Phi clamped to at most 1 - kLogClamp.
double clamped_log_one_minus_phi(double sq_dist, const KernelParams& p);

struct LossReport {
    double total = 0.0;
    double attract = 0.0;
    double repel = 0.0;
    /// c tr(Y^T L Y) with c = 1/tau (Gaussian) or 2a (Cauchy, b = 1); absent otherwise.
    std::optional<double> laplacian_form;
    /// (a^2 / 2) sum_{i != j} v_ij ||y_i - y_j||^4; Cauchy with b = 1 only.
    std::optional<double> taylor_bound;
    /// Attraction per undirected edge (both orientations), aligned with graph.edges().
    std::vector<double> per_edge_attract;
};

nlohmann::json to_json(const LossReport& report);

/**
 * Fuzzy cross-entropy sum_{i != j} [-v_ij log Phi_ij - (1 - v_ij) log(1 - Phi_ij)].
 * O(n^2). The attractive log is evaluated in closed form; the repulsive log uses
 * the clamp.
 */
LossReport cross_entropy_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p,
                              bool per_edge = false);

/// -sum_{i != j} v_ij log Phi_ij over the stored edges only.
double attractive_term(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p);

/// Laplacian constant c: 1/tau for the Gaussian, 2a for the Cauchy kernel with b = 1.
/// Throws ConfigError for b != 1.
double laplacian_constant(const KernelParams& p);

struct LaplacianComparison {
    double attract = 0.0;
    /// c tr(Y^T L Y), with the trace from the sparse matrix product Y^T (L Y).
    double laplacian_form = 0.0;
    double gap = 0.0;
    /// gap / |attract|, or 0 when both sides vanish.
    double relative_gap = 0.0;
};

/// Compares the attraction with its Laplacian form. Throws for Cauchy kernels with b != 1.
LaplacianComparison laplacian_comparison(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p);

/// (a^2 / 2) sum_{i != j} v_ij ||y_i - y_j||^4.
double taylor_error_bound(const SimilarityGraph& graph, const RowMatrix& y, double a);

/**
 * Expected epoch loss of negative sampling:
 * -sum_{(a,b)} v_ab log Phi_ab - (n_neg / n) sum_a d_a sum_{c != a} log(1 - Phi_ac),
 * with (a, b) over ordered edges.
 */
double expected_sgd_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p, std::size_t n_neg);

/**
 * One step's loss -log Phi(y_a, y_b) - sum_i log(1 - Phi(y_a, y_{c_i})).
 * Negatives equal to `a` are skipped, as in the optimizer.
 */
double stochastic_step_loss(std::size_t a, std::size_t b, std::span<const Index> negatives, const RowMatrix& y,
                            const KernelParams& p);

} // namespace umaplab

#endif
