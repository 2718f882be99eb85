#ifndef UMAPLAB_EQUIVALENCE_LAB_HPP
#define UMAPLAB_EQUIVALENCE_LAB_HPP

#include "umaplab/common.hpp"
#include "umaplab/embedding_kernel.hpp"
#include "umaplab/fuzzy_graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file equivalence_lab.hpp
 *
 * @brief Numerical certificates that the fuzzy-graph embedding objective, its initialization and
 * its sampler reduce to spectral clustering on the fuzzy graph.
 *
 * Every check produces an EquivalenceReport whose verdict is recomputable:
 * `passed == (residual <= tolerance)`. Checks that combine several measured
 * quantities report the worst one in units of its own tolerance (tolerance 1)
 * and keep the raw values in `context`.
 */

namespace umaplab {

enum class Claim {
    gaussian_exact,
    cauchy_first_order,
    spectral_optimality,
    expected_loss,
    laplacian_identity,
    taylor_bound,
    ncut_relaxation,
};

std::string claim_id(Claim claim);
Claim parse_claim(std::string_view id);
const std::vector<Claim>& all_claims();

/// Fault injection for testing the harness itself.
enum class Sabotage { none, laplacian_sign };
Sabotage parse_sabotage(std::string_view name);

struct EquivalenceReport {
    Claim claim = Claim::gaussian_exact;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    /// Instance descriptor and raw measurements.
    nlohmann::json context = nlohmann::json::object();

    bool verdict_consistent() const { return passed == (residual <= tolerance); }
};

nlohmann::json to_json(const EquivalenceReport& report);
nlohmann::json to_json(const std::vector<EquivalenceReport>& reports);

/// Fuzzy graph built through the real pipeline from a random Gaussian-mixture sample.
struct PipelineInstance {
    RowMatrix data;
    std::vector<int> labels;
    SimilarityGraph graph;
    std::size_t k = 0;
};
PipelineInstance make_pipeline_instance(std::size_t n, std::uint64_t seed, std::size_t k = 10);

/// The two-blob fixture: two 50-point Gaussian blobs in 2-D built with gen_blobs,
/// centers (0, 0) and (10, 0), std 0.5.
PipelineInstance two_blob_fixture(std::uint64_t seed = 42, std::size_t k = 15);

/// Standard normal n x d matrix.
RowMatrix random_embedding(std::size_t n, std::size_t d, std::uint64_t seed);

/// Relative gap between -sum v log Phi_G and (1/tau) tr(Y^T L Y) on given inputs.
EquivalenceReport check_gaussian_exactness(const SimilarityGraph& graph, const RowMatrix& y, double tau,
                                           Sabotage sabotage = Sabotage::none);
/// Same, on a pipeline graph of n points and a random n x d embedding.
EquivalenceReport check_gaussian_exactness(std::size_t n, std::size_t d, double tau, std::uint64_t seed,
                                           Sabotage sabotage = Sabotage::none);

/// Rescales Y so the largest squared distance over graph edges equals `max_sq_dist`.
RowMatrix scale_to_edge_sq_dist(const SimilarityGraph& graph, const RowMatrix& y, double max_sq_dist);

/**
 * Cauchy kernel with b = 1 at one scale: Y is rescaled so every neighbor squared
 * distance is at most `scale`, and the relative gap between the attraction and
 * 2a tr(Y^T L Y) is compared against a * scale (which dominates the first-order
 * error t/2 / (1 - t/2) for t = a * scale <= 1).
 */
EquivalenceReport check_cauchy_first_order(std::size_t n, std::size_t d, double a, double scale, std::uint64_t seed);

/// The scale sweep {0.1, 0.01, 0.001}; reports the worst normalized gap and
/// whether the relative gap decreases monotonically.
EquivalenceReport check_cauchy_sweep(std::size_t n, std::size_t d, double a, std::uint64_t seed);

/// Error-bound soundness: residual = |attract - 2a tr| / bound, tolerance 1.
EquivalenceReport check_taylor_bound(const SimilarityGraph& graph, const RowMatrix& y, double a);
EquivalenceReport check_taylor_bound_suite(std::size_t instances, std::uint64_t seed);

/// (t - log(1 + t)) / log(1 + t): relative error of the first-order expansion on one edge.
double first_order_relative_error(double t);

/**
 * Compares the spectral embedding against `trials` random orthonormal frames
 * orthogonal to the null space, and its trace against the sum of its eigenvalues.
 * The null space is spanned by D^{1/2} 1_C over the connected components C.
 */
EquivalenceReport check_spectral_optimality(const SimilarityGraph& graph, std::size_t d, std::size_t trials,
                                            std::uint64_t seed);

/// Orthonormal basis of the normalized-Laplacian null space, one column per component.
Eigen::MatrixXd null_space_basis(const SimilarityGraph& graph);

/// Monte Carlo mean of per-step losses against the expected epoch loss, in standard errors.
EquivalenceReport check_expected_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p,
                                      std::size_t n_neg, std::size_t n_draws, std::uint64_t seed);

/// Edge-sum against dense tr(Z^T L Z) on random symmetric W and Z (n <= 50, d <= 5).
EquivalenceReport check_laplacian_identity(std::size_t trials, std::uint64_t seed);

/// Generalized (L, D) against normalized-Laplacian eigenpairs on random connected graphs.
EquivalenceReport check_ncut_relaxation(std::size_t graphs, std::size_t d, std::uint64_t seed);

/// Random connected graph: a random spanning path plus each other pair with probability `density`.
SimilarityGraph random_connected_graph(std::size_t n, double density, std::uint64_t seed);

/// phi(t) = log(1 + a t) is increasing and concave on the grid (finite differences).
bool kernelized_objective_is_concave_increasing(double a, double t_max = 10.0, std::size_t points = 1000);

struct SuiteOptions {
    std::uint64_t seed = 42;
    /// Empty means every claim.
    std::set<Claim> claims;
    Sabotage sabotage = Sabotage::none;
};

/// Runs the selected claims; each draws its own seed from (seed, claim id).
std::vector<EquivalenceReport> run_suite(const SuiteOptions& options = {});

struct KernelTableRow {
    std::string kernel;
    std::string attractive_term;
    std::string nature;
    double attract = 0.0;
    /// Relative gap to the Laplacian form; absent for the kernelized row.
    std::optional<double> residual;
    std::string note;
};

/**
 * The three kernel rows on one shared pipeline instance: Gaussian (exact),
 * fitted Cauchy (kernelized, no quadratic form) and Cauchy a = b = 1 with
 * neighbor squared distances scaled to `small_scale` (first order).
 */
std::vector<KernelTableRow> emit_table1(std::uint64_t seed = 42, double small_scale = 1e-3);

std::string render_table1(const std::vector<KernelTableRow>& rows);
nlohmann::json to_json(const std::vector<KernelTableRow>& rows);

} // namespace umaplab

#endif
