#ifndef UMAPLAB_CONTRASTIVE_SGD_HPP
#define UMAPLAB_CONTRASTIVE_SGD_HPP

#include "umaplab/common.hpp"
#include "umaplab/embedding_kernel.hpp"
#include "umaplab/fuzzy_graph.hpp"
#include "umaplab/objective.hpp"
#include "umaplab/random.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

/**
 * @file contrastive_sgd.hpp
 *
 * @brief Negative-sampling SGD over the fuzzy graph.
 *
 * Each epoch draws `samples_per_epoch` positive events. A positive event picks an
 * undirected edge with probability proportional to its weight, orients it
 * uniformly as (a, b), and moves y_a along the gradient of log Phi(y_a, y_b).
 * It is followed by `n_neg` negative events, each drawing c uniformly from all
 * vertices and moving y_a along the gradient of log(1 - Phi(y_a, y_c)).
 * The learning rate in epoch e (0-based) is initial_lr * (1 - e / n_epochs).
 */

namespace umaplab {

enum class InitMode { spectral, random };
enum class Provenance { spectral, random, external };

InitMode parse_init_mode(std::string_view name);
std::string to_string(Provenance provenance);

struct Embedding {
    RowMatrix coords;
    Provenance provenance = Provenance::external;
};

struct OptimizerConfig {
    std::size_t n_epochs = 200;
    std::size_t n_neg = 5;
    double initial_lr = 1.0;
    /// Per-coordinate gradient clip, applied before scaling by the learning rate.
    double clip = 4.0;
    /// Regularizer of the repulsive 1/s factor.
    double eps = 1e-3;
    std::uint64_t seed = 42;
    /// Also move y_b on positive events (mirrored update).
    bool move_other = false;
    /// Defaults to the number of undirected edges.
    std::optional<std::size_t> samples_per_epoch;
    /// The O(n^2) loss trace is skipped above this many points.
    std::size_t loss_trace_limit = 5000;

    void validate() const;
};

/**
 * @brief Weighted sampler over the undirected edges of a graph.
 *
 * Uses Vose's alias method: O(1) per draw with exact probabilities v_ab / sum v.
 */
class EdgeSampler {
public:
    EdgeSampler(const SimilarityGraph& graph, std::uint64_t seed);

    /// Ordered pair (a, b); the orientation is uniform between the two ends.
    std::pair<Index, Index> sample();

    /// Index into graph.edges() of a weighted draw, without orientation.
    std::size_t sample_edge();

    std::size_t num_edges() const { return edges_.size(); }
    /// Exact probability of drawing edge e.
    double probability(std::size_t e) const { return edges_[e].weight / total_weight_; }

private:
    std::vector<SimilarityGraph::Edge> edges_;
    std::vector<double> threshold_;
    std::vector<std::uint32_t> alias_;
    double total_weight_ = 0.0;
    Rng rng_;
};

std::pair<Index, Index> sample_positive(EdgeSampler& sampler);

/// n_neg vertices drawn uniformly (with replacement) from [0, n).
std::vector<Index> sample_negatives(std::size_t n, std::size_t n_neg, Rng& rng);

/**
 * Spectral mode takes the spectral embedding and scales it so the largest
 * absolute coordinate is 10; random mode draws uniformly from [-10, 10]^d.
 */
Embedding init_embedding(const SimilarityGraph& graph, std::size_t d, InitMode mode, std::uint64_t seed);

struct EpochRecord {
    std::size_t epoch = 0;
    double alpha = 0.0;
    /// Full cross-entropy after the epoch; absent above the trace size limit.
    std::optional<LossReport> loss;
};

struct OptimizeResult {
    Embedding embedding;
    std::optional<LossReport> initial_loss;
    std::vector<EpochRecord> trace;
    /// Negative draws that hit the positive vertex itself and were skipped.
    std::size_t self_negatives = 0;
};

/// Single-threaded and deterministic for a fixed configuration.
OptimizeResult optimize(const SimilarityGraph& graph, const Embedding& initial, const KernelParams& p,
                        const OptimizerConfig& config);

/// One JSON object per epoch: epoch, alpha, total, attract, repel, laplacian_form, taylor_bound.
void write_trace_jsonl(std::ostream& out, const OptimizeResult& result);

/**
 * Monte Carlo estimate of the epoch loss, using the optimizer's own samplers with
 * updates disabled. Each draw is one positive event plus its negatives; the mean
 * per-step loss is scaled by sum_a d_a to the epoch aggregate.
 */
struct StepLossEstimate {
    double aggregate = 0.0;
    /// Standard error of `aggregate`.
    double standard_error = 0.0;
    std::size_t draws = 0;
};
StepLossEstimate estimate_epoch_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p,
                                     std::size_t n_neg, std::size_t n_draws, std::uint64_t seed);

} // namespace umaplab

#endif
