#include "umaplab/contrastive_sgd.hpp"
#include "umaplab/graph_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace umaplab {

namespace {

constexpr const char* kModule = "contrastive_sgd";

void clip_to(std::span<double> g, double limit) {
    for (double& x : g) {
        x = std::clamp(x, -limit, limit);
    }
}

std::span<double> row_span(RowMatrix& y, std::size_t i) {
    return {y.data() + i * static_cast<std::size_t>(y.cols()), static_cast<std::size_t>(y.cols())};
}

std::span<const double> row_span(const RowMatrix& y, std::size_t i) {
    return {y.data() + i * static_cast<std::size_t>(y.cols()), static_cast<std::size_t>(y.cols())};
}

} // namespace

InitMode parse_init_mode(std::string_view name) {
    if (name == "spectral") {
        return InitMode::spectral;
    }
    if (name == "random") {
        return InitMode::random;
    }
    throw ConfigError(kModule, "unknown init mode '" + std::string(name) + "'");
}

std::string to_string(Provenance provenance) {
    switch (provenance) {
    case Provenance::spectral:
        return "spectral";
    case Provenance::random:
        return "random";
    case Provenance::external:
        break;
    }
    return "external";
}

void OptimizerConfig::validate() const {
    if (n_epochs < 1) {
        throw ConfigError(kModule, "n_epochs must be >= 1");
    }
    if (!(initial_lr > 0.0) || !(clip > 0.0) || !(eps > 0.0)) {
        throw ConfigError(kModule, "initial_lr, clip and eps must be positive");
    }
}

EdgeSampler::EdgeSampler(const SimilarityGraph& graph, std::uint64_t seed)
    : edges_(graph.edges()), rng_(seed) {
    const std::size_t m = edges_.size();
    for (const auto& e : edges_) {
        total_weight_ += e.weight;
    }
    threshold_.assign(m, 1.0);
    alias_.resize(m);
    if (m == 0) {
        return;
    }

    std::vector<double> scaled(m);
    std::vector<std::uint32_t> small;
    std::vector<std::uint32_t> large;
    for (std::size_t e = 0; e < m; ++e) {
        scaled[e] = edges_[e].weight * static_cast<double>(m) / total_weight_;
        alias_[e] = static_cast<std::uint32_t>(e);
        (scaled[e] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(e));
    }
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        threshold_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are 1 up to rounding.
    for (auto e : small) {
        threshold_[e] = 1.0;
    }
    for (auto e : large) {
        threshold_[e] = 1.0;
    }
}

std::size_t EdgeSampler::sample_edge() {
    if (edges_.empty()) {
        throw ConfigError(kModule, "cannot sample from a graph without edges");
    }
    const auto column = static_cast<std::size_t>(rng_.index(edges_.size()));
    return rng_.uniform() < threshold_[column] ? column : alias_[column];
}

std::pair<Index, Index> EdgeSampler::sample() {
    const auto& e = edges_[sample_edge()];
    return rng_.index(2) == 0 ? std::pair{e.i, e.j} : std::pair{e.j, e.i};
}

std::pair<Index, Index> sample_positive(EdgeSampler& sampler) {
    return sampler.sample();
}

std::vector<Index> sample_negatives(std::size_t n, std::size_t n_neg, Rng& rng) {
    std::vector<Index> out(n_neg);
    for (auto& c : out) {
        c = static_cast<Index>(rng.index(n));
    }
    return out;
}

Embedding init_embedding(const SimilarityGraph& graph, std::size_t d, InitMode mode, std::uint64_t seed) {
    if (d < 1) {
        throw ConfigError(kModule, "embedding dimension must be >= 1");
    }
    Embedding out;
    if (mode == InitMode::spectral) {
        auto solution = spectral_init(graph, d);
        const double max_abs = solution.vectors.cwiseAbs().maxCoeff();
        if (!(max_abs > 0.0)) {
            throw NumericError(kModule, "spectral initialization returned a zero matrix");
        }
        out.coords = solution.vectors * (10.0 / max_abs);
        out.provenance = Provenance::spectral;
        return out;
    }
    Rng rng(seed);
    out.coords.resize(static_cast<Eigen::Index>(graph.n()), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < out.coords.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.coords.cols(); ++j) {
            out.coords(i, j) = rng.uniform(-10.0, 10.0);
        }
    }
    out.provenance = Provenance::random;
    return out;
}

OptimizeResult optimize(const SimilarityGraph& graph, const Embedding& initial, const KernelParams& p,
                        const OptimizerConfig& config) {
    config.validate();
    p.validate();
    const std::size_t n = graph.n();
    if (static_cast<std::size_t>(initial.coords.rows()) != n || initial.coords.cols() < 1) {
        throw ConfigError(kModule, "initial embedding has shape " + std::to_string(initial.coords.rows()) + "x" +
                                       std::to_string(initial.coords.cols()) + ", expected " + std::to_string(n) +
                                       " rows");
    }

    OptimizeResult result;
    result.embedding = initial;
    RowMatrix& y = result.embedding.coords;
    const std::size_t dim = static_cast<std::size_t>(y.cols());
    const bool trace_loss = n <= config.loss_trace_limit;
    if (trace_loss) {
        result.initial_loss = cross_entropy_loss(graph, y, p);
    }

    const std::size_t samples = config.samples_per_epoch.value_or(graph.num_edges());
    if (samples > 0 && graph.num_edges() == 0) {
        throw ConfigError(kModule, "positive samples requested on a graph without edges");
    }
    EdgeSampler sampler(graph, derive_seed(config.seed, "positive"));
    Rng negative_rng(derive_seed(config.seed, "negative"));
    std::vector<double> grad(dim);

    auto check_finite = [&](std::size_t vertex, std::size_t epoch, std::size_t step) {
        for (double x : row_span(y, vertex)) {
            if (!std::isfinite(x)) {
                throw NumericError(kModule, "non-finite coordinate for vertex " + std::to_string(vertex) +
                                                " at epoch " + std::to_string(epoch) + ", step " +
                                                std::to_string(step));
            }
        }
    };

    result.trace.reserve(config.n_epochs);
    for (std::size_t epoch = 0; epoch < config.n_epochs; ++epoch) {
        const double alpha =
            config.initial_lr * (1.0 - static_cast<double>(epoch) / static_cast<double>(config.n_epochs));

        for (std::size_t step = 0; step < samples; ++step) {
            const auto [a, b] = sampler.sample();
            auto ya = row_span(y, a);
            grad_log_phi(ya, row_span(std::as_const(y), b), p, grad);
            clip_to(grad, config.clip);
            auto yb = row_span(y, b);
            for (std::size_t j = 0; j < dim; ++j) {
                ya[j] += alpha * grad[j];
                if (config.move_other) {
                    yb[j] -= alpha * grad[j];
                }
            }
            check_finite(a, epoch, step);

            for (std::size_t s = 0; s < config.n_neg; ++s) {
                const auto c = static_cast<std::size_t>(negative_rng.index(n));
                if (c == a) {
                    ++result.self_negatives;
                    continue;
                }
                grad_log_one_minus_phi(ya, row_span(std::as_const(y), c), p, config.eps, grad);
                clip_to(grad, config.clip);
                for (std::size_t j = 0; j < dim; ++j) {
                    ya[j] += alpha * grad[j];
                }
            }
            check_finite(a, epoch, step);
            if (config.move_other) {
                check_finite(b, epoch, step);
            }
        }

        EpochRecord record;
        record.epoch = epoch;
        record.alpha = alpha;
        if (trace_loss) {
            record.loss = cross_entropy_loss(graph, y, p);
        }
        result.trace.push_back(std::move(record));
    }
    return result;
}

void write_trace_jsonl(std::ostream& out, const OptimizeResult& result) {
    for (const auto& record : result.trace) {
        nlohmann::json line;
        line["epoch"] = record.epoch;
        line["alpha"] = record.alpha;
        if (record.loss) {
            line.update(to_json(*record.loss));
        } else {
            for (const char* key : {"total", "attract", "repel", "laplacian_form", "taylor_bound"}) {
                line[key] = nullptr;
            }
        }
        out << line.dump() << '\n';
    }
}

StepLossEstimate estimate_epoch_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p,
                                     std::size_t n_neg, std::size_t n_draws, std::uint64_t seed) {
    if (n_draws < 2) {
        throw ConfigError(kModule, "the Monte Carlo estimate needs at least 2 draws");
    }
    const std::size_t n = graph.n();
    EdgeSampler sampler(graph, derive_seed(seed, "positive"));
    Rng negative_rng(derive_seed(seed, "negative"));
    double degree_sum = 0.0;
    for (double d : graph.degrees()) {
        degree_sum += d;
    }

    // Welford running mean and variance.
    double mean = 0.0;
    double m2 = 0.0;
    std::vector<Index> negatives(n_neg);
    for (std::size_t t = 0; t < n_draws; ++t) {
        const auto [a, b] = sampler.sample();
        for (auto& c : negatives) {
            c = static_cast<Index>(negative_rng.index(n));
        }
        const double loss = stochastic_step_loss(a, b, negatives, y, p);
        const double delta = loss - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (loss - mean);
    }
    const double variance = m2 / static_cast<double>(n_draws - 1);

    StepLossEstimate out;
    out.draws = n_draws;
    out.aggregate = degree_sum * mean;
    out.standard_error = degree_sum * std::sqrt(variance / static_cast<double>(n_draws));
    return out;
}

} // namespace umaplab
