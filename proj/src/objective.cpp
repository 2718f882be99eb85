#include "umaplab/objective.hpp"
#include "umaplab/graph_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace umaplab {

namespace {

constexpr const char* kModule = "objective";

void check_shape(const SimilarityGraph& graph, const RowMatrix& y) {
    if (static_cast<std::size_t>(y.rows()) != graph.n()) {
        throw ConfigError(kModule, "embedding has " + std::to_string(y.rows()) + " rows but the graph has " +
                                       std::to_string(graph.n()) + " vertices");
    }
}

double sq_dist(const RowMatrix& y, std::size_t i, std::size_t j) {
    return (y.row(static_cast<Eigen::Index>(i)) - y.row(static_cast<Eigen::Index>(j))).squaredNorm();
}

bool has_laplacian_form(const KernelParams& p) {
    return p.family == KernelFamily::gaussian || p.b == 1.0;
}

} // namespace

double clamped_log_one_minus_phi(double sq_dist, const KernelParams& p) {
    static const double floor = std::log(kLogClamp);
    const double value = log_one_minus_phi(sq_dist, p);
    // Same as clamping Phi into [kLogClamp, 1 - kLogClamp] before the log.
    return std::min(std::max(value, floor), std::log1p(-kLogClamp));
}

nlohmann::json to_json(const LossReport& report) {
    nlohmann::json j;
    j["total"] = report.total;
    j["attract"] = report.attract;
    j["repel"] = report.repel;
    j["laplacian_form"] = report.laplacian_form ? nlohmann::json(*report.laplacian_form) : nlohmann::json(nullptr);
    j["taylor_bound"] = report.taylor_bound ? nlohmann::json(*report.taylor_bound) : nlohmann::json(nullptr);
    return j;
}

LossReport cross_entropy_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p, bool per_edge) {
    check_shape(graph, y);
    p.validate();
    const std::size_t n = graph.n();

    LossReport report;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = graph.neighbors(i);
        auto next = row.begin();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            double v = 0.0;
            if (next != row.end() && next->col == j) {
                v = next->weight;
                ++next;
            }
            const double s = sq_dist(y, i, j);
            if (v > 0.0) {
                report.attract -= v * log_phi(s, p);
            }
            if (v < 1.0) {
                report.repel -= (1.0 - v) * clamped_log_one_minus_phi(s, p);
            }
        }
    }
    report.total = report.attract + report.repel;

    if (has_laplacian_form(p)) {
        report.laplacian_form = laplacian_constant(p) * laplacian_quadratic(graph, y);
    }
    if (p.family == KernelFamily::cauchy_ab && p.b == 1.0) {
        report.taylor_bound = taylor_error_bound(graph, y, p.a);
    }
    if (per_edge) {
        report.per_edge_attract.reserve(graph.num_edges());
        for (const auto& e : graph.edges()) {
            report.per_edge_attract.push_back(-2.0 * e.weight * log_phi(sq_dist(y, e.i, e.j), p));
        }
    }
    return report;
}

double attractive_term(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p) {
    check_shape(graph, y);
    double total = 0.0;
    for (const auto& e : graph.edges()) {
        total -= e.weight * log_phi(sq_dist(y, e.i, e.j), p);
    }
    return 2.0 * total;
}

double laplacian_constant(const KernelParams& p) {
    if (p.family == KernelFamily::gaussian) {
        return 1.0 / p.tau;
    }
    if (p.b != 1.0) {
        throw ConfigError(kModule, "the Laplacian form is only defined for the Gaussian kernel or the Cauchy kernel "
                                   "with b = 1 (got b = " + std::to_string(p.b) + ")");
    }
    return 2.0 * p.a;
}

LaplacianComparison laplacian_comparison(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p) {
    check_shape(graph, y);
    const double c = laplacian_constant(p);
    // (L Y)_i = sum_j w_ij (y_i - y_j), which vanishes exactly on constant Y.
    RowMatrix ly = RowMatrix::Zero(y.rows(), y.cols());
    for (std::size_t i = 0; i < graph.n(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        for (const auto& e : graph.neighbors(i)) {
            ly.row(row) += e.weight * (y.row(row) - y.row(static_cast<Eigen::Index>(e.col)));
        }
    }
    const double trace = (y.array() * ly.array()).sum();

    LaplacianComparison out;
    out.attract = attractive_term(graph, y, p);
    out.laplacian_form = c * trace;
    out.gap = std::abs(out.attract - out.laplacian_form);
    const double scale = std::abs(out.attract);
    out.relative_gap = scale > 0.0 ? out.gap / scale : (out.gap > 0.0 ? out.gap : 0.0);
    return out;
}

double taylor_error_bound(const SimilarityGraph& graph, const RowMatrix& y, double a) {
    check_shape(graph, y);
    double total = 0.0;
    for (const auto& e : graph.edges()) {
        const double s = sq_dist(y, e.i, e.j);
        total += e.weight * s * s;
    }
    // Each undirected edge stands for two ordered pairs: 2 * a^2 / 2.
    return a * a * total;
}

double expected_sgd_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p, std::size_t n_neg) {
    check_shape(graph, y);
    const std::size_t n = graph.n();
    const double attraction = attractive_term(graph, y, p);
    if (n_neg == 0) {
        return attraction;
    }
    const auto deg = graph.degrees();
    double repulsion = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (deg[a] == 0.0) {
            continue;
        }
        double inner = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (c != a) {
                inner += clamped_log_one_minus_phi(sq_dist(y, a, c), p);
            }
        }
        repulsion -= deg[a] * inner;
    }
    return attraction + static_cast<double>(n_neg) / static_cast<double>(n) * repulsion;
}

double stochastic_step_loss(std::size_t a, std::size_t b, std::span<const Index> negatives, const RowMatrix& y,
                            const KernelParams& p) {
    const auto n = static_cast<std::size_t>(y.rows());
    if (a >= n || b >= n) {
        throw ConfigError(kModule, "vertex index out of range in stochastic_step_loss");
    }
    double loss = -log_phi(sq_dist(y, a, b), p);
    for (Index c : negatives) {
        if (c >= n) {
            throw ConfigError(kModule, "negative sample out of range");
        }
        if (c != a) {
            loss -= clamped_log_one_minus_phi(sq_dist(y, a, c), p);
        }
    }
    return loss;
}

} // namespace umaplab
