#include "umaplab/graph_spectra.hpp"
#include "umaplab/synth_data.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace umaplab {

namespace {

constexpr const char* kModule = "graph_spectra";

Eigen::MatrixXd dense_normalized(const LaplacianPair& lap) {
    return Eigen::MatrixXd(lap.normalized);
}

/// Index of the first eigenvalue strictly above the null-space threshold.
std::size_t first_non_null(const Eigen::VectorXd& values) {
    std::size_t first = 0;
    while (first < static_cast<std::size_t>(values.size()) && values[static_cast<Eigen::Index>(first)] <= kNullSpaceThreshold) {
        ++first;
    }
    return first;
}

} // namespace

LaplacianPair build_laplacians(const SimilarityGraph& graph) {
    const std::size_t n = graph.n();
    const auto deg = graph.degrees();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(deg[i] > 0.0)) {
            throw ConfigError(kModule, "vertex " + std::to_string(i) + " is isolated (degree 0)");
        }
    }

    LaplacianPair out;
    out.degree = Eigen::Map<const Vector>(deg.data(), static_cast<Eigen::Index>(n));

    std::vector<Eigen::Triplet<double>> comb;
    std::vector<Eigen::Triplet<double>> norm;
    comb.reserve(graph.nnz() + n);
    norm.reserve(graph.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<int>(i);
        comb.emplace_back(ii, ii, deg[i]);
        norm.emplace_back(ii, ii, 1.0);
        for (const auto& e : graph.neighbors(i)) {
            const auto jj = static_cast<int>(e.col);
            comb.emplace_back(ii, jj, -e.weight);
            norm.emplace_back(ii, jj, -e.weight / (std::sqrt(deg[i]) * std::sqrt(deg[e.col])));
        }
    }
    const auto nn = static_cast<Eigen::Index>(n);
    out.combinatorial.resize(nn, nn);
    out.combinatorial.setFromTriplets(comb.begin(), comb.end());
    out.normalized.resize(nn, nn);
    out.normalized.setFromTriplets(norm.begin(), norm.end());
    return out;
}

SparseMatrix combinatorial_laplacian(const SimilarityGraph& graph) {
    const std::size_t n = graph.n();
    const auto deg = graph.degrees();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(graph.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), deg[i]);
        for (const auto& e : graph.neighbors(i)) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(e.col), -e.weight);
        }
    }
    SparseMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

double laplacian_quadratic(const SimilarityGraph& graph, const RowMatrix& z) {
    if (static_cast<std::size_t>(z.rows()) != graph.n()) {
        throw ConfigError(kModule, "Z has " + std::to_string(z.rows()) + " rows but the graph has " +
                                       std::to_string(graph.n()) + " vertices");
    }
    double total = 0.0;
    for (const auto& e : graph.edges()) {
        total += e.weight * (z.row(e.i) - z.row(e.j)).squaredNorm();
    }
    return total;
}

std::size_t count_components(const SimilarityGraph& graph) {
    const std::size_t n = graph.n();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n;
    for (const auto& e : graph.edges()) {
        const auto a = find(e.i);
        const auto b = find(e.j);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
            --components;
        }
    }
    return components;
}

std::vector<double> normalized_spectrum(const SimilarityGraph& graph) {
    const auto lap = build_laplacians(graph);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_normalized(lap), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError(kModule, "symmetric eigensolver failed");
    }
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

void fix_column_signs(RowMatrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (vectors.rows() > 0 && vectors(best, c) < 0.0) {
            vectors.col(c) *= -1.0;
        }
    }
}

SpectralSolution spectral_init(const SimilarityGraph& graph, std::size_t d) {
    if (d < 1) {
        throw ConfigError(kModule, "spectral embedding dimension must be >= 1");
    }
    const std::size_t n = graph.n();
    if (d >= n) {
        throw ConfigError(kModule, "spectral embedding dimension " + std::to_string(d) +
                                       " leaves no room for the null space with n = " + std::to_string(n));
    }
    const auto lap = build_laplacians(graph);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_normalized(lap));
    if (solver.info() != Eigen::Success) {
        throw NumericError(kModule, "symmetric eigensolver failed");
    }

    const auto& values = solver.eigenvalues();
    const std::size_t first = first_non_null(values);
    if (first + d > n) {
        throw ConfigError(kModule, "requested " + std::to_string(d) + " spectral dimensions but only " +
                                       std::to_string(n - first) + " eigenvalues lie above the null space (" +
                                       std::to_string(first) + " null)");
    }

    SpectralSolution out;
    out.n_null = first;
    out.vectors = solver.eigenvectors().middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(d));
    out.values.resize(d);
    for (std::size_t c = 0; c < d; ++c) {
        out.values[c] = values[static_cast<Eigen::Index>(first + c)];
    }
    fix_column_signs(out.vectors);
    return out;
}

double ncut(const SimilarityGraph& graph, const Partition& partition) {
    if (partition.in_s.size() != graph.n()) {
        throw ConfigError(kModule, "partition size does not match the graph");
    }
    const auto deg = graph.degrees();
    double cut = 0.0;
    double vol_s = 0.0;
    double vol_rest = 0.0;
    std::size_t size_s = 0;
    for (std::size_t i = 0; i < graph.n(); ++i) {
        if (partition.in_s[i]) {
            vol_s += deg[i];
            ++size_s;
        } else {
            vol_rest += deg[i];
        }
    }
    if (size_s == 0 || size_s == graph.n()) {
        throw ConfigError(kModule, "both sides of the partition must be nonempty");
    }
    if (!(vol_s > 0.0) || !(vol_rest > 0.0)) {
        throw ConfigError(kModule, "a partition side has zero volume");
    }
    for (const auto& e : graph.edges()) {
        if (partition.in_s[e.i] != partition.in_s[e.j]) {
            cut += e.weight;
        }
    }
    return cut / vol_s + cut / vol_rest;
}

double max_principal_angle(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2) {
    // Singular values of (I - Q1 Q1^T) Q2 are the sines of the principal angles;
    // the sine form keeps resolution for tiny angles.
    const Eigen::MatrixXd residual = q2 - q1 * (q1.transpose() * q2);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
    const double s = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
    return std::asin(std::min(1.0, s));
}

RelaxationReport ncut_relaxation_check(const SimilarityGraph& graph, std::size_t d) {
    const std::size_t n = graph.n();
    if (count_components(graph) != 1) {
        throw ConfigError(kModule, "the relaxation check requires a connected graph");
    }
    if (d < 1 || d + 1 > n) {
        throw ConfigError(kModule, "relaxation dimension must satisfy 1 <= d <= n - 1");
    }
    const auto lap = build_laplacians(graph);
    const Eigen::MatrixXd comb(lap.combinatorial);
    const Eigen::MatrixXd degree = lap.degree.asDiagonal();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> generalized(comb, degree);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ordinary(dense_normalized(lap));
    if (generalized.info() != Eigen::Success || ordinary.info() != Eigen::Success) {
        throw NumericError(kModule, "eigensolver failed in the relaxation check");
    }

    const std::size_t g0 = first_non_null(generalized.eigenvalues());
    const std::size_t o0 = first_non_null(ordinary.eigenvalues());
    if (g0 + d > n || o0 + d > n) {
        throw ConfigError(kModule, "not enough non-null eigenvalues for d = " + std::to_string(d));
    }

    RelaxationReport out;
    for (std::size_t c = 0; c < d; ++c) {
        const double g = generalized.eigenvalues()[static_cast<Eigen::Index>(g0 + c)];
        const double o = ordinary.eigenvalues()[static_cast<Eigen::Index>(o0 + c)];
        out.generalized_values.push_back(g);
        out.normalized_values.push_back(o);
        out.max_value_gap = std::max(out.max_value_gap, std::abs(g - o));
    }

    // Z^T D Z = I, so D^{1/2} Z has orthonormal columns; renormalize against rounding.
    Eigen::MatrixXd mapped = lap.degree.cwiseSqrt().asDiagonal() *
                             generalized.eigenvectors().middleCols(static_cast<Eigen::Index>(g0), static_cast<Eigen::Index>(d));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(mapped);
    const Eigen::MatrixXd q_mapped = qr.householderQ() * Eigen::MatrixXd::Identity(mapped.rows(), mapped.cols());
    const Eigen::MatrixXd q_ordinary =
        ordinary.eigenvectors().middleCols(static_cast<Eigen::Index>(o0), static_cast<Eigen::Index>(d));
    out.max_principal_angle = max_principal_angle(q_ordinary, q_mapped);
    return out;
}

void write_spectral_csv(const std::filesystem::path& path, const SpectralSolution& solution) {
    write_csv(path, solution.vectors);
}

} // namespace umaplab
