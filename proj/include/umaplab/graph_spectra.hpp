#ifndef UMAPLAB_GRAPH_SPECTRA_HPP
#define UMAPLAB_GRAPH_SPECTRA_HPP

#include "umaplab/common.hpp"
#include "umaplab/fuzzy_graph.hpp"

#include <Eigen/SparseCore>

#include <filesystem>
#include <vector>

/**
 * @file graph_spectra.hpp
 *
 * @brief Graph Laplacians, their quadratic form, the spectral embedding and the
 * normalized cut.
 */

namespace umaplab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Eigenvalues at or below this are treated as part of the null space.
inline constexpr double kNullSpaceThreshold = 1e-8;

/**
 * Degrees d_i = sum_j v_ij, the combinatorial Laplacian L = D - V and the
 * normalized Laplacian D^{-1/2} L D^{-1/2}.
 */
struct LaplacianPair {
    Vector degree;
    SparseMatrix combinatorial;
    SparseMatrix normalized;
};

/// Throws ConfigError naming the first vertex with zero degree.
LaplacianPair build_laplacians(const SimilarityGraph& graph);

/// L = D - V alone; isolated vertices are allowed here.
SparseMatrix combinatorial_laplacian(const SimilarityGraph& graph);

/**
 * tr(Z^T L Z) evaluated as 1/2 sum_ij v_ij ||Z_i - Z_j||^2 over the stored edges
 * (each undirected edge once, so the half cancels).
 */
double laplacian_quadratic(const SimilarityGraph& graph, const RowMatrix& z);

/// Number of connected components (isolated vertices count as components).
std::size_t count_components(const SimilarityGraph& graph);

/**
 * Selected eigenvectors of the normalized Laplacian, one per column, for the
 * d smallest eigenvalues above kNullSpaceThreshold. Each column is sign-fixed so
 * its largest-magnitude entry (first on ties) is positive.
 */
struct SpectralSolution {
    RowMatrix vectors;
    std::vector<double> values;
    /// Eigenvalues at or below the threshold; equals the component count in practice.
    std::size_t n_null = 0;
};

/// Full ascending spectrum of the normalized Laplacian via the dense symmetric solver.
std::vector<double> normalized_spectrum(const SimilarityGraph& graph);

/**
 * Dense symmetric eigendecomposition of the normalized Laplacian, keeping the d
 * smallest non-null eigenpairs. Disconnected graphs are handled globally: the
 * null space is skipped and `n_null` reports its dimension.
 */
SpectralSolution spectral_init(const SimilarityGraph& graph, std::size_t d);

/// Makes the largest-magnitude entry of every column positive (first index on ties).
void fix_column_signs(RowMatrix& vectors);

/// Membership in S; the complement is S-bar.
struct Partition {
    std::vector<bool> in_s;
};

/// cut(S, S-bar) / vol(S) + cut(S, S-bar) / vol(S-bar).
double ncut(const SimilarityGraph& graph, const Partition& partition);

/**
 * Result of comparing the relaxed normalized-cut problem, solved as the
 * generalized problem L z = lambda D z, against the ordinary eigenproblem of
 * the normalized Laplacian.
 */
struct RelaxationReport {
    std::vector<double> generalized_values;
    std::vector<double> normalized_values;
    double max_value_gap = 0.0;
    /// Largest principal angle (radians) between D^{1/2} Z and the normalized eigenvectors.
    double max_principal_angle = 0.0;
};

/// Requires a connected graph; solves both problems with independent solvers.
RelaxationReport ncut_relaxation_check(const SimilarityGraph& graph, std::size_t d);

/// Largest principal angle between the column spaces of two orthonormal frames.
double max_principal_angle(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2);

/// n rows by d columns, 17 significant digits.
void write_spectral_csv(const std::filesystem::path& path, const SpectralSolution& solution);

} // namespace umaplab

#endif
