#include "umaplab/equivalence_lab.hpp"
#include "umaplab/contrastive_sgd.hpp"
#include "umaplab/graph_spectra.hpp"
#include "umaplab/neighbor_graph.hpp"
#include "umaplab/objective.hpp"
#include "umaplab/random.hpp"
#include "umaplab/synth_data.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace umaplab {

namespace {

constexpr const char* kModule = "equivalence_lab";

constexpr double kExactTolerance = 1e-10;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kOptimalityTolerance = 1e-9;
constexpr double kEigenvalueTolerance = 1e-8;
constexpr double kAngleTolerance = 1e-6;
constexpr double kSigmaTolerance = 3.0;

EquivalenceReport make_report(Claim claim, double residual, double tolerance, nlohmann::json context) {
    EquivalenceReport r;
    r.claim = claim;
    r.residual = residual;
    r.tolerance = tolerance;
    r.passed = residual <= tolerance;
    r.context = std::move(context);
    return r;
}

/// Keeps the report with the larger residual relative to its tolerance.
void keep_worst(std::optional<EquivalenceReport>& worst, EquivalenceReport candidate) {
    if (!worst || !(candidate.residual / candidate.tolerance <= worst->residual / worst->tolerance)) {
        worst = std::move(candidate);
    }
}

double relative_gap(double x, double y) {
    const double gap = std::abs(x - y);
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale > 0.0 ? gap / scale : 0.0;
}

} // namespace

std::string claim_id(Claim claim) {
    switch (claim) {
    case Claim::gaussian_exact:
        return "thm3.1a";
    case Claim::cauchy_first_order:
        return "thm3.1b";
    case Claim::spectral_optimality:
        return "thm3.1c";
    case Claim::expected_loss:
        return "eq13_montecarlo";
    case Claim::laplacian_identity:
        return "lemmaA1";
    case Claim::taylor_bound:
        return "eq20_bound";
    case Claim::ncut_relaxation:
        return "a3_relaxation";
    }
    return "unknown";
}

Claim parse_claim(std::string_view id) {
    for (Claim c : all_claims()) {
        if (claim_id(c) == id) {
            return c;
        }
    }
    throw ConfigError(kModule, "unknown claim '" + std::string(id) + "'");
}

const std::vector<Claim>& all_claims() {
    static const std::vector<Claim> claims{Claim::gaussian_exact,  Claim::cauchy_first_order, Claim::spectral_optimality,
                                           Claim::expected_loss,   Claim::laplacian_identity, Claim::taylor_bound,
                                           Claim::ncut_relaxation};
    return claims;
}

Sabotage parse_sabotage(std::string_view name) {
    if (name.empty() || name == "none") {
        return Sabotage::none;
    }
    if (name == "laplacian-sign") {
        return Sabotage::laplacian_sign;
    }
    throw ConfigError(kModule, "unknown sabotage mode '" + std::string(name) + "'");
}

nlohmann::json to_json(const EquivalenceReport& report) {
    return {{"claim", claim_id(report.claim)},
            {"residual", report.residual},
            {"tolerance", report.tolerance},
            {"passed", report.passed},
            {"context", report.context}};
}

nlohmann::json to_json(const std::vector<EquivalenceReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) {
        out.push_back(to_json(r));
    }
    return out;
}

PipelineInstance make_pipeline_instance(std::size_t n, std::uint64_t seed, std::size_t k) {
    if (n < 3) {
        throw ConfigError(kModule, "pipeline instances need n >= 3");
    }
    Rng rng(derive_seed(seed, "instance"));
    const std::size_t clusters = 1 + static_cast<std::size_t>(rng.index(3));
    std::vector<std::vector<double>> centers(clusters, std::vector<double>(3));
    for (auto& c : centers) {
        for (double& x : c) {
            x = rng.uniform(-4.0, 4.0);
        }
    }
    const std::size_t per_cluster = (n + clusters - 1) / clusters;
    auto blobs = gen_blobs(per_cluster, centers, 1.0, derive_seed(seed, "blobs"));

    PipelineInstance out;
    out.data = blobs.data.points().topRows(static_cast<Eigen::Index>(n));
    out.labels.assign(blobs.labels.begin(), blobs.labels.begin() + static_cast<std::ptrdiff_t>(n));
    out.k = std::max<std::size_t>(2, std::min(k, n - 1));
    const auto knn = knn_search(DataMatrix(out.data), out.k);
    out.graph = build_fuzzy_graph(knn).graph;
    return out;
}

PipelineInstance two_blob_fixture(std::uint64_t seed, std::size_t k) {
    auto blobs = gen_blobs(50, {{0.0, 0.0}, {10.0, 0.0}}, 0.5, seed);
    PipelineInstance out;
    out.data = blobs.data.points();
    out.labels = blobs.labels;
    out.k = k;
    out.graph = build_fuzzy_graph(knn_search(blobs.data, k)).graph;
    return out;
}

RowMatrix random_embedding(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    RowMatrix y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            y(i, j) = rng.normal();
        }
    }
    return y;
}

EquivalenceReport check_gaussian_exactness(const SimilarityGraph& graph, const RowMatrix& y, double tau,
                                           Sabotage sabotage) {
    const auto p = KernelParams::gaussian(tau);
    auto cmp = laplacian_comparison(graph, y, p);
    if (sabotage == Sabotage::laplacian_sign) {
        cmp.laplacian_form = -cmp.laplacian_form;
    }
    const double residual = relative_gap(cmp.attract, cmp.laplacian_form);
    return make_report(Claim::gaussian_exact, residual, kExactTolerance,
                       {{"n", graph.n()},
                        {"d", y.cols()},
                        {"kernel", "gaussian"},
                        {"tau", tau},
                        {"attract", cmp.attract},
                        {"laplacian_form", cmp.laplacian_form}});
}

EquivalenceReport check_gaussian_exactness(std::size_t n, std::size_t d, double tau, std::uint64_t seed,
                                           Sabotage sabotage) {
    const auto instance = make_pipeline_instance(n, seed);
    const auto y = random_embedding(n, d, derive_seed(seed, "embedding"));
    auto report = check_gaussian_exactness(instance.graph, y, tau, sabotage);
    report.context["seed"] = seed;
    report.context["k"] = instance.k;
    return report;
}

RowMatrix scale_to_edge_sq_dist(const SimilarityGraph& graph, const RowMatrix& y, double max_sq_dist) {
    double largest = 0.0;
    for (const auto& e : graph.edges()) {
        largest = std::max(largest, (y.row(e.i) - y.row(e.j)).squaredNorm());
    }
    if (!(largest > 0.0)) {
        return y;
    }
    return y * std::sqrt(max_sq_dist / largest);
}

EquivalenceReport check_cauchy_first_order(std::size_t n, std::size_t d, double a, double scale, std::uint64_t seed) {
    const auto instance = make_pipeline_instance(n, seed);
    const auto y = scale_to_edge_sq_dist(instance.graph, random_embedding(n, d, derive_seed(seed, "embedding")), scale);
    const auto p = KernelParams::cauchy(a, 1.0);
    const auto cmp = laplacian_comparison(instance.graph, y, p);
    const double bound = taylor_error_bound(instance.graph, y, a);
    const double allowed = a * scale;
    return make_report(Claim::cauchy_first_order, cmp.relative_gap / allowed, 1.0,
                       {{"n", n},
                        {"d", d},
                        {"kernel", "cauchy_ab"},
                        {"a", a},
                        {"b", 1.0},
                        {"scale", scale},
                        {"seed", seed},
                        {"relative_gap", cmp.relative_gap},
                        {"allowed_relative_gap", allowed},
                        {"absolute_gap", cmp.gap},
                        {"taylor_bound", bound},
                        {"bound_holds", cmp.gap <= bound}});
}

EquivalenceReport check_cauchy_sweep(std::size_t n, std::size_t d, double a, std::uint64_t seed) {
    constexpr std::array<double, 3> scales{0.1, 0.01, 0.001};
    std::optional<EquivalenceReport> worst;
    nlohmann::json gaps = nlohmann::json::array();
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    bool bound_holds = true;
    for (double s : scales) {
        auto r = check_cauchy_first_order(n, d, a, s, seed);
        const double gap = r.context["relative_gap"].get<double>();
        monotone = monotone && gap < previous;
        bound_holds = bound_holds && r.context["bound_holds"].get<bool>();
        previous = gap;
        gaps.push_back({{"scale", s}, {"relative_gap", gap}});
        keep_worst(worst, std::move(r));
    }
    worst->context["sweep"] = gaps;
    worst->context["monotone"] = monotone;
    worst->context["bound_holds_all"] = bound_holds;
    return *worst;
}

EquivalenceReport check_taylor_bound(const SimilarityGraph& graph, const RowMatrix& y, double a) {
    const auto cmp = laplacian_comparison(graph, y, KernelParams::cauchy(a, 1.0));
    const double bound = taylor_error_bound(graph, y, a);
    const double residual = bound > 0.0 ? cmp.gap / bound : (cmp.gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return make_report(Claim::taylor_bound, residual, 1.0,
                       {{"n", graph.n()},
                        {"d", y.cols()},
                        {"kernel", "cauchy_ab"},
                        {"a", a},
                        {"gap", cmp.gap},
                        {"bound", bound},
                        {"per_edge_relative_error_t0.48", first_order_relative_error(0.48)}});
}

EquivalenceReport check_taylor_bound_suite(std::size_t instances, std::uint64_t seed) {
    Rng rng(seed);
    std::optional<EquivalenceReport> worst;
    for (std::size_t t = 0; t < instances; ++t) {
        const std::uint64_t s = rng.index(UINT64_MAX);
        const std::size_t n = 5 + static_cast<std::size_t>(rng.index(46));
        const std::size_t d = 1 + static_cast<std::size_t>(rng.index(5));
        const double a = rng.uniform(0.5, 2.0);
        const double scale = std::pow(10.0, rng.uniform(-3.0, 0.5));
        const auto instance = make_pipeline_instance(n, s);
        const auto y = scale_to_edge_sq_dist(instance.graph, random_embedding(n, d, derive_seed(s, "embedding")), scale);
        auto r = check_taylor_bound(instance.graph, y, a);
        r.context["seed"] = s;
        r.context["scale"] = scale;
        keep_worst(worst, std::move(r));
    }
    worst->context["instances"] = instances;
    return *worst;
}

double first_order_relative_error(double t) {
    const double log_term = std::log1p(t);
    return (t - log_term) / log_term;
}

Eigen::MatrixXd null_space_basis(const SimilarityGraph& graph) {
    const std::size_t n = graph.n();
    const auto deg = graph.degrees();
    std::vector<int> component(n, -1);
    int count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (component[s] >= 0) {
            continue;
        }
        component[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& e : graph.neighbors(u)) {
                if (component[e.col] < 0) {
                    component[e.col] = count;
                    stack.push_back(e.col);
                }
            }
        }
        ++count;
    }
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), count);
    for (std::size_t i = 0; i < n; ++i) {
        basis(static_cast<Eigen::Index>(i), component[i]) = std::sqrt(deg[i]);
    }
    basis.colwise().normalize();
    return basis;
}

EquivalenceReport check_spectral_optimality(const SimilarityGraph& graph, std::size_t d, std::size_t trials,
                                            std::uint64_t seed) {
    const auto solution = spectral_init(graph, d);
    const auto lap = build_laplacians(graph);
    const Eigen::MatrixXd normalized = Eigen::MatrixXd(lap.normalized);

    auto trace_of = [&](const Eigen::MatrixXd& q) { return (q.transpose() * (normalized * q)).trace(); };

    const Eigen::MatrixXd y_sp = solution.vectors;
    const double optimum = trace_of(y_sp);
    double eigen_sum = 0.0;
    for (double v : solution.values) {
        eigen_sum += v;
    }

    const Eigen::MatrixXd null_basis = null_space_basis(graph);
    auto project_out = [&](Eigen::MatrixXd& m) { m -= null_basis * (null_basis.transpose() * m); };
    const auto n = static_cast<Eigen::Index>(graph.n());
    const auto cols = static_cast<Eigen::Index>(d);
    Rng rng(seed);
    double worst_gap = 0.0;
    double best_random = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        Eigen::MatrixXd g(n, cols);
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            for (Eigen::Index j = 0; j < g.cols(); ++j) {
                g(i, j) = rng.normal();
            }
        }
        project_out(g);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, cols);
        const double value = trace_of(q);
        best_random = std::min(best_random, value);
        worst_gap = std::max(worst_gap, optimum - value);
    }

    const double eigen_mismatch = std::abs(optimum - eigen_sum);
    const double residual = std::max(worst_gap / kOptimalityTolerance, eigen_mismatch / kEigenvalueTolerance);
    return make_report(Claim::spectral_optimality, residual, 1.0,
                       {{"n", graph.n()},
                        {"d", d},
                        {"components", null_basis.cols()},
                        {"trials", trials},
                        {"seed", seed},
                        {"optimal_trace", optimum},
                        {"eigenvalue_sum", eigen_sum},
                        {"eigenvalue_mismatch", eigen_mismatch},
                        {"worst_random_gap", worst_gap},
                        {"best_random_trace", best_random},
                        {"tolerance_gap", kOptimalityTolerance},
                        {"tolerance_eigen", kEigenvalueTolerance}});
}

EquivalenceReport check_expected_loss(const SimilarityGraph& graph, const RowMatrix& y, const KernelParams& p,
                                      std::size_t n_neg, std::size_t n_draws, std::uint64_t seed) {
    const double exact = expected_sgd_loss(graph, y, p, n_neg);
    const auto estimate = estimate_epoch_loss(graph, y, p, n_neg, n_draws, seed);
    // Degenerate samplers have zero variance; fall back to a 1e-12 relative band.
    const double denom = std::max(estimate.standard_error, 1e-12 * std::max(1.0, std::abs(exact)));
    const double z = std::abs(estimate.aggregate - exact) / denom;
    return make_report(Claim::expected_loss, z, kSigmaTolerance,
                       {{"n", graph.n()},
                        {"d", y.cols()},
                        {"kernel", to_string(p.family)},
                        {"n_neg", n_neg},
                        {"draws", n_draws},
                        {"seed", seed},
                        {"expected", exact},
                        {"monte_carlo", estimate.aggregate},
                        {"standard_error", estimate.standard_error}});
}

EquivalenceReport check_laplacian_identity(std::size_t trials, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    nlohmann::json worst_ctx;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.index(49));
        const std::size_t d = 1 + static_cast<std::size_t>(rng.index(5));
        const double density = rng.uniform(0.05, 1.0);
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (rng.uniform() < density) {
                    const double v = rng.uniform();
                    w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                    w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
                }
            }
        }
        RowMatrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            for (Eigen::Index j = 0; j < z.cols(); ++j) {
                z(i, j) = rng.normal();
            }
        }
        const auto graph = SimilarityGraph::from_dense(w);
        const double edge_sum = laplacian_quadratic(graph, z);

        const Eigen::MatrixXd lap = Eigen::MatrixXd(w.rowwise().sum().asDiagonal()) - w;
        const double dense = (z.transpose() * lap * z).trace();
        const double rel = relative_gap(edge_sum, dense);
        if (rel > worst || t == 0) {
            worst = rel;
            worst_ctx = {{"n", n}, {"d", d}, {"trial", t}, {"edge_sum", edge_sum}, {"matrix_form", dense}};
        }
    }
    worst_ctx["trials"] = trials;
    worst_ctx["seed"] = seed;
    return make_report(Claim::laplacian_identity, worst, kIdentityTolerance, worst_ctx);
}

SimilarityGraph random_connected_graph(std::size_t n, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Index> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = static_cast<Index>(i);
    }
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < density) {
                w(i, j) = w(j, i) = rng.uniform(0.05, 1.0);
            }
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        const auto u = order[i - 1];
        const auto v = order[i];
        if (w(u, v) == 0.0) {
            w(u, v) = w(v, u) = rng.uniform(0.05, 1.0);
        }
    }
    return SimilarityGraph::from_dense(w);
}

EquivalenceReport check_ncut_relaxation(std::size_t graphs, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    double worst = -1.0;
    nlohmann::json worst_ctx;
    for (std::size_t g = 0; g < graphs; ++g) {
        const std::size_t n = std::max<std::size_t>(d + 2, 10 + static_cast<std::size_t>(rng.index(31)));
        const double density = rng.uniform(0.1, 0.6);
        const std::uint64_t s = rng.index(UINT64_MAX);
        const auto graph = random_connected_graph(n, density, s);
        const auto rep = ncut_relaxation_check(graph, d);
        const double normalized =
            std::max(rep.max_value_gap / kEigenvalueTolerance, rep.max_principal_angle / kAngleTolerance);
        if (normalized > worst) {
            worst = normalized;
            worst_ctx = {{"n", n},
                         {"d", d},
                         {"graph_seed", s},
                         {"max_eigenvalue_gap", rep.max_value_gap},
                         {"max_principal_angle", rep.max_principal_angle},
                         {"generalized_values", rep.generalized_values},
                         {"normalized_values", rep.normalized_values}};
        }
    }
    worst_ctx["graphs"] = graphs;
    worst_ctx["seed"] = seed;
    return make_report(Claim::ncut_relaxation, std::max(worst, 0.0), 1.0, worst_ctx);
}

bool kernelized_objective_is_concave_increasing(double a, double t_max, std::size_t points) {
    const double h = t_max / static_cast<double>(points);
    auto phi_t = [a](double t) { return std::log1p(a * t); };
    for (std::size_t i = 1; i < points; ++i) {
        const double t = h * static_cast<double>(i);
        const double first = (phi_t(t + h) - phi_t(t - h)) / (2.0 * h);
        const double second = (phi_t(t + h) - 2.0 * phi_t(t) + phi_t(t - h)) / (h * h);
        if (!(first > 0.0) || !(second < 0.0)) {
            return false;
        }
    }
    return true;
}

std::vector<EquivalenceReport> run_suite(const SuiteOptions& options) {
    auto selected = [&](Claim c) { return options.claims.empty() || options.claims.count(c) > 0; };
    auto seed_for = [&](Claim c) { return derive_seed(options.seed, claim_id(c)); };
    std::vector<EquivalenceReport> reports;

    if (selected(Claim::gaussian_exact)) {
        constexpr std::array<double, 3> taus{0.5, 1.0, 2.0};
        Rng rng(seed_for(Claim::gaussian_exact));
        std::optional<EquivalenceReport> worst;
        constexpr std::size_t kInstances = 200;
        for (std::size_t t = 0; t < kInstances; ++t) {
            const std::size_t n = 3 + static_cast<std::size_t>(rng.index(58));
            const std::size_t d = 1 + static_cast<std::size_t>(rng.index(5));
            keep_worst(worst, check_gaussian_exactness(n, d, taus[t % taus.size()], rng.index(UINT64_MAX),
                                                       options.sabotage));
        }
        worst->context["instances"] = kInstances;
        reports.push_back(*worst);
    }
    if (selected(Claim::cauchy_first_order)) {
        reports.push_back(check_cauchy_sweep(40, 2, 1.0, seed_for(Claim::cauchy_first_order)));
    }
    if (selected(Claim::spectral_optimality)) {
        const std::uint64_t s = seed_for(Claim::spectral_optimality);
        std::optional<EquivalenceReport> worst;
        keep_worst(worst, check_spectral_optimality(make_pipeline_instance(60, s, 15).graph, 2, 100, s));
        keep_worst(worst, check_spectral_optimality(two_blob_fixture(options.seed).graph, 2, 100, s));
        reports.push_back(*worst);
    }
    if (selected(Claim::expected_loss)) {
        const auto instance = make_pipeline_instance(8, seed_for(Claim::expected_loss), 3);
        const auto y = random_embedding(8, 2, derive_seed(seed_for(Claim::expected_loss), "embedding"));
        reports.push_back(check_expected_loss(instance.graph, y, KernelParams::cauchy(1.929, 0.7915), 5, 1'000'000,
                                              seed_for(Claim::expected_loss)));
    }
    if (selected(Claim::laplacian_identity)) {
        reports.push_back(check_laplacian_identity(1000, seed_for(Claim::laplacian_identity)));
    }
    if (selected(Claim::taylor_bound)) {
        reports.push_back(check_taylor_bound_suite(200, seed_for(Claim::taylor_bound)));
    }
    if (selected(Claim::ncut_relaxation)) {
        reports.push_back(check_ncut_relaxation(20, 3, seed_for(Claim::ncut_relaxation)));
    }
    return reports;
}

std::vector<KernelTableRow> emit_table1(std::uint64_t seed, double small_scale) {
    const auto instance = make_pipeline_instance(50, seed);
    const auto y = random_embedding(instance.graph.n(), 2, derive_seed(seed, "embedding"));
    std::vector<KernelTableRow> rows;

    {
        const auto cmp = laplacian_comparison(instance.graph, y, KernelParams::gaussian(1.0));
        rows.push_back({"Gaussian exp(-||y||^2 / 2 tau), tau = 1", "(1/tau) tr(Y^T L Y)", "Exact", cmp.attract,
                        cmp.relative_gap, "relative gap to the Laplacian form"});
    }
    {
        const auto fit = fit_ab(0.1);
        const auto p = KernelParams::cauchy(fit.a, fit.b);
        std::ostringstream note;
        note << std::setprecision(4) << "no quadratic form (a = " << fit.a << ", b = " << fit.b << ")";
        rows.push_back({"Cauchy (1 + a||y||^{2b})^{-1}, fitted", "sum v_ij log(1 + a||y_i - y_j||^{2b})", "Kernelized",
                        attractive_term(instance.graph, y, p), std::nullopt, note.str()});
    }
    {
        const auto small = scale_to_edge_sq_dist(instance.graph, y, small_scale);
        const auto cmp = laplacian_comparison(instance.graph, small, KernelParams::cauchy(1.0, 1.0));
        std::ostringstream note;
        note << "relative gap to 2a tr(Y^T L Y), neighbor ||y_i - y_j||^2 <= " << small_scale;
        rows.push_back({"Cauchy (1 + ||y||^2)^{-1}, small distances", "~ 2a tr(Y^T L Y)", "1st-order", cmp.attract,
                        cmp.relative_gap, note.str()});
    }
    return rows;
}

std::string render_table1(const std::vector<KernelTableRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(46) << "Kernel" << std::setw(42) << "Attractive term" << std::setw(12) << "Nature"
        << std::setw(16) << "Attract" << std::setw(14) << "Residual" << "Note\n";
    out << std::string(150, '-') << '\n';
    for (const auto& r : rows) {
        std::ostringstream attract;
        attract << std::setprecision(8) << r.attract;
        std::ostringstream residual;
        if (r.residual) {
            residual << std::scientific << std::setprecision(3) << *r.residual;
        } else {
            residual << "n/a";
        }
        out << std::left << std::setw(46) << r.kernel << std::setw(42) << r.attractive_term << std::setw(12) << r.nature
            << std::setw(16) << attract.str() << std::setw(14) << residual.str() << r.note << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const std::vector<KernelTableRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"kernel", r.kernel},
                       {"attractive_term", r.attractive_term},
                       {"nature", r.nature},
                       {"attract", r.attract},
                       {"residual", r.residual ? nlohmann::json(*r.residual) : nlohmann::json(nullptr)},
                       {"note", r.note}});
    }
    return out;
}

} // namespace umaplab
