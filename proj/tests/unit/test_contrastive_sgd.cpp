#include "umaplab/contrastive_sgd.hpp"
#include "umaplab/equivalence_lab.hpp"
#include "umaplab/graph_spectra.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace umaplab;

TEST(EdgeSampler, SingleEdgeAlways) {
    EdgeSampler s(SimilarityGraph::from_edges(3, {{0, 2, 0.3}}), 1);
    int forward = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto [a, b] = s.sample();
        ASSERT_TRUE((a == 0 && b == 2) || (a == 2 && b == 0));
        forward += a == 0;
    }
    EXPECT_NEAR(forward, 500, 80);
}

TEST(EdgeSampler, TwoToOneRatio) {
    EdgeSampler s(SimilarityGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 0.5}}), 7);
    const int draws = 1'000'000;
    int first = 0;
    for (int t = 0; t < draws; ++t) {
        first += s.sample_edge() == 0;
    }
    const double ratio = static_cast<double>(first) / static_cast<double>(draws - first);
    EXPECT_NEAR(ratio, 2.0, 0.02);
}

TEST(EdgeSampler, ChiSquareOnRandomGraph) {
    const auto g = test::random_graph(12, 0.5, 3);
    EdgeSampler s(g, 99);
    const std::size_t m = s.num_edges();
    std::vector<double> counts(m, 0.0);
    const int draws = 1'000'000;
    for (int t = 0; t < draws; ++t) {
        counts[s.sample_edge()] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
        const double expected = draws * s.probability(e);
        chi2 += (counts[e] - expected) * (counts[e] - expected) / expected;
    }
    // Wilson-Hilferty upper 0.1% point of chi-square with m - 1 degrees of freedom.
    const double k = static_cast<double>(m - 1);
    const double z = 3.0902;
    const double critical = k * std::pow(1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k)), 3.0);
    EXPECT_LT(chi2, critical);
}

TEST(Negatives, UniformOverFour) {
    Rng rng(5);
    std::vector<double> counts(4, 0.0);
    const int draws = 250'000;
    for (int t = 0; t < draws; ++t) {
        for (auto c : sample_negatives(4, 4, rng)) {
            counts[c] += 1.0;
        }
    }
    for (double c : counts) {
        EXPECT_NEAR(c / (4.0 * draws), 0.25, 0.0025);
    }
}

TEST(InitEmbedding, SpectralPathThree) {
    const auto g = test::path_graph(3);
    const auto e = init_embedding(g, 1, InitMode::spectral, 0);
    EXPECT_EQ(e.provenance, Provenance::spectral);
    const auto sol = spectral_init(g, 1);
    const double scale = 10.0 / sol.vectors.cwiseAbs().maxCoeff();
    EXPECT_TRUE(e.coords.isApprox(sol.vectors * scale, 1e-14));
    EXPECT_NEAR(e.coords.cwiseAbs().maxCoeff(), 10.0, 1e-12);
}

TEST(InitEmbedding, SpectralIsOptimalBeforeScaling) {
    const auto g = random_connected_graph(30, 0.2, 4);
    const auto e = init_embedding(g, 2, InitMode::spectral, 0);
    // Undo the max-abs scaling by normalizing columns, then compare against random frames.
    RowMatrix unit = e.coords;
    unit.colwise().normalize();
    const auto report = check_spectral_optimality(g, 2, 100, 3);
    EXPECT_TRUE(report.passed);
    const Eigen::MatrixXd lt = build_laplacians(g).normalized;
    EXPECT_NEAR((unit.transpose() * lt * unit).trace(), report.context["optimal_trace"].get<double>(), 1e-10);
}

TEST(InitEmbedding, RandomDeterministicAndBounded) {
    const auto g = test::random_graph(20, 0.3, 1);
    const auto a = init_embedding(g, 3, InitMode::random, 11);
    const auto b = init_embedding(g, 3, InitMode::random, 11);
    EXPECT_TRUE(a.coords == b.coords);
    EXPECT_LE(a.coords.cwiseAbs().maxCoeff(), 10.0);
    EXPECT_EQ(a.provenance, Provenance::random);
}

TEST(Optimize, ZeroSamplesIsIdentity) {
    const auto g = test::random_graph(10, 0.4, 2);
    const auto init = init_embedding(g, 2, InitMode::random, 3);
    OptimizerConfig cfg;
    cfg.n_epochs = 1;
    cfg.samples_per_epoch = 0;
    const auto r = optimize(g, init, KernelParams::cauchy(1.929, 0.7915), cfg);
    EXPECT_TRUE(r.embedding.coords == init.coords);
}

TEST(Optimize, TwoPointGaussianContracts) {
    const auto g = SimilarityGraph::from_edges(2, {{0, 1, 1.0}});
    Embedding init;
    init.coords = RowMatrix::Zero(2, 2);
    init.coords(1, 0) = 3.0;
    OptimizerConfig cfg;
    cfg.n_epochs = 30;
    cfg.n_neg = 0;
    cfg.initial_lr = 0.05;
    cfg.samples_per_epoch = 1;
    const auto r = optimize(g, init, KernelParams::gaussian(1.0), cfg);
    double previous = r.initial_loss->attract;
    for (const auto& rec : r.trace) {
        EXPECT_LT(rec.loss->attract, previous) << "epoch " << rec.epoch;
        previous = rec.loss->attract;
    }
}

TEST(Optimize, LearningRateSchedule) {
    const auto g = test::random_graph(10, 0.4, 2);
    OptimizerConfig cfg;
    cfg.n_epochs = 7;
    cfg.initial_lr = 0.9;
    const auto r = optimize(g, init_embedding(g, 2, InitMode::random, 1), KernelParams::gaussian(1.0), cfg);
    ASSERT_EQ(r.trace.size(), 7u);
    for (const auto& rec : r.trace) {
        EXPECT_EQ(rec.alpha, 0.9 * (1.0 - static_cast<double>(rec.epoch) / 7.0));
    }
}

TEST(Optimize, Deterministic) {
    const auto g = test::random_graph(25, 0.3, 6);
    OptimizerConfig cfg;
    cfg.n_epochs = 20;
    cfg.seed = 99;
    const auto init = init_embedding(g, 2, InitMode::random, 5);
    const auto a = optimize(g, init, KernelParams::cauchy(1.929, 0.7915), cfg);
    const auto b = optimize(g, init, KernelParams::cauchy(1.929, 0.7915), cfg);
    EXPECT_TRUE(a.embedding.coords == b.embedding.coords);
    std::ostringstream ta;
    std::ostringstream tb;
    write_trace_jsonl(ta, a);
    write_trace_jsonl(tb, b);
    EXPECT_EQ(ta.str(), tb.str());
    cfg.seed = 100;
    const auto c = optimize(g, init, KernelParams::cauchy(1.929, 0.7915), cfg);
    EXPECT_FALSE(a.embedding.coords == c.embedding.coords);
}

TEST(Optimize, MoveOtherMovesBothEnds) {
    const auto g = SimilarityGraph::from_edges(3, {{0, 1, 1.0}});
    Embedding init;
    init.coords = RowMatrix::Zero(3, 1);
    init.coords(1, 0) = 1.0;
    init.coords(2, 0) = 50.0;
    OptimizerConfig cfg;
    cfg.n_epochs = 1;
    cfg.n_neg = 0;
    cfg.samples_per_epoch = 1;
    cfg.move_other = true;
    const auto r = optimize(g, init, KernelParams::gaussian(1.0), cfg);
    EXPECT_NE(r.embedding.coords(0, 0), 0.0);
    EXPECT_NE(r.embedding.coords(1, 0), 1.0);
    EXPECT_NEAR(r.embedding.coords(0, 0) + r.embedding.coords(1, 0), 1.0, 1e-15);
}

TEST(Optimize, RejectsBadInputs) {
    const auto g = test::random_graph(10, 0.4, 2);
    Embedding wrong;
    wrong.coords = RowMatrix::Zero(9, 2);
    EXPECT_THROW(optimize(g, wrong, KernelParams::gaussian(1.0), {}), ConfigError);
    OptimizerConfig bad;
    bad.n_epochs = 0;
    EXPECT_THROW(optimize(g, init_embedding(g, 2, InitMode::random, 1), KernelParams::gaussian(1.0), bad),
                 ConfigError);
    Embedding nan_init = init_embedding(g, 2, InitMode::random, 1);
    nan_init.coords(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(optimize(g, nan_init, KernelParams::gaussian(1.0), {}), NumericError);
}

TEST(Optimize, TwoBlobSanity) {
    const auto fixture = two_blob_fixture();
    const auto fit = fit_ab(0.1);
    const auto p = KernelParams::cauchy(fit.a, fit.b);
    const auto init = init_embedding(fixture.graph, 2, InitMode::spectral, 0);
    const auto r = optimize(fixture.graph, init, p, {});
    EXPECT_LT(r.trace.back().loss->total, r.initial_loss->total);

    const auto& y = r.embedding.coords;
    double diameter = 0.0;
    double within = 0.0;
    double between = 0.0;
    int n_within = 0;
    int n_between = 0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < y.rows(); ++j) {
            const double d = (y.row(i) - y.row(j)).norm();
            diameter = std::max(diameter, d);
            if (fixture.labels[i] == fixture.labels[j]) {
                within += d;
                ++n_within;
            } else {
                between += d;
                ++n_between;
            }
        }
    }
    EXPECT_GE(diameter, 0.1);
    EXPECT_GT(between / n_between, within / n_within);
}

TEST(EstimateEpochLoss, AgreesWithExpectation) {
    const auto g = test::random_graph(6, 0.6, 12);
    const RowMatrix y = test::random_matrix(6, 2, 13);
    const auto p = KernelParams::cauchy(1.929, 0.7915);
    const auto est = estimate_epoch_loss(g, y, p, 3, 200'000, 4);
    const double exact = expected_sgd_loss(g, y, p, 3);
    EXPECT_GT(est.standard_error, 0.0);
    EXPECT_LE(std::abs(est.aggregate - exact), 4.0 * est.standard_error);
}

TEST(Parsing, InitModes) {
    EXPECT_EQ(parse_init_mode("random"), InitMode::random);
    EXPECT_THROW(parse_init_mode("pca"), ConfigError);
    EXPECT_EQ(to_string(Provenance::external), "external");
}
