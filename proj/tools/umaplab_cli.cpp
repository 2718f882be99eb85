#include "umaplab_cli.hpp"

#include "umaplab/contrastive_sgd.hpp"
#include "umaplab/equivalence_lab.hpp"
#include "umaplab/fuzzy_graph.hpp"
#include "umaplab/graph_spectra.hpp"
#include "umaplab/neighbor_graph.hpp"
#include "umaplab/svg_plot.hpp"
#include "umaplab/synth_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace umaplab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
    std::string subcommand;
    std::string input;
    bool input_labels = false;
    std::string gen;
    std::size_t n = 100;
    double noise = 0.05;
    std::size_t k = 15;
    std::size_t dim = 2;
    double min_dist = 0.1;
    std::string kernel = "cauchy";
    double tau = 1.0;
    std::optional<double> a;
    std::optional<double> b;
    std::size_t epochs = 200;
    std::size_t neg = 5;
    double lr = 1.0;
    std::string init = "spectral";
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    std::vector<std::string> claims;
    std::string sabotage = "none";
    bool dump_graph = false;
};

json config_json(const RunConfig& c) {
    json j{{"subcommand", c.subcommand}, {"seed", c.seed}, {"out_dir", c.out_dir}};
    if (c.subcommand == "fit-ab") {
        j["min_dist"] = c.min_dist;
        return j;
    }
    if (c.subcommand == "verify") {
        j["claims"] = c.claims;
        j["sabotage"] = c.sabotage;
        return j;
    }
    j["input"] = c.input.empty() ? json(nullptr) : json(c.input);
    j["input_labels"] = c.input_labels;
    j["gen"] = c.gen.empty() ? json(nullptr) : json(c.gen);
    j["n"] = c.n;
    j["noise"] = c.noise;
    if (c.subcommand == "gen-data") {
        return j;
    }
    j["k"] = c.k;
    j["dim"] = c.dim;
    j["min_dist"] = c.min_dist;
    j["kernel"] = c.kernel;
    j["tau"] = c.tau;
    j["a"] = c.a ? json(*c.a) : json(nullptr);
    j["b"] = c.b ? json(*c.b) : json(nullptr);
    j["epochs"] = c.epochs;
    j["neg"] = c.neg;
    j["lr"] = c.lr;
    j["init"] = c.init;
    j["dump_graph"] = c.dump_graph;
    return j;
}

void add_data_options(CLI::App& app, RunConfig& c) {
    app.add_option("--input", c.input, "Input CSV of points");
    app.add_flag("--input-labels", c.input_labels, "Last input column holds integer labels");
    app.add_option("--gen", c.gen, "Synthetic generator")->check(CLI::IsMember({"blobs", "moons"}));
    app.add_option("--n", c.n, "Generated points (blobs: split over two clusters)")->check(CLI::PositiveNumber);
    app.add_option("--noise", c.noise, "Noise level for moons")->check(CLI::NonNegativeNumber);
}

LabeledDataset load_dataset(const RunConfig& c) {
    if (!c.input.empty() && !c.gen.empty()) {
        throw ConfigError("cli", "--input and --gen are mutually exclusive");
    }
    if (!c.input.empty()) {
        return load_csv(c.input, c.input_labels);
    }
    if (c.gen == "blobs") {
        if (c.n < 2 || c.n % 2 != 0) {
            throw ConfigError("cli", "--gen blobs needs an even --n >= 2 (got " + std::to_string(c.n) + ")");
        }
        return gen_blobs(c.n / 2, {{0.0, 0.0}, {10.0, 0.0}}, 0.5, c.seed);
    }
    if (c.gen == "moons") {
        return gen_two_moons(c.n, c.noise, c.seed);
    }
    throw ConfigError("cli", "one of --input or --gen is required");
}

fs::path prepare_out_dir(const RunConfig& c) {
    fs::path dir(c.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cli", "cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(2) << '\n';
}

int cmd_gen_data(const RunConfig& c, std::ostream& out) {
    const auto data = load_dataset(c);
    const auto dir = prepare_out_dir(c);
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < data.data.points().cols(); ++j) {
        header.push_back("x" + std::to_string(j));
    }
    header.emplace_back("label");
    write_csv(dir / "data.csv", data.data.points(), data.labels, header);
    out << "wrote " << (dir / "data.csv").string() << " (" << data.data.n() << " points)\n";
    return 0;
}

int cmd_embed(const RunConfig& c, std::ostream& out) {
    const auto data = load_dataset(c);
    const bool has_labels = !c.gen.empty() || c.input_labels;
    const auto dir = prepare_out_dir(c);

    KernelParams params;
    std::optional<MinDistFit> fit;
    const KernelFamily family = parse_kernel_family(c.kernel);
    if (family == KernelFamily::gaussian) {
        params = KernelParams::gaussian(c.tau);
    } else if (c.a && c.b) {
        params = KernelParams::cauchy(*c.a, *c.b);
    } else if (c.a || c.b) {
        throw ConfigError("cli", "--a and --b must be given together");
    } else {
        fit = fit_ab(c.min_dist);
        params = KernelParams::cauchy(fit->a, fit->b);
    }
    params.validate();

    const auto knn = knn_search(data.data, c.k);
    const auto fuzzy = build_fuzzy_graph(knn);
    if (c.dump_graph) {
        write_edge_list(dir / "graph.edges", fuzzy.graph);
    }

    const auto initial = init_embedding(fuzzy.graph, c.dim, parse_init_mode(c.init), derive_seed(c.seed, "init"));
    OptimizerConfig opt;
    opt.n_epochs = c.epochs;
    opt.n_neg = c.neg;
    opt.initial_lr = c.lr;
    opt.seed = c.seed;
    const auto result = optimize(fuzzy.graph, initial, params, opt);

    std::vector<std::string> header;
    for (std::size_t j = 0; j < c.dim; ++j) {
        header.push_back("y" + std::to_string(j));
    }
    std::span<const int> labels;
    if (has_labels) {
        header.emplace_back("label");
        labels = data.labels;
    }
    write_csv(dir / "embedding.csv", result.embedding.coords, labels, header);
    {
        std::ofstream trace(dir / "trace.jsonl");
        write_trace_jsonl(trace, result);
    }
    ScatterStyle style;
    style.title = "embedding (" + std::to_string(data.data.n()) + " points)";
    write_scatter_svg(dir / "scatter.svg", result.embedding.coords, labels, style);

    json report;
    report["config"] = config_json(c);
    report["kernel"] = {{"family", to_string(params.family)}, {"a", params.a}, {"b", params.b}, {"tau", params.tau}};
    if (fit) {
        report["fit"] = {{"a", fit->a}, {"b", fit->b}, {"rmse", fit->rmse}, {"iterations", fit->iterations}};
    }
    report["n"] = data.data.n();
    report["edges"] = fuzzy.graph.num_edges();
    report["components"] = count_components(fuzzy.graph);
    report["flagged_rows"] = fuzzy.params.num_flagged();
    report["init"] = to_string(result.embedding.provenance);
    report["self_negatives"] = result.self_negatives;
    report["initial_loss"] = result.initial_loss ? to_json(*result.initial_loss) : json(nullptr);
    report["final_loss"] =
        !result.trace.empty() && result.trace.back().loss ? to_json(*result.trace.back().loss) : json(nullptr);
    write_json(dir / "run.json", report);

    out << "embedded " << data.data.n() << " points into " << c.dim << "-D; outputs in " << dir.string() << '\n';
    if (result.initial_loss && report["final_loss"].is_object()) {
        out << std::setprecision(10) << "loss " << result.initial_loss->total << " -> "
            << report["final_loss"]["total"].get<double>() << '\n';
    }
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    SuiteOptions options;
    options.seed = c.seed;
    for (const auto& id : c.claims) {
        options.claims.insert(parse_claim(id));
    }
    options.sabotage = parse_sabotage(c.sabotage);
    const auto reports = run_suite(options);
    const auto table = emit_table1(c.seed);
    const auto dir = prepare_out_dir(c);

    bool all_passed = true;
    std::ostringstream summary;
    for (const auto& r : reports) {
        all_passed = all_passed && r.passed;
        summary << std::left << std::setw(18) << claim_id(r.claim) << (r.passed ? "PASS" : "FAIL") << "  residual "
                << std::scientific << std::setprecision(3) << r.residual << "  tolerance " << r.tolerance << '\n';
    }

    json report;
    report["config"] = config_json(c);
    report["claims"] = to_json(reports);
    report["table1"] = to_json(table);
    report["all_passed"] = all_passed;
    write_json(dir / "report.json", report);
    {
        std::ofstream text(dir / "table1.txt");
        text << render_table1(table) << '\n' << summary.str();
    }
    out << summary.str() << (all_passed ? "all claims passed\n" : "some claims failed\n");
    return all_passed ? 0 : 1;
}

int cmd_fit_ab(const RunConfig& c, std::ostream& out) {
    const auto fit = fit_ab(c.min_dist);
    out << std::setprecision(10) << "min_dist " << c.min_dist << "\na " << fit.a << "\nb " << fit.b << "\nrmse "
        << fit.rmse << "\nbaseline_rmse " << min_dist_rmse(c.min_dist, 1.0, 1.0) << "\niterations "
        << fit.iterations << '\n';
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Fuzzy-graph embedding and spectral equivalence checks", "umaplab"};
    app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--seed", c.seed, "Master seed");
    app.add_option("--out-dir", c.out_dir, "Output directory");

    auto* gen = app.add_subcommand("gen-data", "Write a synthetic data set to data.csv");
    add_data_options(*gen, c);

    auto* embed = app.add_subcommand("embed", "Build the fuzzy graph and optimize an embedding");
    add_data_options(*embed, c);
    embed->add_option("--k", c.k, "Neighbors per point")->check(CLI::PositiveNumber);
    embed->add_option("--dim", c.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    embed->add_option("--min-dist", c.min_dist, "min_dist for the (a, b) fit");
    embed->add_option("--kernel", c.kernel, "Similarity kernel")
        ->check(CLI::IsMember({"cauchy", "cauchy_ab", "gaussian"}));
    embed->add_option("--tau", c.tau, "Gaussian bandwidth");
    embed->add_option("--a", c.a, "Cauchy a (skips the fit)");
    embed->add_option("--b", c.b, "Cauchy b (skips the fit)");
    embed->add_option("--epochs", c.epochs, "SGD epochs")->check(CLI::PositiveNumber);
    embed->add_option("--neg", c.neg, "Negative samples per positive");
    embed->add_option("--lr", c.lr, "Initial learning rate");
    embed->add_option("--init", c.init, "Initialization")->check(CLI::IsMember({"spectral", "random"}));
    embed->add_flag("--dump-graph", c.dump_graph, "Also write graph.edges");

    auto* verify = app.add_subcommand("verify", "Run the equivalence suite; exit 0 iff every claim passes");
    verify->add_option("--claims", c.claims, "Claim ids to run (default: all)")->delimiter(',');
#if defined(UMAPLAB_TEST_HOOKS)
    verify->add_option("--sabotage", c.sabotage, "Fault injection (test builds)")
        ->check(CLI::IsMember({"none", "laplacian-sign"}));
#endif

    auto* fit = app.add_subcommand("fit-ab", "Fit the Cauchy (a, b) to the min_dist curve");
    fit->add_option("--min-dist", c.min_dist, "min_dist in [0, 3)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (gen->parsed()) {
            c.subcommand = "gen-data";
            return cmd_gen_data(c, out);
        }
        if (embed->parsed()) {
            c.subcommand = "embed";
            return cmd_embed(c, out);
        }
        if (verify->parsed()) {
            c.subcommand = "verify";
            return cmd_verify(c, out);
        }
        c.subcommand = "fit-ab";
        return cmd_fit_ab(c, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace umaplab::cli
