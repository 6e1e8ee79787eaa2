// Command-line surface: metrics | train | eval | bench | wsd | sample.
// Exit codes: 0 success, 1 data/runtime error, 2 usage error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "path2vec/dataset.hpp"
#include "path2vec/evaluator.hpp"
#include "path2vec/graph.hpp"
#include "path2vec/metrics.hpp"
#include "path2vec/trainer.hpp"
#include "path2vec/util.hpp"
#include "path2vec/wsd.hpp"

namespace {

using namespace path2vec;
using Clock = std::chrono::steady_clock;

// Flat key-value run manifest, emitted as one JSON line on stdout after every
// successful command. Input digests let a caller detect changed inputs.
class Manifest {
public:
    explicit Manifest(std::string command) : start_(Clock::now()) {
        json_["command"] = std::move(command);
        json_["version"] = std::string(kVersion);
    }

    template <typename T>
    void set(const std::string& key, const T& value) {
        json_[key] = value;
    }

    void input(const std::string& key, const std::string& path) {
        json_[key] = path;
        json_[key + "_digest"] = fnv1a64_hex(path);
    }

    void emit() {
        json_["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   Clock::now() - start_)
                                   .count();
        std::cout << json_.dump() << "\n";
    }

private:
    nlohmann::json json_;
    Clock::time_point start_;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int run_metrics(const std::string& graph_path, const std::string& metric_name, std::uint32_t k,
                unsigned threads, const std::string& out_path) {
    Manifest manifest("metrics");
    manifest.input("graph", graph_path);
    manifest.set("metric", metric_name);
    manifest.set("k", k);
    manifest.set("threads", threads);
    manifest.set("out", out_path);

    const Graph g = load_edge_list_file(graph_path);
    const auto start = Clock::now();
    const auto dataset = build_dataset(g, parse_metric(metric_name), k, threads);
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    auto out = open_output(out_path);
    save_dataset(dataset, out);
    out.close();

    std::cerr << "pairs\t" << dataset.records.size() << "\nelapsed_ms\t" << elapsed << "\n";
    manifest.set("pairs", dataset.records.size());
    manifest.emit();
    return 0;
}

int run_train(const std::string& graph_path, const std::string& dataset_path,
              const TrainingConfig& cfg, const std::string& out_path) {
    Manifest manifest("train");
    manifest.input("graph", graph_path);
    manifest.input("dataset", dataset_path);
    manifest.set("dim", cfg.dim);
    manifest.set("alpha", cfg.alpha);
    manifest.set("negatives", cfg.negatives);
    manifest.set("batch_size", cfg.batch_size);
    manifest.set("lr", cfg.learning_rate);
    manifest.set("epochs", cfg.max_epochs);
    manifest.set("patience", cfg.patience);
    manifest.set("validation_fraction", cfg.validation_fraction);
    manifest.set("seed", cfg.seed);
    manifest.set("threads", cfg.threads);
    manifest.set("out", out_path);

    const Graph g = load_edge_list_file(graph_path);
    const auto dataset = load_dataset_file(dataset_path, g.labels());
    const auto result = train(g, dataset, cfg, [](const EpochStats& stats) {
        std::fprintf(stderr, "epoch\t%u\ttrain_loss\t%.6g\tval_mse\t%.6g\n", stats.epoch,
                     stats.train_loss, stats.validation_mse);
    });
    auto out = open_output(out_path);
    save_embeddings(result.embeddings, out);
    out.close();

    manifest.set("epochs_run", result.epochs_run);
    manifest.set("best_epoch", result.best_epoch);
    manifest.set("best_validation_mse", result.best_validation_mse);
    manifest.emit();
    return 0;
}

int run_eval(const std::string& embeddings_path, const std::string& dataset_path,
             const std::string& judgments_path, const std::string& inventory_path) {
    Manifest manifest("eval");
    manifest.input("embeddings", embeddings_path);
    const auto embeddings = load_embeddings_file(embeddings_path);

    if (!dataset_path.empty()) {
        manifest.input("dataset", dataset_path);
        const auto gold = load_dataset_file(dataset_path, embeddings.node_labels);
        const double rho = evaluate_fit(embeddings, gold.records);
        std::printf("spearman\t%.6f\npairs\t%zu\n", rho, gold.records.size());
        manifest.set("spearman", rho);
        manifest.set("pairs", gold.records.size());
    } else {
        manifest.input("judgments", judgments_path);
        manifest.input("inventory", inventory_path);
        std::ifstream jin(judgments_path);
        if (!jin) throw std::runtime_error("cannot open judgments file: " + judgments_path);
        const auto judgments = load_judgments(jin);
        std::ifstream iin(inventory_path);
        if (!iin) throw std::runtime_error("cannot open inventory file: " + inventory_path);
        const auto inventory = load_inventory(iin, embeddings.node_labels);
        const auto result = evaluate_human(embeddings, judgments, inventory);
        std::printf("spearman\t%.6f\npairs_used\t%zu\npairs_skipped\t%zu\n", result.rho,
                    result.pairs_used, result.pairs_skipped);
        manifest.set("spearman", result.rho);
        manifest.set("pairs_used", result.pairs_used);
        manifest.set("pairs_skipped", result.pairs_skipped);
    }
    manifest.emit();
    return 0;
}

int run_bench(const std::string& graph_path, const std::string& embeddings_path,
              const std::string& metric_name, const std::string& source_label, std::size_t reps,
              const std::string& out_path) {
    Manifest manifest("bench");
    manifest.input("graph", graph_path);
    manifest.input("embeddings", embeddings_path);
    manifest.set("metric", metric_name);
    manifest.set("source", source_label);
    manifest.set("reps", reps);
    manifest.set("out", out_path);

    const Graph g = load_edge_list_file(graph_path);
    const auto embeddings = load_embeddings_file(embeddings_path);
    const NodeId source = g.require(source_label);
    const auto report =
        benchmark_one_vs_all(g, embeddings, parse_metric(metric_name), source, reps);
    auto out = open_output(out_path);
    report.write_tsv(out);
    out.close();

    std::cerr << report.summary() << "\n";
    manifest.set("graph_median_ns", report.graph_median_ns);
    manifest.set("vector_median_ns", report.vector_median_ns);
    manifest.set("speedup", report.speedup);
    manifest.emit();
    return 0;
}

int run_wsd(const std::string& instances_path, const std::string& inventory_path,
            const std::string& backend, const std::string& graph_path,
            const std::string& metric_name, const std::string& embeddings_path,
            const std::string& out_path) {
    Manifest manifest("wsd");
    manifest.set("backend", backend);
    manifest.set("out", out_path);
    manifest.input("instances", instances_path);
    manifest.input("inventory", inventory_path);

    // Keep whichever backend owner is in use alive for the whole run.
    std::optional<Graph> graph;
    std::optional<MetricEvaluator> evaluator;
    std::optional<EmbeddingMatrix> embeddings;
    SimilarityFn similarity;
    const std::vector<std::string>* labels = nullptr;

    if (backend == "graph") {
        manifest.input("graph", graph_path);
        manifest.set("metric", metric_name);
        graph.emplace(load_edge_list_file(graph_path));
        evaluator.emplace(*graph, parse_metric(metric_name));
        similarity = make_graph_backend(*evaluator);
        labels = &graph->labels();
    } else {
        manifest.input("embeddings", embeddings_path);
        embeddings.emplace(load_embeddings_file(embeddings_path));
        similarity = make_embedding_backend(*embeddings);
        labels = &embeddings->node_labels;
    }

    std::ifstream iin(inventory_path);
    if (!iin) throw std::runtime_error("cannot open inventory file: " + inventory_path);
    const auto inventory = load_inventory(iin, *labels);
    std::ifstream sin(instances_path);
    if (!sin) throw std::runtime_error("cannot open instances file: " + instances_path);
    const auto instances = load_wsd_instances(sin, inventory, *labels);
    if (instances.empty()) throw std::runtime_error("no instances in " + instances_path);

    std::vector<SenseAssignment> assignments;
    assignments.reserve(instances.size());
    for (const auto& instance : instances) {
        assignments.push_back(disambiguate(instance, similarity));
    }

    auto out = open_output(out_path);
    out << "instance\ttoken\tchosen\tcentrality\n";
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (std::size_t t = 0; t < instances[i].tokens.size(); ++t) {
            const auto& choice = assignments[i].tokens[t];
            out << i << '\t' << t << '\t'
                << (choice.node ? (*labels)[*choice.node] : std::string("-")) << '\t'
                << format_exact(choice.centrality) << "\n";
        }
    }
    out.close();

    const F1Score score = score_f1(assignments, instances);
    std::printf("precision\t%.6f\nrecall\t%.6f\nf1\t%.6f\n", score.precision, score.recall,
                score.f1);
    std::cerr << "gold " << score.gold_tokens << ", attempted " << score.attempted << ", correct "
              << score.correct << "\n";
    manifest.set("precision", score.precision);
    manifest.set("recall", score.recall);
    manifest.set("f1", score.f1);
    manifest.emit();
    return 0;
}

int run_sample(const std::string& graph_path, std::uint32_t max_length, std::size_t per_length,
               std::uint64_t seed, const std::string& exclude_path, const std::string& out_path) {
    Manifest manifest("sample");
    manifest.input("graph", graph_path);
    manifest.set("max_length", max_length);
    manifest.set("per_length", per_length);
    manifest.set("seed", seed);
    manifest.set("out", out_path);

    const Graph g = load_edge_list_file(graph_path);
    std::optional<SimilarityDataset> exclude;
    if (!exclude_path.empty()) {
        manifest.input("exclude", exclude_path);
        exclude = load_dataset_file(exclude_path, g.labels());
    }
    const auto samples = stratified_path_sample(g, max_length, per_length, seed,
                                                exclude ? &*exclude : nullptr);
    auto out = open_output(out_path);
    for (const auto& s : samples) {
        out << g.label(s.u) << '\t' << g.label(s.v) << '\t' << s.length << "\n";
    }
    out.close();

    manifest.set("pairs", samples.size());
    manifest.emit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph node embeddings that approximate path-based similarity metrics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(path2vec::kVersion));

    std::string graph_path, dataset_path, embeddings_path, out_path;
    std::string judgments_path, inventory_path, instances_path, exclude_path;
    std::string metric = "shp", backend, source_label;
    std::uint32_t k = 50;
    std::uint32_t max_length = 7;
    std::size_t per_length = 150;
    std::size_t reps = 5;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    TrainingConfig cfg;

    const auto metric_check = CLI::IsMember({"shp", "lch", "wup"});

    auto* metrics_cmd = app.add_subcommand("metrics", "compute a pruned similarity dataset");
    metrics_cmd->add_option("--graph", graph_path, "edge-list file")->required();
    metrics_cmd->add_option("--metric", metric, "shp|lch|wup")->check(metric_check);
    metrics_cmd->add_option("--k", k, "similar nodes kept per node")
        ->check(CLI::PositiveNumber);
    metrics_cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    metrics_cmd->add_option("--out", out_path, "output dataset TSV")->required();

    auto* train_cmd = app.add_subcommand("train", "train embeddings on a similarity dataset");
    train_cmd->add_option("--graph", graph_path, "edge-list file")->required();
    train_cmd->add_option("--dataset", dataset_path, "similarity dataset TSV")->required();
    train_cmd->add_option("--dim", cfg.dim, "embedding dimensionality")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--alpha", cfg.alpha, "adjacency regularizer coefficient")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--negatives", cfg.negatives, "negative samples per gold pair");
    train_cmd->add_option("--batch-size", cfg.batch_size, "gold pairs per batch")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--epochs", cfg.max_epochs, "maximum epochs")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--patience", cfg.patience, "early-stopping patience")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--validation-fraction", cfg.validation_fraction,
                          "held-out fraction (0 disables early stopping)")
        ->check(CLI::Range(0.0, 0.5));
    train_cmd->add_option("--seed", cfg.seed, "RNG seed");
    train_cmd->add_option("--threads", cfg.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--out", out_path, "output embeddings file")->required();

    auto* eval_cmd = app.add_subcommand("eval", "Spearman correlation of embedding dot products");
    eval_cmd->add_option("--embeddings", embeddings_path, "embeddings file")->required();
    eval_cmd->add_option("--dataset", dataset_path, "gold similarity dataset TSV");
    eval_cmd->add_option("--judgments", judgments_path, "human judgments TSV");
    eval_cmd->add_option("--inventory", inventory_path, "lemma->senses inventory TSV");

    auto* bench_cmd = app.add_subcommand("bench", "time one-vs-all graph metric vs dot products");
    bench_cmd->add_option("--graph", graph_path, "edge-list file")->required();
    bench_cmd->add_option("--embeddings", embeddings_path, "embeddings file")->required();
    bench_cmd->add_option("--metric", metric, "shp|lch|wup")->check(metric_check);
    bench_cmd->add_option("--source", source_label, "source node label")->required();
    bench_cmd->add_option("--reps", reps, "timed repetitions per side")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", out_path, "output timing TSV")->required();

    auto* wsd_cmd = app.add_subcommand("wsd", "disambiguate senses by weighted-degree centrality");
    wsd_cmd->add_option("--instances", instances_path, "WSD instances file")->required();
    wsd_cmd->add_option("--inventory", inventory_path, "lemma->senses inventory TSV")->required();
    wsd_cmd->add_option("--backend", backend, "graph|embeddings")
        ->required()
        ->check(CLI::IsMember({"graph", "embeddings"}));
    wsd_cmd->add_option("--graph", graph_path, "edge-list file (graph backend)");
    wsd_cmd->add_option("--metric", metric, "shp|lch|wup (graph backend)")->check(metric_check);
    wsd_cmd->add_option("--embeddings", embeddings_path, "embeddings file (embeddings backend)");
    wsd_cmd->add_option("--out", out_path, "output assignments TSV")->required();

    auto* sample_cmd = app.add_subcommand("sample", "stratified test pairs by exact path length");
    sample_cmd->add_option("--graph", graph_path, "edge-list file")->required();
    sample_cmd->add_option("--max-length", max_length, "longest stratum")
        ->check(CLI::PositiveNumber);
    sample_cmd->add_option("--per-length", per_length, "pairs per stratum")
        ->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", seed, "RNG seed");
    sample_cmd->add_option("--exclude", exclude_path, "dataset TSV of pairs to avoid");
    sample_cmd->add_option("--out", out_path, "output pairs TSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (metrics_cmd->parsed()) return run_metrics(graph_path, metric, k, threads, out_path);
        if (train_cmd->parsed()) return run_train(graph_path, dataset_path, cfg, out_path);
        if (eval_cmd->parsed()) {
            const bool with_dataset = !dataset_path.empty();
            const bool with_judgments = !judgments_path.empty() || !inventory_path.empty();
            if (with_dataset == with_judgments ||
                (with_judgments && (judgments_path.empty() || inventory_path.empty()))) {
                throw std::invalid_argument(
                    "eval needs either --dataset or both --judgments and --inventory");
            }
            return run_eval(embeddings_path, dataset_path, judgments_path, inventory_path);
        }
        if (bench_cmd->parsed()) {
            return run_bench(graph_path, embeddings_path, metric, source_label, reps, out_path);
        }
        if (wsd_cmd->parsed()) {
            if (backend == "graph" && graph_path.empty()) {
                throw std::invalid_argument("wsd --backend graph needs --graph");
            }
            if (backend == "embeddings" && embeddings_path.empty()) {
                throw std::invalid_argument("wsd --backend embeddings needs --embeddings");
            }
            return run_wsd(instances_path, inventory_path, backend, graph_path, metric,
                           embeddings_path, out_path);
        }
        if (sample_cmd->parsed()) {
            return run_sample(graph_path, max_length, per_length, seed, exclude_path, out_path);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
