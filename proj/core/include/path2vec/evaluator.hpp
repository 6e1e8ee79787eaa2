#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "path2vec/dataset.hpp"
#include "path2vec/metrics.hpp"
#include "path2vec/trainer.hpp"

namespace path2vec {

// Spearman rank correlation: Pearson over fractional ranks, ties averaged.
// Throws on length mismatch, fewer than two points, or a constant side.
double spearman(std::span<const double> x, std::span<const double> y);

// Correlation between embedding dot products and gold similarities.
double evaluate_fit(const EmbeddingMatrix& e, std::span<const SimilarityRecord> gold);

struct JudgmentPair {
    std::string lemma_a;
    std::string lemma_b;
    double score = 0.0;  // human similarity rating
};

// lemma -> candidate node ids, deduplicated, file order preserved.
struct SenseInventory {
    std::unordered_map<std::string, std::vector<NodeId>> senses;
};

// TSV 'lemmaA<TAB>lemmaB<TAB>score'.
std::vector<JudgmentPair> load_judgments(std::istream& in);
// TSV 'lemma<TAB>label1,label2,...', labels resolved against node_labels.
SenseInventory load_inventory(std::istream& in, std::span<const std::string> node_labels);

struct HumanEvalResult {
    double rho = 0.0;
    std::size_t pairs_used = 0;
    std::size_t pairs_skipped = 0;  // judgments with a lemma missing from the inventory
};

// Per judgment pair, the model score is the maximum dot product over all
// candidate sense combinations; correlation against the human scores.
HumanEvalResult evaluate_human(const EmbeddingMatrix& e, std::span<const JudgmentPair> judgments,
                               const SenseInventory& inventory);

// Top-k rows by dot product with u, u excluded, ties to the smaller id.
std::vector<std::pair<NodeId, double>> nearest_neighbors(const EmbeddingMatrix& e, NodeId u,
                                                         std::size_t k);

struct BenchmarkReport {
    std::vector<std::int64_t> graph_ns;   // one wall-clock sample per repetition
    std::vector<std::int64_t> vector_ns;
    std::int64_t graph_median_ns = 0;
    std::int64_t vector_median_ns = 0;
    double speedup = 0.0;  // graph median / vector median
    double graph_checksum = 0.0;
    double vector_checksum = 0.0;
    std::size_t graph_targets = 0;   // nodes covered per pass, must equal |V|
    std::size_t vector_targets = 0;

    void write_tsv(std::ostream& out) const;  // side, repetition, nanos
    std::string summary() const;
};

// Times one-vs-all similarity on both backends: (a) one independent pairwise
// metric call per target node, (b) one dot product per row. One warm-up pass
// per side is discarded; medians over `repetitions`. Both sides run
// single-threaded so the ratio compares like with like.
BenchmarkReport benchmark_one_vs_all(const Graph& g, const EmbeddingMatrix& e, Metric metric,
                                     NodeId source, std::size_t repetitions);

}  // namespace path2vec
