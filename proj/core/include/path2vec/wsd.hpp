#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "path2vec/evaluator.hpp"
#include "path2vec/graph.hpp"
#include "path2vec/metrics.hpp"
#include "path2vec/trainer.hpp"

namespace path2vec {

// Pairwise similarity backend: a raw graph metric or an embedding dot
// product. The callable must stay valid for the duration of the call using it.
using SimilarityFn = std::function<double(NodeId, NodeId)>;

inline SimilarityFn make_graph_backend(const MetricEvaluator& ev) {
    return [&ev](NodeId a, NodeId b) { return ev.pair(a, b); };
}
inline SimilarityFn make_embedding_backend(const EmbeddingMatrix& e) {
    return [&e](NodeId a, NodeId b) { return e.dot(a, b); };
}

struct WsdToken {
    std::string lemma;
    std::vector<NodeId> candidates;    // empty when the lemma is not in the inventory
    std::optional<NodeId> gold;        // resolved gold sense, if annotated
};

struct WsdInstance {
    std::vector<WsdToken> tokens;
};

// One instance per blank-line-separated block, one 'lemma<TAB>gold_label_or_-'
// line per token. Candidates come from the inventory; an annotated gold sense
// must be among the token's candidates whenever the token has any.
std::vector<WsdInstance> load_wsd_instances(std::istream& in, const SenseInventory& inventory,
                                            std::span<const std::string> node_labels);

// Sense graph over (token, candidate) nodes: every candidate pair from two
// different tokens is connected, weighted by the backend with negative values
// clamped to 0; candidates of the same token are never connected.
struct SenseGraph {
    struct Node {
        std::size_t token;  // index into instance.tokens
        NodeId candidate;
    };
    struct Edge {
        std::size_t a, b;  // indices into nodes
        double weight;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges;
};
SenseGraph build_sense_graph(const WsdInstance& instance, const SimilarityFn& similarity);

struct SenseAssignment {
    struct Choice {
        std::optional<NodeId> node;  // absent when the token has no candidates
        double centrality = 0.0;
    };
    std::vector<Choice> tokens;
};

// Weighted-degree centrality per candidate (sum of incident edge weights);
// each token takes its highest-centrality candidate, ties to the smaller id.
SenseAssignment disambiguate(const WsdInstance& instance, const SimilarityFn& similarity);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t gold_tokens = 0;
    std::size_t attempted = 0;
    std::size_t correct = 0;
};

// Micro scores pooled over all gold-bearing tokens. Tokens without candidates
// are never attempted, so they lower recall only.
F1Score score_f1(std::span<const SenseAssignment> assignments,
                 std::span<const WsdInstance> instances);

}  // namespace path2vec
