#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "path2vec/graph.hpp"
#include "path2vec/taxonomy.hpp"

namespace path2vec {

enum class Metric { Shp, Lch, Wup };

Metric parse_metric(std::string_view name);  // "shp" | "lch" | "wup"
std::string_view metric_name(Metric m);

// Inverted shortest path: 1/dist(u,v), self-similarity 1. Range (0, 1].
// Throws when u and v are disconnected.
double shp_similarity(const Graph& g, NodeId u, NodeId v);

// -ln((dist(u,v) + 1) / (2 * max_depth)), natural log.
double lch_similarity(const Graph& g, const TaxonomyInfo& info, NodeId u, NodeId v);

// 2 * depth(deepest common ancestor) / (depth(u) + depth(v)). Range (0, 1].
double wup_similarity(const Graph& g, const TaxonomyInfo& info, NodeId u, NodeId v);

// Binds a graph, a metric, and the taxonomy data the metric needs. pair()
// performs an independent traversal per call, which is what the one-vs-all
// benchmark times; row() shares a single traversal across all targets and is
// what dataset building uses. Both produce identical values.
class MetricEvaluator {
public:
    MetricEvaluator(const Graph& g, Metric m);

    double pair(NodeId u, NodeId v) const;
    // Similarities from u to every node (self slot included). Throws on the
    // first unreachable target for ShP.
    std::vector<double> row(NodeId u) const;

    Metric metric() const { return metric_; }
    const Graph& graph() const { return graph_; }
    const TaxonomyInfo* taxonomy() const { return taxonomy_.get(); }

private:
    const Graph& graph_;
    Metric metric_;
    std::unique_ptr<TaxonomyInfo> taxonomy_;  // present for Lch and Wup
};

}  // namespace path2vec
