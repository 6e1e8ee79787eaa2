#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "path2vec/util.hpp"

namespace path2vec {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Immutable undirected graph: contiguous node ids, unique non-empty labels,
// sorted adjacency, optional positive edge weights, optional taxonomy root.
// Safe for concurrent reads once built.
class Graph {
public:
    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return targets_.size() / 2; }
    bool weighted() const { return weighted_; }
    std::optional<NodeId> root() const { return root_; }

    const std::string& label(NodeId v) const { return labels_[v]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<NodeId> find(std::string_view label) const;
    // Throws std::runtime_error naming the label when absent.
    NodeId require(std::string_view label) const;

    std::span<const NodeId> neighbors(NodeId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    // Aligned with neighbors(); all 1.0 when the graph is unweighted.
    std::span<const double> neighbor_weights(NodeId v) const {
        return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    friend class GraphBuilder;
    Graph() = default;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<double> weights_;
    bool weighted_ = false;
    std::optional<NodeId> root_;
};

// Incremental construction with eager validation: self-loops and conflicting
// duplicate weights throw at add_edge time, duplicate labels at add_node time.
// Exact duplicate edges collapse silently.
class GraphBuilder {
public:
    NodeId add_node(std::string label);
    NodeId intern(std::string_view label);
    std::optional<NodeId> find(std::string_view label) const;

    void add_edge(NodeId a, NodeId b);
    void add_edge(NodeId a, NodeId b, double weight);
    void set_root(NodeId root);

    std::size_t node_count() const { return labels_.size(); }
    Graph build();

private:
    void add_edge_impl(NodeId a, NodeId b, double weight, bool explicit_weight);

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::unordered_map<std::uint64_t, double> edges_;
    bool any_weighted_ = false;
    std::optional<NodeId> root_;
};

// Parses the TAB-separated edge-list format:
//   labelA<TAB>labelB[<TAB>weight]
// plus '#' comment lines and the optional '#root<TAB>label' directive.
// Errors report 1-based line numbers.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);

// Single-source distances to every node; kUnreachable where disconnected.
// BFS when the graph is unweighted, Dijkstra otherwise.
std::vector<double> shortest_paths_from(const Graph& g, NodeId source);

// Distance for one pair, stopping as soon as the target is settled.
double pairwise_distance(const Graph& g, NodeId u, NodeId v);

struct DistanceTable {
    std::vector<NodeId> sources;
    std::size_t columns = 0;
    std::vector<double> values;  // row-major, sources.size() x columns

    double at(std::size_t source_index, NodeId v) const {
        return values[source_index * columns + v];
    }
};

// Repeated shortest_paths_from over `sources` (all nodes when empty), fanned
// out over `threads`. Rows are assembled in source order, so the result is
// identical for any thread count.
DistanceTable all_pairs_shortest_paths(const Graph& g, std::span<const NodeId> sources = {},
                                       unsigned threads = 1);

}  // namespace path2vec
