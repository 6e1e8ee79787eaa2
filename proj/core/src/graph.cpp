#include "path2vec/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <queue>
#include <stdexcept>
#include <thread>

namespace path2vec {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::optional<NodeId> Graph::find(std::string_view label) const {
    const auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId Graph::require(std::string_view label) const {
    const auto id = find(label);
    if (!id) throw std::runtime_error("unknown label: '" + std::string(label) + "'");
    return *id;
}

NodeId GraphBuilder::add_node(std::string label) {
    if (label.empty()) throw std::runtime_error("empty node label");
    if (has_whitespace(label)) {
        throw std::runtime_error("label contains whitespace: '" + label + "'");
    }
    const auto [it, inserted] = index_.emplace(label, static_cast<NodeId>(labels_.size()));
    if (!inserted) throw std::runtime_error("duplicate label: '" + label + "'");
    labels_.push_back(std::move(label));
    return it->second;
}

NodeId GraphBuilder::intern(std::string_view label) {
    if (const auto id = find(label)) return *id;
    return add_node(std::string(label));
}

std::optional<NodeId> GraphBuilder::find(std::string_view label) const {
    const auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void GraphBuilder::add_edge(NodeId a, NodeId b) { add_edge_impl(a, b, 1.0, false); }

void GraphBuilder::add_edge(NodeId a, NodeId b, double weight) {
    add_edge_impl(a, b, weight, true);
}

void GraphBuilder::add_edge_impl(NodeId a, NodeId b, double weight, bool explicit_weight) {
    if (a >= labels_.size() || b >= labels_.size()) {
        throw std::invalid_argument("edge endpoint out of range");
    }
    if (a == b) throw std::runtime_error("self-loop at '" + labels_[a] + "'");
    if (explicit_weight && !(weight > 0.0)) {
        throw std::runtime_error("non-positive edge weight between '" + labels_[a] + "' and '" +
                                 labels_[b] + "'");
    }
    const auto [it, inserted] = edges_.emplace(pair_key(a, b), weight);
    if (!inserted && it->second != weight) {
        throw std::runtime_error("conflicting weight for duplicate edge '" + labels_[a] +
                                 "' - '" + labels_[b] + "'");
    }
    any_weighted_ = any_weighted_ || explicit_weight;
}

void GraphBuilder::set_root(NodeId root) {
    if (root >= labels_.size()) throw std::invalid_argument("root id out of range");
    root_ = root;
}

Graph GraphBuilder::build() {
    if (labels_.empty()) throw std::runtime_error("empty graph");

    const std::size_t n = labels_.size();
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [key, w] : edges_) {
        ++degree[static_cast<NodeId>(key >> 32)];
        ++degree[static_cast<NodeId>(key & 0xFFFFFFFFULL)];
    }

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    g.targets_.resize(g.offsets_[n]);
    g.weights_.assign(g.offsets_[n], 1.0);

    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [key, w] : edges_) {
        const auto a = static_cast<NodeId>(key >> 32);
        const auto b = static_cast<NodeId>(key & 0xFFFFFFFFULL);
        g.targets_[cursor[a]] = b;
        g.weights_[cursor[a]++] = w;
        g.targets_[cursor[b]] = a;
        g.weights_[cursor[b]++] = w;
    }
    // Sort each adjacency run, keeping weights aligned.
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t lo = g.offsets_[v], hi = g.offsets_[v + 1];
        std::vector<std::pair<NodeId, double>> run;
        run.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) run.emplace_back(g.targets_[i], g.weights_[i]);
        std::sort(run.begin(), run.end());
        for (std::size_t i = lo; i < hi; ++i) {
            g.targets_[i] = run[i - lo].first;
            g.weights_[i] = run[i - lo].second;
        }
    }

    g.labels_ = std::move(labels_);
    g.index_ = std::move(index_);
    g.weighted_ = any_weighted_;
    g.root_ = root_;
    return g;
}

Graph load_edge_list(std::istream& in) {
    GraphBuilder builder;
    std::optional<std::string> root_label;
    std::string line;
    std::size_t line_no = 0;

    const auto fail = [&](const std::string& what) -> void {
        throw std::runtime_error("edge list line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        if (is_comment(text)) {
            const auto fields = split_tabs(text);
            if (fields[0] == "#root") {
                if (fields.size() != 2 || fields[1].empty()) fail("malformed #root directive");
                if (root_label) fail("duplicate #root directive");
                root_label = std::string(fields[1]);
            }
            continue;
        }
        const auto fields = split_tabs(text);
        if (fields.size() != 2 && fields.size() != 3) {
            fail("expected 2 or 3 tab-separated fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) fail("empty label");
        try {
            const NodeId a = builder.intern(fields[0]);
            const NodeId b = builder.intern(fields[1]);
            if (fields.size() == 3) {
                builder.add_edge(a, b, parse_double(fields[2], "weight"));
            } else {
                builder.add_edge(a, b);
            }
        } catch (const std::runtime_error& e) {
            fail(e.what());
        }
    }

    if (builder.node_count() == 0) throw std::runtime_error("empty graph");
    if (root_label) {
        const auto root = builder.find(*root_label);
        if (!root) throw std::runtime_error("unknown root label: '" + *root_label + "'");
        builder.set_root(*root);
    }
    return builder.build();
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_edge_list(in);
}

std::vector<double> shortest_paths_from(const Graph& g, NodeId source) {
    const std::size_t n = g.node_count();
    if (source >= n) throw std::invalid_argument("source node out of range");
    std::vector<double> dist(n, kUnreachable);

    if (!g.weighted()) {
        std::queue<NodeId> queue;
        dist[source] = 0.0;
        queue.push(source);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop();
            for (const NodeId w : g.neighbors(u)) {
                if (dist[w] == kUnreachable) {
                    dist[w] = dist[u] + 1.0;
                    queue.push(w);
                }
            }
        }
        return dist;
    }

    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        const auto adj = g.neighbors(u);
        const auto weights = g.neighbor_weights(u);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            const double candidate = d + weights[i];
            if (candidate < dist[adj[i]]) {
                dist[adj[i]] = candidate;
                heap.emplace(candidate, adj[i]);
            }
        }
    }
    return dist;
}

double pairwise_distance(const Graph& g, NodeId u, NodeId v) {
    const std::size_t n = g.node_count();
    if (u >= n || v >= n) throw std::invalid_argument("node out of range");
    if (u == v) return 0.0;

    if (!g.weighted()) {
        std::vector<double> dist(n, kUnreachable);
        std::queue<NodeId> queue;
        dist[u] = 0.0;
        queue.push(u);
        while (!queue.empty()) {
            const NodeId x = queue.front();
            queue.pop();
            for (const NodeId w : g.neighbors(x)) {
                if (dist[w] == kUnreachable) {
                    dist[w] = dist[x] + 1.0;
                    if (w == v) return dist[w];
                    queue.push(w);
                }
            }
        }
        return kUnreachable;
    }

    std::vector<double> dist(n, kUnreachable);
    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[u] = 0.0;
    heap.emplace(0.0, u);
    while (!heap.empty()) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (d > dist[x]) continue;
        if (x == v) return d;
        const auto adj = g.neighbors(x);
        const auto weights = g.neighbor_weights(x);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            const double candidate = d + weights[i];
            if (candidate < dist[adj[i]]) {
                dist[adj[i]] = candidate;
                heap.emplace(candidate, adj[i]);
            }
        }
    }
    return kUnreachable;
}

DistanceTable all_pairs_shortest_paths(const Graph& g, std::span<const NodeId> sources,
                                       unsigned threads) {
    if (g.node_count() == 0) throw std::invalid_argument("empty graph");

    DistanceTable table;
    if (sources.empty()) {
        table.sources.resize(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) table.sources[i] = static_cast<NodeId>(i);
    } else {
        table.sources.assign(sources.begin(), sources.end());
    }
    table.columns = g.node_count();
    table.values.resize(table.sources.size() * table.columns);

    const auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto row = shortest_paths_from(g, table.sources[i]);
            std::copy(row.begin(), row.end(), table.values.begin() + i * table.columns);
        }
    };

    const std::size_t rows = table.sources.size();
    if (threads <= 1 || rows < 2) {
        run(0, rows);
        return table;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(rows));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(rows, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run, begin, end);
    }
    for (auto& th : pool) th.join();
    return table;
}

}  // namespace path2vec
