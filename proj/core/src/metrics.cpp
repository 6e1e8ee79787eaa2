#include "path2vec/metrics.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace path2vec {

Metric parse_metric(std::string_view name) {
    if (name == "shp") return Metric::Shp;
    if (name == "lch") return Metric::Lch;
    if (name == "wup") return Metric::Wup;
    throw std::runtime_error("unknown metric: '" + std::string(name) + "' (expected shp|lch|wup)");
}

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::Shp: return "shp";
        case Metric::Lch: return "lch";
        case Metric::Wup: return "wup";
    }
    return "?";
}

namespace {

[[noreturn]] void throw_unreachable(const Graph& g, NodeId u, NodeId v) {
    throw std::runtime_error("unreachable pair: '" + g.label(u) + "' and '" + g.label(v) + "'");
}

double lch_from_distance(double dist, std::uint32_t max_depth) {
    return -std::log((dist + 1.0) / (2.0 * static_cast<double>(max_depth)));
}

}  // namespace

double shp_similarity(const Graph& g, NodeId u, NodeId v) {
    if (u == v) return 1.0;
    const double dist = pairwise_distance(g, u, v);
    if (dist == kUnreachable) throw_unreachable(g, u, v);
    return 1.0 / dist;
}

double lch_similarity(const Graph& g, const TaxonomyInfo& info, NodeId u, NodeId v) {
    const double dist = pairwise_distance(g, u, v);
    if (dist == kUnreachable) throw_unreachable(g, u, v);
    return lch_from_distance(dist, info.max_depth);
}

double wup_similarity(const Graph& g, const TaxonomyInfo& info, NodeId u, NodeId v) {
    const NodeId lca = deepest_common_ancestor(g, info, u, v);
    return 2.0 * static_cast<double>(info.depth[lca]) /
           (static_cast<double>(info.depth[u]) + static_cast<double>(info.depth[v]));
}

MetricEvaluator::MetricEvaluator(const Graph& g, Metric m) : graph_(g), metric_(m) {
    if (m == Metric::Lch || m == Metric::Wup) {
        taxonomy_ = std::make_unique<TaxonomyInfo>(taxonomy_info(g));
    }
}

double MetricEvaluator::pair(NodeId u, NodeId v) const {
    switch (metric_) {
        case Metric::Shp: return shp_similarity(graph_, u, v);
        case Metric::Lch: return lch_similarity(graph_, *taxonomy_, u, v);
        case Metric::Wup: return wup_similarity(graph_, *taxonomy_, u, v);
    }
    throw std::logic_error("bad metric");
}

std::vector<double> MetricEvaluator::row(NodeId u) const {
    const std::size_t n = graph_.node_count();
    if (u >= n) throw std::invalid_argument("node out of range");
    std::vector<double> sims(n);

    if (metric_ == Metric::Wup) {
        // One upward closure for u, then one per target; distances not needed.
        const TaxonomyInfo& info = *taxonomy_;
        std::vector<char> from_u(n, 0);
        std::vector<char> visited(n, 0);
        std::vector<NodeId> touched;
        {
            std::queue<NodeId> queue;
            from_u[u] = 1;
            queue.push(u);
            while (!queue.empty()) {
                const NodeId y = queue.front();
                queue.pop();
                for (const NodeId p : graph_.neighbors(y)) {
                    if (info.depth[p] + 1 == info.depth[y] && !from_u[p]) {
                        from_u[p] = 1;
                        queue.push(p);
                    }
                }
            }
        }
        for (NodeId v = 0; v < n; ++v) {
            NodeId best = *graph_.root();
            std::uint32_t best_depth = info.depth[best];
            std::queue<NodeId> queue;
            touched.clear();
            visited[v] = 1;
            touched.push_back(v);
            queue.push(v);
            while (!queue.empty()) {
                const NodeId y = queue.front();
                queue.pop();
                if (from_u[y] &&
                    (info.depth[y] > best_depth || (info.depth[y] == best_depth && y < best))) {
                    best = y;
                    best_depth = info.depth[y];
                }
                for (const NodeId p : graph_.neighbors(y)) {
                    if (info.depth[p] + 1 == info.depth[y] && !visited[p]) {
                        visited[p] = 1;
                        touched.push_back(p);
                        queue.push(p);
                    }
                }
            }
            for (const NodeId t : touched) visited[t] = 0;
            sims[v] = 2.0 * static_cast<double>(best_depth) /
                      (static_cast<double>(info.depth[u]) + static_cast<double>(info.depth[v]));
        }
        return sims;
    }

    const auto dist = shortest_paths_from(graph_, u);
    for (NodeId v = 0; v < n; ++v) {
        if (dist[v] == kUnreachable) throw_unreachable(graph_, u, v);
        if (metric_ == Metric::Shp) {
            sims[v] = v == u ? 1.0 : 1.0 / dist[v];
        } else {
            sims[v] = lch_from_distance(dist[v], taxonomy_->max_depth);
        }
    }
    return sims;
}

}  // namespace path2vec
