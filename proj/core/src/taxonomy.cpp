#include "path2vec/taxonomy.hpp"

#include <queue>
#include <stdexcept>

namespace path2vec {

TaxonomyInfo taxonomy_info(const Graph& g) {
    if (!g.root()) throw std::runtime_error("graph has no root");
    const std::size_t n = g.node_count();
    const NodeId root = *g.root();

    TaxonomyInfo info;
    info.depth.assign(n, 0);  // 0 = unvisited
    std::queue<NodeId> queue;
    info.depth[root] = 1;
    queue.push(root);
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        for (const NodeId w : g.neighbors(u)) {
            if (info.depth[w] == 0) {
                info.depth[w] = info.depth[u] + 1;
                queue.push(w);
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (info.depth[v] == 0) {
            throw std::runtime_error("node unreachable from root: '" + g.label(static_cast<NodeId>(v)) + "'");
        }
        info.max_depth = std::max(info.max_depth, info.depth[v]);
    }
    return info;
}

namespace {

// Upward closure over parent links (neighbors one layer shallower). Marks
// every ancestor of x, including x itself.
void mark_ancestors(const Graph& g, const TaxonomyInfo& info, NodeId x, std::vector<char>& mark) {
    std::queue<NodeId> queue;
    mark[x] = 1;
    queue.push(x);
    while (!queue.empty()) {
        const NodeId y = queue.front();
        queue.pop();
        for (const NodeId p : g.neighbors(y)) {
            if (info.depth[p] + 1 == info.depth[y] && !mark[p]) {
                mark[p] = 1;
                queue.push(p);
            }
        }
    }
}

}  // namespace

NodeId deepest_common_ancestor(const Graph& g, const TaxonomyInfo& info, NodeId u, NodeId v) {
    const std::size_t n = g.node_count();
    if (u >= n || v >= n) throw std::invalid_argument("node out of range");

    std::vector<char> from_u(n, 0);
    mark_ancestors(g, info, u, from_u);

    // Walk v's ancestors, keeping the deepest one also reachable from u;
    // the root is always common, so `best` starts valid.
    NodeId best = *g.root();
    std::uint32_t best_depth = info.depth[best];
    std::vector<char> from_v(n, 0);
    std::queue<NodeId> queue;
    from_v[v] = 1;
    queue.push(v);
    while (!queue.empty()) {
        const NodeId y = queue.front();
        queue.pop();
        if (from_u[y]) {
            if (info.depth[y] > best_depth || (info.depth[y] == best_depth && y < best)) {
                best = y;
                best_depth = info.depth[y];
            }
        }
        for (const NodeId p : g.neighbors(y)) {
            if (info.depth[p] + 1 == info.depth[y] && !from_v[p]) {
                from_v[p] = 1;
                queue.push(p);
            }
        }
    }
    return best;
}

}  // namespace path2vec
