#pragma once

#include <cstdint>
#include <vector>

#include "path2vec/graph.hpp"

namespace path2vec {

// Per-node depth in a rooted graph, depth(root) = 1, child depth = parent
// depth + 1 taken as the minimum over parents. Depths count hops regardless
// of edge weights.
struct TaxonomyInfo {
    std::vector<std::uint32_t> depth;
    std::uint32_t max_depth = 0;
};

// Requires a declared root from which every node is reachable; the first
// unreachable label is reported otherwise.
TaxonomyInfo taxonomy_info(const Graph& g);

// The deepest node that is an ancestor of both u and v, ties broken by the
// smallest node id. w is an ancestor of x iff a path from x to the root
// decreases depth at every step through w; the root qualifies for every node,
// and every node is an ancestor of itself.
NodeId deepest_common_ancestor(const Graph& g, const TaxonomyInfo& info, NodeId u, NodeId v);

}  // namespace path2vec
