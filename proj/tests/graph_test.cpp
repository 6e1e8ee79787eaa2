#include <doctest.h>

#include <cmath>
#include <sstream>

#include "path2vec/graph.hpp"
#include "test_util.hpp"

using namespace path2vec;
using namespace testutil;

TEST_SUITE_BEGIN("graph");

TEST_CASE("load_edge_list builds nodes in first-appearance order") {
    std::istringstream in("a\tb\nb\tc\n");
    const Graph g = load_edge_list(in);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.label(0) == "a");
    CHECK(g.label(1) == "b");
    CHECK(g.label(2) == "c");
    const auto adj_b = g.neighbors(*g.find("b"));
    REQUIRE(adj_b.size() == 2);
    CHECK(g.label(adj_b[0]) == "a");
    CHECK(g.label(adj_b[1]) == "c");
    CHECK_FALSE(g.weighted());
    CHECK_FALSE(g.root().has_value());
}

TEST_CASE("load_edge_list rejects empty input") {
    std::istringstream in("");
    CHECK_THROWS_WITH_AS(load_edge_list(in), "empty graph", std::runtime_error);
    std::istringstream comments("# nothing\n\n# here\n");
    CHECK_THROWS_AS(load_edge_list(comments), std::runtime_error);
}

TEST_CASE("load_edge_list parses the 5-node hypernym fragment") {
    std::istringstream in(
        "cup\tcontainer\nvessel\tcontainer\ndrinking_vessel\tvessel\nmug\tdrinking_vessel\n");
    const Graph g = load_edge_list(in);
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 4);
}

TEST_CASE("load_edge_list handles #root directive, comments and weights") {
    std::istringstream in("# a comment\na\tb\t2.5\nb\tc\n#root\tb\n");
    const Graph g = load_edge_list(in);
    CHECK(g.weighted());
    REQUIRE(g.root().has_value());
    CHECK(g.label(*g.root()) == "b");
    const auto a = *g.find("a");
    CHECK(g.neighbor_weights(a)[0] == 2.5);
    const auto c = *g.find("c");
    CHECK(g.neighbor_weights(c)[0] == 1.0);  // unweighted line in a weighted graph
}

TEST_CASE("load_edge_list error cases carry line numbers") {
    SUBCASE("malformed field count") {
        std::istringstream in("a\tb\nx\n");
        CHECK_THROWS_WITH_AS(load_edge_list(in),
                             "edge list line 2: expected 2 or 3 tab-separated fields, got 1",
                             std::runtime_error);
    }
    SUBCASE("self-loop") {
        std::istringstream in("a\ta\n");
        CHECK_THROWS_WITH_AS(load_edge_list(in), "edge list line 1: self-loop at 'a'",
                             std::runtime_error);
    }
    SUBCASE("conflicting duplicate weight") {
        std::istringstream in("a\tb\t1\na\tb\t2\n");
        CHECK_THROWS_AS(load_edge_list(in), std::runtime_error);
    }
    SUBCASE("exact duplicate collapses silently") {
        std::istringstream in("a\tb\nb\ta\n");
        const Graph g = load_edge_list(in);
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("unknown root label") {
        std::istringstream in("a\tb\n#root\tzzz\n");
        CHECK_THROWS_WITH_AS(load_edge_list(in), "unknown root label: 'zzz'", std::runtime_error);
    }
    SUBCASE("bad weight") {
        std::istringstream in("a\tb\tfast\n");
        CHECK_THROWS_AS(load_edge_list(in), std::runtime_error);
    }
    SUBCASE("non-positive weight") {
        std::istringstream in("a\tb\t0\n");
        CHECK_THROWS_AS(load_edge_list(in), std::runtime_error);
    }
}

TEST_CASE("shortest_paths_from on a path graph") {
    const Graph g = make_graph({{"a", "b"}, {"b", "c"}});
    const auto dist = shortest_paths_from(g, 0);
    CHECK(dist == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("shortest_paths_from: cup to mug is 4 in the fragment") {
    const Graph g = mini_wordnet();
    const auto dist = shortest_paths_from(g, *g.find("cup"));
    CHECK(dist[*g.find("mug")] == 4.0);
}

TEST_CASE("unreachable nodes get infinite distance") {
    const Graph g = make_graph({{"a", "b"}, {"x", "y"}});
    const auto dist = shortest_paths_from(g, *g.find("a"));
    CHECK(dist[*g.find("x")] == kUnreachable);
    CHECK(pairwise_distance(g, *g.find("a"), *g.find("y")) == kUnreachable);
}

TEST_CASE("weighted graphs use Dijkstra") {
    // a-b direct weight 5, a-c-b total weight 3.
    GraphBuilder b;
    const auto a = b.add_node("a");
    const auto bb = b.add_node("b");
    const auto c = b.add_node("c");
    b.add_edge(a, bb, 5.0);
    b.add_edge(a, c, 1.0);
    b.add_edge(c, bb, 2.0);
    const Graph g = b.build();
    CHECK(shortest_paths_from(g, a)[bb] == 3.0);
    CHECK(pairwise_distance(g, a, bb) == 3.0);
}

TEST_CASE("all_pairs_shortest_paths on a star") {
    const Graph g = make_graph({{"c", "l1"}, {"c", "l2"}, {"c", "l3"}});
    const auto table = all_pairs_shortest_paths(g);
    const auto id = [&](const char* l) { return *g.find(l); };
    CHECK(table.at(id("l1"), id("l2")) == 2.0);
    CHECK(table.at(id("l2"), id("l3")) == 2.0);
    CHECK(table.at(id("c"), id("l1")) == 1.0);
    CHECK(table.at(id("c"), id("c")) == 0.0);
}

TEST_CASE("all_pairs_shortest_paths equals per-source reference BFS") {
    for (const std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
        const Graph g = random_connected_graph(50, 20, seed);
        const auto table = all_pairs_shortest_paths(g);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            const auto oracle = reference_bfs(g, u);
            for (NodeId v = 0; v < g.node_count(); ++v) {
                CHECK(table.at(u, v) == static_cast<double>(oracle[v]));
            }
        }
    }
}

TEST_CASE("all_pairs_shortest_paths: 3-node path is symmetric with zero diagonal") {
    const Graph g = make_graph({{"a", "b"}, {"b", "c"}});
    const auto table = all_pairs_shortest_paths(g);
    for (NodeId u = 0; u < 3; ++u) {
        CHECK(table.at(u, u) == 0.0);
        for (NodeId v = 0; v < 3; ++v) CHECK(table.at(u, v) == table.at(v, u));
    }
}

TEST_CASE("all_pairs_shortest_paths is identical for any thread count") {
    const Graph g = random_connected_graph(80, 40, 99);
    const auto t1 = all_pairs_shortest_paths(g, {}, 1);
    const auto t4 = all_pairs_shortest_paths(g, {}, 4);
    CHECK(t1.values == t4.values);
    CHECK(t1.sources == t4.sources);
}

TEST_CASE("all_pairs_shortest_paths honors a source subset") {
    const Graph g = random_tree(30, 5);
    const std::vector<NodeId> sources{3, 17, 29};
    const auto table = all_pairs_shortest_paths(g, sources);
    CHECK(table.sources == sources);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto full = shortest_paths_from(g, sources[i]);
        for (NodeId v = 0; v < g.node_count(); ++v) CHECK(table.at(i, v) == full[v]);
    }
}

TEST_CASE("pairwise_distance agrees with full BFS") {
    const Graph g = random_connected_graph(60, 25, 7);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto u = static_cast<NodeId>(rng.below(g.node_count()));
        const auto v = static_cast<NodeId>(rng.below(g.node_count()));
        CHECK(pairwise_distance(g, u, v) == shortest_paths_from(g, u)[v]);
    }
}

TEST_CASE("builder rejects duplicate and bad labels") {
    GraphBuilder b;
    b.add_node("a");
    CHECK_THROWS_AS(b.add_node("a"), std::runtime_error);
    CHECK_THROWS_AS(b.add_node(""), std::runtime_error);
    CHECK_THROWS_AS(b.add_node("has space"), std::runtime_error);
}

TEST_SUITE_END();
