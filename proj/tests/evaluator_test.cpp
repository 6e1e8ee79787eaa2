#include <doctest.h>

#include <cmath>
#include <sstream>

#include "path2vec/evaluator.hpp"
#include "test_util.hpp"

using namespace path2vec;
using namespace testutil;

namespace {

std::vector<std::string> labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("n" + std::to_string(i));
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("evaluator");

TEST_CASE("spearman reference values") {
    CHECK(spearman(std::vector{1.0, 2.0, 3.0}, std::vector{10.0, 20.0, 30.0}) == 1.0);
    CHECK(spearman(std::vector{1.0, 2.0, 3.0}, std::vector{3.0, 2.0, 1.0}) == -1.0);
    CHECK(spearman(std::vector{1.0, 2.0, 3.0, 4.0}, std::vector{2.0, 1.0, 4.0, 3.0}) == 0.6);
}

TEST_CASE("spearman handles ties with average ranks") {
    // x = [1, 1, 2], y = [5, 5, 9]: tied pair in both -> rho 1 exactly.
    CHECK(spearman(std::vector{1.0, 1.0, 2.0}, std::vector{5.0, 5.0, 9.0}) == 1.0);
}

TEST_CASE("spearman errors") {
    CHECK_THROWS_AS(spearman(std::vector{1.0, 2.0}, std::vector{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(spearman(std::vector{1.0}, std::vector{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(spearman(std::vector{2.0, 2.0, 2.0}, std::vector{1.0, 2.0, 3.0}),
                    std::runtime_error);
}

TEST_CASE("spearman properties: self, reversal, monotone invariance") {
    Rng rng(40);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng.below(40);
        std::vector<double> x(n), y(n), neg(n), fx(n), gy(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.range(-10.0, 10.0);
            y[i] = rng.range(-10.0, 10.0);
            neg[i] = -x[i];
            fx[i] = std::exp(x[i]);            // strictly increasing
            gy[i] = y[i] * y[i] * y[i] + 2.0 * y[i];  // strictly increasing
        }
        CHECK(spearman(x, x) == 1.0);
        CHECK(spearman(x, neg) == -1.0);
        const double rho = spearman(x, y);
        CHECK(rho == spearman(fx, y));
        CHECK(rho == spearman(x, gy));
        CHECK(rho == spearman(fx, gy));
        CHECK(rho >= -1.0);
        CHECK(rho <= 1.0);
    }
}

TEST_CASE("evaluate_fit is 1.0 when gold is the model's own scores") {
    const auto e = init_embeddings(labels(20), 8, 3);
    std::vector<SimilarityRecord> gold;
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const auto u = static_cast<NodeId>(rng.below(20));
        NodeId v;
        do { v = static_cast<NodeId>(rng.below(20)); } while (v == u);
        gold.push_back({u, v, e.dot(u, v)});
    }
    CHECK(evaluate_fit(e, gold) == 1.0);
}

TEST_CASE("random embeddings are uncorrelated with random gold") {
    const auto e = init_embeddings(labels(200), 16, 9);
    Rng rng(10);
    std::vector<SimilarityRecord> gold;
    for (int i = 0; i < 1000; ++i) {
        const auto u = static_cast<NodeId>(rng.below(200));
        NodeId v;
        do { v = static_cast<NodeId>(rng.below(200)); } while (v == u);
        gold.push_back({u, v, rng.range(0.01, 1.0)});
    }
    CHECK(std::fabs(evaluate_fit(e, gold)) < 0.1);
}

TEST_CASE("evaluate_human with singleton inventories equals evaluate_fit") {
    const auto e = init_embeddings(labels(6), 4, 1);
    SenseInventory inv;
    for (std::size_t i = 0; i < 6; ++i) {
        inv.senses["w" + std::to_string(i)] = {static_cast<NodeId>(i)};
    }
    std::vector<JudgmentPair> judgments{{"w0", "w1", 3.0}, {"w2", "w3", 1.0}, {"w4", "w5", 2.0},
                                        {"w0", "w5", 0.5}};
    std::vector<SimilarityRecord> gold{{0, 1, 3.0}, {2, 3, 1.0}, {4, 5, 2.0}, {0, 5, 0.5}};
    const auto result = evaluate_human(e, judgments, inv);
    CHECK(result.rho == evaluate_fit(e, gold));
    CHECK(result.pairs_used == 4);
    CHECK(result.pairs_skipped == 0);
}

TEST_CASE("evaluate_human takes the max-dot sense pair") {
    // w0 has two senses (0, 1); partner sense 2. Make dot(1,2) > dot(0,2).
    EmbeddingMatrix e;
    e.node_labels = labels(3);
    e.dim = 2;
    e.values = {1.0, 0.0,   // node 0
                0.0, 2.0,   // node 1
                0.0, 1.0};  // node 2
    SenseInventory inv;
    inv.senses["a"] = {0, 1};
    inv.senses["b"] = {2};
    inv.senses["c"] = {0};
    std::vector<JudgmentPair> judgments{{"a", "b", 5.0}, {"c", "b", 1.0}};
    const auto result = evaluate_human(e, judgments, inv);
    // model scores: max(dot(0,2), dot(1,2)) = 2 for (a,b); dot(0,2) = 0 for (c,b)
    CHECK(result.rho == 1.0);
}

TEST_CASE("evaluate_human skips unknown lemmas and counts them") {
    const auto e = init_embeddings(labels(4), 3, 2);
    SenseInventory inv;
    inv.senses["a"] = {0};
    inv.senses["b"] = {1};
    inv.senses["c"] = {2};
    std::vector<JudgmentPair> judgments{
        {"a", "b", 1.0}, {"a", "zzz", 2.0}, {"b", "c", 3.0}, {"a", "c", 0.5}};
    const auto result = evaluate_human(e, judgments, inv);
    CHECK(result.pairs_used == 3);
    CHECK(result.pairs_skipped == 1);

    std::vector<JudgmentPair> too_few{{"a", "zzz", 2.0}, {"b", "zzz", 1.0}, {"a", "b", 1.0}};
    CHECK_THROWS_AS(evaluate_human(e, too_few, inv), std::runtime_error);
}

TEST_CASE("judgments and inventory file parsing") {
    std::istringstream jin("# comment\nfox\tdog\t7.5\ncat\tmouse\t2\n");
    const auto judgments = load_judgments(jin);
    REQUIRE(judgments.size() == 2);
    CHECK(judgments[0].lemma_a == "fox");
    CHECK(judgments[0].score == 7.5);

    const std::vector<std::string> node_labels{"dog.n.01", "dog.n.02", "cat.n.01"};
    std::istringstream iin("dog\tdog.n.01,dog.n.02,dog.n.01\ncat\tcat.n.01\n");
    const auto inv = load_inventory(iin, node_labels);
    REQUIRE(inv.senses.count("dog") == 1);
    CHECK(inv.senses.at("dog") == std::vector<NodeId>{0, 1});  // deduplicated
    CHECK(inv.senses.at("cat") == std::vector<NodeId>{2});

    std::istringstream bad("dog\tnot_a_label\n");
    CHECK_THROWS_AS(load_inventory(bad, node_labels), std::runtime_error);
    std::istringstream dup("dog\tdog.n.01\ndog\tcat.n.01\n");
    CHECK_THROWS_AS(load_inventory(dup, node_labels), std::runtime_error);
}

TEST_CASE("nearest_neighbors ordering and ties") {
    EmbeddingMatrix e;
    e.node_labels = labels(5);
    e.dim = 2;
    e.values = {1.0, 0.0,   // 0 (query)
                0.0, 1.0,   // 1: dot 0
                1.0, 0.0,   // 2: dot 1 (equals query row)
                0.5, 0.0,   // 3: dot 0.5
                0.0, -1.0}; // 4: dot 0
    const auto top = nearest_neighbors(e, 0, 4);
    REQUIRE(top.size() == 4);
    CHECK(top[0].first == 2);  // identical vector ranks first
    CHECK(top[1].first == 3);
    CHECK(top[2].first == 1);  // tie on 0.0 broken by id
    CHECK(top[3].first == 4);

    // prefix property
    const auto top2 = nearest_neighbors(e, 0, 2);
    CHECK(top2[0] == top[0]);
    CHECK(top2[1] == top[1]);

    CHECK_THROWS_AS(nearest_neighbors(e, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_neighbors(e, 0, 5), std::invalid_argument);
}

TEST_CASE("nearest_neighbors with orthonormal rows ties by id order") {
    EmbeddingMatrix e;
    e.node_labels = labels(4);
    e.dim = 4;
    e.values.assign(16, 0.0);
    for (int i = 0; i < 4; ++i) e.values[i * 4 + i] = 1.0;
    const auto top = nearest_neighbors(e, 1, 3);
    CHECK(top[0].first == 0);
    CHECK(top[1].first == 2);
    CHECK(top[2].first == 3);
    for (const auto& [id, score] : top) CHECK(score == 0.0);
}

TEST_CASE("benchmark report carries raw samples and covers all targets") {
    const Graph g = random_tree(60, 14);
    const auto e = init_embeddings(g.labels(), 8, 1);
    const auto report = benchmark_one_vs_all(g, e, Metric::Shp, 0, 5);
    CHECK(report.graph_ns.size() == 5);
    CHECK(report.vector_ns.size() == 5);
    CHECK(report.graph_targets == g.node_count());
    CHECK(report.vector_targets == g.node_count());
    CHECK(report.speedup > 0.0);
    CHECK(std::isfinite(report.graph_checksum));

    std::ostringstream out;
    report.write_tsv(out);
    std::size_t lines = 0;
    std::string line;
    std::istringstream in(out.str());
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 11);  // header + 2 x 5 samples
    CHECK(report.summary().find("speedup") != std::string::npos);

    CHECK_THROWS_AS(benchmark_one_vs_all(g, e, Metric::Shp, 0, 0), std::invalid_argument);
}

TEST_SUITE_END();
