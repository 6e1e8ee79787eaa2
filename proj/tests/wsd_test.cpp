#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "path2vec/wsd.hpp"
#include "test_util.hpp"

using namespace path2vec;
using namespace testutil;

namespace {

WsdToken token(std::string lemma, std::vector<NodeId> candidates,
               std::optional<NodeId> gold = std::nullopt) {
    WsdToken t;
    t.lemma = std::move(lemma);
    t.candidates = std::move(candidates);
    t.gold = gold;
    return t;
}

// Exhaustive centrality oracle: direct double loop over all candidate pairs
// of different tokens, no SenseGraph involved.
std::vector<std::optional<NodeId>> oracle_choices(const WsdInstance& inst,
                                                  const SimilarityFn& sim) {
    std::map<std::pair<std::size_t, NodeId>, double> centrality;
    for (std::size_t t1 = 0; t1 < inst.tokens.size(); ++t1) {
        for (const NodeId c1 : inst.tokens[t1].candidates) {
            for (std::size_t t2 = 0; t2 < inst.tokens.size(); ++t2) {
                if (t1 == t2) continue;
                for (const NodeId c2 : inst.tokens[t2].candidates) {
                    centrality[{t1, c1}] += std::max(0.0, sim(c1, c2));
                }
            }
        }
    }
    std::vector<std::optional<NodeId>> out(inst.tokens.size());
    for (std::size_t t = 0; t < inst.tokens.size(); ++t) {
        const auto& cands = inst.tokens[t].candidates;
        if (cands.empty()) continue;
        NodeId best = cands[0];
        for (const NodeId c : cands) {
            const double sc = centrality[{t, c}];
            const double bc = centrality[{t, best}];
            if (sc > bc || (sc == bc && c < best)) best = c;
        }
        out[t] = best;
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("wsd");

TEST_CASE("build_sense_graph edge counts") {
    const auto sim = [](NodeId a, NodeId b) { return 0.1 * static_cast<double>(a + b); };

    SUBCASE("two monosemous tokens: one edge") {
        WsdInstance inst{{token("a", {1}), token("b", {2})}};
        const auto sg = build_sense_graph(inst, sim);
        CHECK(sg.nodes.size() == 2);
        REQUIRE(sg.edges.size() == 1);
        CHECK(sg.edges[0].weight == doctest::Approx(0.3));
    }
    SUBCASE("single token: no edges") {
        WsdInstance inst{{token("a", {1, 2, 3})}};
        const auto sg = build_sense_graph(inst, sim);
        CHECK(sg.nodes.size() == 3);
        CHECK(sg.edges.empty());
    }
    SUBCASE("(2,1,1) candidates: 5 edges") {
        WsdInstance inst{{token("a", {1, 2}), token("b", {3}), token("c", {4})}};
        const auto sg = build_sense_graph(inst, sim);
        CHECK(sg.edges.size() == 5);
    }
    SUBCASE("same-token candidates are never connected") {
        WsdInstance inst{{token("a", {1, 2}), token("b", {3})}};
        const auto sg = build_sense_graph(inst, sim);
        for (const auto& e : sg.edges) {
            CHECK(sg.nodes[e.a].token != sg.nodes[e.b].token);
        }
    }
    SUBCASE("negative backend values clamp to zero") {
        WsdInstance inst{{token("a", {1}), token("b", {2})}};
        const auto neg = [](NodeId, NodeId) { return -0.5; };
        const auto sg = build_sense_graph(inst, neg);
        CHECK(sg.edges[0].weight == 0.0);
    }
    SUBCASE("no candidates anywhere is an error") {
        WsdInstance inst{{token("a", {}), token("b", {})}};
        CHECK_THROWS_AS(build_sense_graph(inst, sim), std::runtime_error);
    }
}

TEST_CASE("disambiguate: monosemous tokens get their only sense") {
    const auto sim = [](NodeId, NodeId) { return 1.0; };
    WsdInstance inst{{token("a", {4}), token("b", {9}), token("c", {2})}};
    const auto result = disambiguate(inst, sim);
    CHECK(result.tokens[0].node == 4);
    CHECK(result.tokens[1].node == 9);
    CHECK(result.tokens[2].node == 2);
    CHECK(result.tokens[0].centrality == 2.0);  // two cross-token edges
}

TEST_CASE("disambiguate matches the exhaustive oracle on a toy lexicon") {
    // Graph: two clusters bridged by one edge; ShP pulls candidates toward
    // their own cluster's context.
    const Graph g = make_graph({{"r1", "r2"}, {"r2", "r3"}, {"r3", "r4"},
                                {"m1", "m2"}, {"m2", "m3"}, {"m3", "m4"},
                                {"r4", "m1"}});
    const MetricEvaluator ev(g, Metric::Shp);
    const auto sim = make_graph_backend(ev);

    WsdInstance inst{{
        token("w1", {*g.find("r1"), *g.find("m4")}),   // ambiguous
        token("w2", {*g.find("r2")}),
        token("w3", {*g.find("r3"), *g.find("m1")}),   // ambiguous
        token("w4", {*g.find("r4")}),
    }};
    const auto oracle = oracle_choices(inst, sim);
    const auto got = disambiguate(inst, sim);
    for (std::size_t t = 0; t < inst.tokens.size(); ++t) {
        CHECK(got.tokens[t].node == oracle[t]);
    }
    CHECK(got.tokens[0].node == *g.find("r1"));
    CHECK(got.tokens[2].node == *g.find("r3"));
}

TEST_CASE("disambiguate breaks exact ties by smaller node id") {
    const auto sim = [](NodeId, NodeId) { return 0.25; };
    WsdInstance inst{{token("a", {7, 3, 5}), token("b", {1})}};
    const auto result = disambiguate(inst, sim);
    CHECK(result.tokens[0].node == 3);
}

TEST_CASE("backend scaling by a positive factor leaves assignments unchanged") {
    const Graph g = random_tree(25, 31);
    const MetricEvaluator ev(g, Metric::Shp);
    const auto base = make_graph_backend(ev);
    const auto scaled = [&](NodeId a, NodeId b) { return 2.0 * ev.pair(a, b); };

    Rng rng(2);
    WsdInstance inst;
    for (int t = 0; t < 5; ++t) {
        std::vector<NodeId> cands;
        for (std::size_t c = 0, cc = 1 + rng.below(3); c < cc; ++c) {
            cands.push_back(static_cast<NodeId>(rng.below(g.node_count())));
        }
        inst.tokens.push_back(token("t" + std::to_string(t), cands));
    }
    const auto a = disambiguate(inst, base);
    const auto b = disambiguate(inst, scaled);
    for (std::size_t t = 0; t < inst.tokens.size(); ++t) {
        CHECK(a.tokens[t].node == b.tokens[t].node);
        CHECK(b.tokens[t].centrality == doctest::Approx(2.0 * a.tokens[t].centrality));
    }
}

TEST_CASE("adding a token never decreases existing candidate centralities") {
    const Graph g = random_tree(20, 8);
    const MetricEvaluator ev(g, Metric::Shp);
    const auto sim = make_graph_backend(ev);
    WsdInstance inst{{token("a", {0, 1}), token("b", {2, 3})}};

    const auto centralities = [&](const WsdInstance& instance) {
        const auto sg = build_sense_graph(instance, sim);
        std::vector<double> out(sg.nodes.size(), 0.0);
        for (const auto& e : sg.edges) {
            out[e.a] += e.weight;
            out[e.b] += e.weight;
        }
        return out;
    };
    const auto before = centralities(inst);
    inst.tokens.push_back(token("c", {4, 5}));
    const auto after = centralities(inst);
    // nodes of the original two tokens occupy the same leading slots
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(after[i] >= before[i]);
    }
}

TEST_CASE("score_f1 hand values") {
    SUBCASE("all correct") {
        WsdInstance inst{{token("a", {1}, 1), token("b", {2}, 2)}};
        SenseAssignment asg;
        asg.tokens.resize(2);
        asg.tokens[0].node = 1;
        asg.tokens[1].node = 2;
        const auto s = score_f1(std::vector{asg}, std::vector{inst});
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
    }
    SUBCASE("half of 10 gold tokens correct, all attempted") {
        WsdInstance inst;
        SenseAssignment asg;
        for (NodeId i = 0; i < 10; ++i) {
            inst.tokens.push_back(token("t", {i, 100 + i}, i));
            SenseAssignment::Choice c;
            c.node = (i < 5) ? i : 100 + i;
            asg.tokens.push_back(c);
        }
        const auto s = score_f1(std::vector{asg}, std::vector{inst});
        CHECK(s.f1 == doctest::Approx(0.5));
    }
    SUBCASE("8 attempted of 10 gold, 6 correct") {
        WsdInstance inst;
        SenseAssignment asg;
        for (NodeId i = 0; i < 10; ++i) {
            const bool attempted = i < 8;
            const bool correct = i < 6;
            inst.tokens.push_back(token("t", attempted ? std::vector<NodeId>{i, 100 + i}
                                                       : std::vector<NodeId>{},
                                        i));
            SenseAssignment::Choice c;
            if (attempted) c.node = correct ? i : 100 + i;
            asg.tokens.push_back(c);
        }
        const auto s = score_f1(std::vector{asg}, std::vector{inst});
        CHECK(s.precision == doctest::Approx(0.75));
        CHECK(s.recall == doctest::Approx(0.6));
        CHECK(s.f1 == doctest::Approx(2.0 * 0.45 / 1.35));
    }
    SUBCASE("disjoint assignments give zero") {
        WsdInstance inst{{token("a", {1, 2}, 1)}};
        SenseAssignment asg;
        asg.tokens.resize(1);
        asg.tokens[0].node = 2;
        const auto s = score_f1(std::vector{asg}, std::vector{inst});
        CHECK(s.f1 == 0.0);
    }
    SUBCASE("misaligned lists throw") {
        WsdInstance inst{{token("a", {1}, 1)}};
        CHECK_THROWS_AS(score_f1(std::vector<SenseAssignment>{}, std::vector{inst}),
                        std::invalid_argument);
    }
}

TEST_CASE("wsd instances file parsing") {
    const std::vector<std::string> node_labels{"s1", "s2", "s3", "s4"};
    SenseInventory inv;
    inv.senses["alpha"] = {0, 1};
    inv.senses["beta"] = {2};

    SUBCASE("blocks, comments, missing lemmas, gold resolution") {
        std::istringstream in(
            "# instance 1\nalpha\ts1\nbeta\t-\n\nunknown_lemma\t-\nalpha\ts2\n\n\n");
        const auto instances = load_wsd_instances(in, inv, node_labels);
        REQUIRE(instances.size() == 2);
        REQUIRE(instances[0].tokens.size() == 2);
        CHECK(instances[0].tokens[0].gold == 0);
        CHECK(instances[0].tokens[0].candidates == std::vector<NodeId>{0, 1});
        CHECK_FALSE(instances[0].tokens[1].gold.has_value());
        CHECK(instances[1].tokens[0].candidates.empty());
        CHECK(instances[1].tokens[1].gold == 1);
    }
    SUBCASE("gold missing from candidates is rejected") {
        std::istringstream in("alpha\ts3\n");
        CHECK_THROWS_AS(load_wsd_instances(in, inv, node_labels), std::runtime_error);
    }
    SUBCASE("unknown gold label is rejected") {
        std::istringstream in("alpha\tzzz\n");
        CHECK_THROWS_AS(load_wsd_instances(in, inv, node_labels), std::runtime_error);
    }
    SUBCASE("gold on an uninventoried lemma is allowed") {
        std::istringstream in("missing\ts3\n");
        const auto instances = load_wsd_instances(in, inv, node_labels);
        CHECK(instances[0].tokens[0].gold == 2);
        CHECK(instances[0].tokens[0].candidates.empty());
    }
}

TEST_SUITE_END();
