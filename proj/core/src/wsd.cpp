#include "path2vec/wsd.hpp"

#include <algorithm>
#include <istream>
#include <stdexcept>

namespace path2vec {

std::vector<WsdInstance> load_wsd_instances(std::istream& in, const SenseInventory& inventory,
                                            std::span<const std::string> node_labels) {
    const auto index = build_label_index(node_labels);
    std::vector<WsdInstance> instances;
    WsdInstance current;
    std::string line;
    std::size_t line_no = 0;

    const auto flush = [&]() {
        if (!current.tokens.empty()) {
            instances.push_back(std::move(current));
            current = WsdInstance{};
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) {
            flush();
            continue;
        }
        if (is_comment(text)) continue;
        const auto fields = split_tabs(text);
        const auto fail = [&](const std::string& what) -> void {
            throw std::runtime_error("instances line " + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            fail("expected lemma<TAB>gold_label_or_-");
        }
        WsdToken token;
        token.lemma = std::string(fields[0]);
        if (const auto it = inventory.senses.find(token.lemma); it != inventory.senses.end()) {
            token.candidates = it->second;
        }
        if (fields[1] != "-") {
            const auto it = index.find(fields[1]);
            if (it == index.end()) fail("unknown gold label: '" + std::string(fields[1]) + "'");
            token.gold = it->second;
            if (!token.candidates.empty() &&
                std::find(token.candidates.begin(), token.candidates.end(), *token.gold) ==
                    token.candidates.end()) {
                fail("gold sense of '" + token.lemma + "' is not among its candidates");
            }
        }
        current.tokens.push_back(std::move(token));
    }
    flush();
    return instances;
}

SenseGraph build_sense_graph(const WsdInstance& instance, const SimilarityFn& similarity) {
    SenseGraph sg;
    std::vector<std::size_t> first_node(instance.tokens.size() + 1, 0);
    for (std::size_t t = 0; t < instance.tokens.size(); ++t) {
        first_node[t] = sg.nodes.size();
        for (const NodeId c : instance.tokens[t].candidates) sg.nodes.push_back({t, c});
    }
    first_node[instance.tokens.size()] = sg.nodes.size();
    if (sg.nodes.empty()) throw std::runtime_error("no token has any candidate sense");

    for (std::size_t t1 = 0; t1 < instance.tokens.size(); ++t1) {
        for (std::size_t t2 = t1 + 1; t2 < instance.tokens.size(); ++t2) {
            for (std::size_t a = first_node[t1]; a < first_node[t1 + 1]; ++a) {
                for (std::size_t b = first_node[t2]; b < first_node[t2 + 1]; ++b) {
                    double weight = 0.0;
                    try {
                        weight = similarity(sg.nodes[a].candidate, sg.nodes[b].candidate);
                    } catch (const std::exception& e) {
                        throw std::runtime_error(
                            "similarity backend failed on pair (" +
                            std::to_string(sg.nodes[a].candidate) + ", " +
                            std::to_string(sg.nodes[b].candidate) + "): " + e.what());
                    }
                    sg.edges.push_back({a, b, std::max(0.0, weight)});
                }
            }
        }
    }
    return sg;
}

SenseAssignment disambiguate(const WsdInstance& instance, const SimilarityFn& similarity) {
    const SenseGraph sg = build_sense_graph(instance, similarity);

    std::vector<double> centrality(sg.nodes.size(), 0.0);
    for (const auto& edge : sg.edges) {
        centrality[edge.a] += edge.weight;
        centrality[edge.b] += edge.weight;
    }

    SenseAssignment assignment;
    assignment.tokens.resize(instance.tokens.size());
    std::size_t node_index = 0;
    for (std::size_t t = 0; t < instance.tokens.size(); ++t) {
        const auto& candidates = instance.tokens[t].candidates;
        if (candidates.empty()) continue;
        NodeId best_id = candidates[0];
        double best_score = centrality[node_index];
        for (std::size_t c = 1; c < candidates.size(); ++c) {
            const double score = centrality[node_index + c];
            if (score > best_score || (score == best_score && candidates[c] < best_id)) {
                best_id = candidates[c];
                best_score = score;
            }
        }
        assignment.tokens[t].node = best_id;
        assignment.tokens[t].centrality = best_score;
        node_index += candidates.size();
    }
    return assignment;
}

F1Score score_f1(std::span<const SenseAssignment> assignments,
                 std::span<const WsdInstance> instances) {
    if (assignments.size() != instances.size()) {
        throw std::invalid_argument("score_f1: misaligned assignment/instance lists");
    }
    F1Score score;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& tokens = instances[i].tokens;
        const auto& choices = assignments[i].tokens;
        if (tokens.size() != choices.size()) {
            throw std::invalid_argument("score_f1: misaligned token lists in instance " +
                                        std::to_string(i));
        }
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            if (!tokens[t].gold) continue;
            ++score.gold_tokens;
            if (!choices[t].node) continue;  // counts against recall only
            ++score.attempted;
            if (*choices[t].node == *tokens[t].gold) ++score.correct;
        }
    }
    score.precision = score.attempted > 0
                          ? static_cast<double>(score.correct) / static_cast<double>(score.attempted)
                          : 0.0;
    score.recall = score.gold_tokens > 0
                       ? static_cast<double>(score.correct) / static_cast<double>(score.gold_tokens)
                       : 0.0;
    score.f1 = (score.precision + score.recall) > 0.0
                   ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                   : 0.0;
    return score;
}

}  // namespace path2vec
