#include "path2vec/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace path2vec {

namespace {

// Fractional ranks (1-based), ties averaged.
std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double average = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = average;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 points");

    const auto rx = fractional_ranks(x);
    const auto ry = fractional_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;  // ranks always average to (n+1)/2

    double covariance = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        covariance += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) throw std::runtime_error("spearman: constant input");
    return covariance / std::sqrt(var_x * var_y);
}

double evaluate_fit(const EmbeddingMatrix& e, std::span<const SimilarityRecord> gold) {
    std::vector<double> predicted(gold.size());
    std::vector<double> target(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        predicted[i] = e.dot(gold[i].u, gold[i].v);
        target[i] = gold[i].s;
    }
    return spearman(predicted, target);
}

std::vector<JudgmentPair> load_judgments(std::istream& in) {
    std::vector<JudgmentPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty() || is_comment(text)) continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
            throw std::runtime_error("judgments line " + std::to_string(line_no) +
                                     ": expected lemmaA<TAB>lemmaB<TAB>score");
        }
        const double score = parse_double(fields[2], "judgment score");
        if (!std::isfinite(score)) {
            throw std::runtime_error("judgments line " + std::to_string(line_no) +
                                     ": non-finite score");
        }
        pairs.push_back({std::string(fields[0]), std::string(fields[1]), score});
    }
    return pairs;
}

SenseInventory load_inventory(std::istream& in, std::span<const std::string> node_labels) {
    const auto index = build_label_index(node_labels);
    SenseInventory inventory;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty() || is_comment(text)) continue;
        const auto fields = split_tabs(text);
        const auto fail = [&](const std::string& what) -> void {
            throw std::runtime_error("inventory line " + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            fail("expected lemma<TAB>label1,label2,...");
        }
        const std::string lemma(fields[0]);
        if (inventory.senses.contains(lemma)) fail("duplicate lemma '" + lemma + "'");
        std::vector<NodeId> ids;
        std::string_view rest = fields[1];
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            const std::string_view label =
                comma == std::string_view::npos ? rest : rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            if (label.empty()) fail("empty sense label");
            const auto it = index.find(label);
            if (it == index.end()) fail("unknown label: '" + std::string(label) + "'");
            if (std::find(ids.begin(), ids.end(), it->second) == ids.end()) {
                ids.push_back(it->second);
            }
        }
        if (ids.empty()) fail("no senses for lemma '" + lemma + "'");
        inventory.senses.emplace(lemma, std::move(ids));
    }
    return inventory;
}

HumanEvalResult evaluate_human(const EmbeddingMatrix& e, std::span<const JudgmentPair> judgments,
                               const SenseInventory& inventory) {
    std::vector<double> model;
    std::vector<double> human;
    HumanEvalResult result;
    for (const auto& pair : judgments) {
        const auto a = inventory.senses.find(pair.lemma_a);
        const auto b = inventory.senses.find(pair.lemma_b);
        if (a == inventory.senses.end() || b == inventory.senses.end()) {
            ++result.pairs_skipped;
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const NodeId sa : a->second) {
            for (const NodeId sb : b->second) {
                best = std::max(best, e.dot(sa, sb));
            }
        }
        model.push_back(best);
        human.push_back(pair.score);
    }
    if (model.size() < 2) {
        throw std::runtime_error("evaluate_human: fewer than 2 usable judgment pairs");
    }
    result.rho = spearman(model, human);
    result.pairs_used = model.size();
    return result;
}

std::vector<std::pair<NodeId, double>> nearest_neighbors(const EmbeddingMatrix& e, NodeId u,
                                                         std::size_t k) {
    const std::size_t n = e.node_count();
    if (u >= n) throw std::invalid_argument("node out of range");
    if (k < 1 || k >= n) throw std::invalid_argument("k must satisfy 1 <= k < node count");

    std::vector<std::pair<NodeId, double>> scored;
    scored.reserve(n - 1);
    for (std::size_t v = 0; v < n; ++v) {
        if (v == u) continue;
        scored.emplace_back(static_cast<NodeId>(v), e.dot(u, static_cast<NodeId>(v)));
    }
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                      [](const auto& a, const auto& b) {
                          if (a.second != b.second) return a.second > b.second;
                          return a.first < b.first;
                      });
    scored.resize(k);
    return scored;
}

void BenchmarkReport::write_tsv(std::ostream& out) const {
    out << "side\trepetition\tnanos\n";
    for (std::size_t i = 0; i < graph_ns.size(); ++i) {
        out << "graph\t" << i << '\t' << graph_ns[i] << "\n";
    }
    for (std::size_t i = 0; i < vector_ns.size(); ++i) {
        out << "vector\t" << i << '\t' << vector_ns[i] << "\n";
    }
}

std::string BenchmarkReport::summary() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "graph median %.3f ms, vector median %.3f ms, speedup %.1fx over %zu targets",
                  static_cast<double>(graph_median_ns) / 1e6,
                  static_cast<double>(vector_median_ns) / 1e6, speedup, graph_targets);
    return buf;
}

namespace {

std::int64_t median_ns(std::vector<std::int64_t> samples) {
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

}  // namespace

BenchmarkReport benchmark_one_vs_all(const Graph& g, const EmbeddingMatrix& e, Metric metric,
                                     NodeId source, std::size_t repetitions) {
    using Clock = std::chrono::steady_clock;
    const std::size_t n = g.node_count();
    if (source >= n) throw std::invalid_argument("source node out of range");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (e.node_labels != g.labels()) {
        throw std::runtime_error("embeddings labels do not match graph labels");
    }

    // Taxonomy depths are precomputed once, outside the timed region, as any
    // caller doing repeated pairwise queries would hold them.
    const MetricEvaluator evaluator(g, metric);

    BenchmarkReport report;
    const auto graph_pass = [&]() {
        double checksum = 0.0;
        std::size_t covered = 0;
        for (std::size_t v = 0; v < n; ++v) {
            checksum += evaluator.pair(source, static_cast<NodeId>(v));
            ++covered;
        }
        report.graph_checksum = checksum;
        report.graph_targets = covered;
    };
    const auto vector_pass = [&]() {
        double checksum = 0.0;
        std::size_t covered = 0;
        for (std::size_t v = 0; v < n; ++v) {
            checksum += e.dot(source, static_cast<NodeId>(v));
            ++covered;
        }
        report.vector_checksum = checksum;
        report.vector_targets = covered;
    };

    graph_pass();  // warm-up, discarded
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto start = Clock::now();
        graph_pass();
        report.graph_ns.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
    }
    vector_pass();  // warm-up, discarded
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto start = Clock::now();
        vector_pass();
        report.vector_ns.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
    }

    report.graph_median_ns = median_ns(report.graph_ns);
    report.vector_median_ns = median_ns(report.vector_ns);
    report.speedup = static_cast<double>(report.graph_median_ns) /
                     static_cast<double>(std::max<std::int64_t>(1, report.vector_median_ns));
    return report;
}

}  // namespace path2vec
