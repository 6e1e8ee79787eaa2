#include "path2vec/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "path2vec/rng.hpp"

namespace path2vec {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

SimilarityDataset build_dataset(const Graph& g, Metric metric, std::uint32_t k,
                                unsigned threads) {
    const std::size_t n = g.node_count();
    if (k == 0 || k >= n) {
        throw std::invalid_argument("k must satisfy 1 <= k < node count");
    }
    const MetricEvaluator evaluator(g, metric);

    // Per-source top-k lists, computed independently (and in parallel), then
    // merged in source order so the output never depends on thread count.
    std::vector<std::vector<std::pair<NodeId, double>>> top(n);
    std::exception_ptr error;
    std::mutex error_mutex;

    const auto run = [&](std::size_t begin, std::size_t end) {
        try {
            std::vector<std::pair<NodeId, double>> candidates;
            for (std::size_t ui = begin; ui < end; ++ui) {
                const auto u = static_cast<NodeId>(ui);
                const auto sims = evaluator.row(u);
                candidates.clear();
                candidates.reserve(n - 1);
                for (std::size_t v = 0; v < n; ++v) {
                    if (v != ui) candidates.emplace_back(static_cast<NodeId>(v), sims[v]);
                }
                const std::size_t keep = std::min<std::size_t>(k, candidates.size());
                std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(),
                                  [](const auto& a, const auto& b) {
                                      if (a.second != b.second) return a.second > b.second;
                                      return a.first < b.first;
                                  });
                top[ui].assign(candidates.begin(), candidates.begin() + keep);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    if (threads <= 1) {
        run(0, n);
    } else {
        const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    SimilarityDataset dataset;
    dataset.node_labels = g.labels();
    dataset.metric_name = std::string(metric_name(metric));
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& [v, s] : top[u]) {
            if (seen.insert(pair_key(static_cast<NodeId>(u), v)).second) {
                dataset.records.push_back({static_cast<NodeId>(u), v, s});
            }
        }
    }
    std::sort(dataset.records.begin(), dataset.records.end(),
              [](const SimilarityRecord& a, const SimilarityRecord& b) {
                  if (a.u != b.u) return a.u < b.u;
                  return a.v < b.v;
              });
    return dataset;
}

void save_dataset(const SimilarityDataset& d, std::ostream& out) {
    if (!d.metric_name.empty()) out << "# metric\t" << d.metric_name << "\n";
    for (const auto& r : d.records) {
        out << d.node_labels[r.u] << '\t' << d.node_labels[r.v] << '\t' << format_exact(r.s)
            << "\n";
    }
    if (!out) throw std::runtime_error("dataset write failed");
}

SimilarityDataset load_dataset(std::istream& in, std::span<const std::string> node_labels) {
    SimilarityDataset dataset;
    dataset.node_labels.assign(node_labels.begin(), node_labels.end());
    dataset.metric_name = "custom";

    const auto index = build_label_index(node_labels);
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t line_no = 0;

    const auto fail = [&](const std::string& what) -> void {
        throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        if (is_comment(text)) {
            const auto fields = split_tabs(text);
            if (fields[0] == "# metric" && fields.size() == 2) {
                dataset.metric_name = std::string(fields[1]);
            }
            continue;
        }
        const auto fields = split_tabs(text);
        if (fields.size() != 3) {
            fail("expected 3 tab-separated fields, got " + std::to_string(fields.size()));
        }
        const auto lookup = [&](std::string_view label) -> NodeId {
            const auto it = index.find(label);
            if (it == index.end()) fail("unknown label: '" + std::string(label) + "'");
            return it->second;
        };
        const NodeId u = lookup(fields[0]);
        const NodeId v = lookup(fields[1]);
        if (u == v) fail("self-pair '" + std::string(fields[0]) + "'");
        double s = 0.0;
        try {
            s = parse_double(fields[2], "similarity");
        } catch (const std::runtime_error& e) {
            fail(e.what());
        }
        if (!(s > 0.0)) fail("similarity must be > 0, got " + std::string(fields[2]));
        if (!seen.insert(pair_key(u, v)).second) {
            fail("duplicate pair '" + std::string(fields[0]) + "' / '" + std::string(fields[1]) +
                 "'");
        }
        dataset.records.push_back({u, v, s});
    }
    return dataset;
}

SimilarityDataset load_dataset_file(const std::string& path,
                                    std::span<const std::string> node_labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return load_dataset(in, node_labels);
}

namespace {

// Hop distances from source, capped at `limit` (nodes farther than limit are
// left unreachable). Plain BFS, one shot per call.
void bounded_hops(const Graph& g, NodeId source, std::uint32_t limit,
                  std::vector<std::uint32_t>& hops) {
    constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
    hops.assign(g.node_count(), kUnset);
    std::queue<NodeId> queue;
    hops[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        if (hops[u] >= limit) continue;
        for (const NodeId w : g.neighbors(u)) {
            if (hops[w] == kUnset) {
                hops[w] = hops[u] + 1;
                queue.push(w);
            }
        }
    }
}

}  // namespace

std::vector<PathSample> stratified_path_sample(const Graph& g, std::uint32_t max_length,
                                               std::size_t per_length, std::uint64_t seed,
                                               const SimilarityDataset* exclude) {
    constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
    const std::size_t n = g.node_count();
    if (max_length == 0) throw std::invalid_argument("max_length must be >= 1");
    if (per_length == 0) throw std::invalid_argument("per_length must be >= 1");
    // Upper bound from the worst-case budget; tightened when the whole pair
    // space is small enough that further rejection cannot be productive.
    const std::uint64_t attempt_cap =
        std::min<std::uint64_t>(10'000'000,
                                std::max<std::uint64_t>(10'000, 100 * n * n));

    // Feasibility first: count unordered pairs per hop distance.
    std::vector<std::uint64_t> stratum_size(max_length + 1, 0);
    {
        std::vector<std::uint32_t> hops;
        for (NodeId u = 0; u < n; ++u) {
            bounded_hops(g, u, max_length, hops);
            for (std::size_t v = u + 1; v < n; ++v) {
                const std::uint32_t h = hops[v];
                if (h != kUnset && h >= 1 && h <= max_length) ++stratum_size[h];
            }
        }
    }
    for (std::uint32_t len = 1; len <= max_length; ++len) {
        if (stratum_size[len] < per_length) {
            throw std::runtime_error("deficient length " + std::to_string(len) + ": only " +
                                     std::to_string(stratum_size[len]) + " pairs exist, need " +
                                     std::to_string(per_length));
        }
    }

    std::unordered_set<std::uint64_t> excluded;
    if (exclude != nullptr) {
        excluded.reserve(exclude->records.size());
        for (const auto& r : exclude->records) excluded.insert(pair_key(r.u, r.v));
    }

    Rng rng(seed);
    std::vector<PathSample> samples;
    samples.reserve(static_cast<std::size_t>(max_length) * per_length);
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::uint32_t> hops;

    for (std::uint32_t len = 1; len <= max_length; ++len) {
        std::size_t need = per_length;
        // Rejection over uniform random pairs.
        for (std::uint64_t attempt = 0; attempt < attempt_cap && need > 0; ++attempt) {
            const auto u = static_cast<NodeId>(rng.below(n));
            const auto v = static_cast<NodeId>(rng.below(n));
            if (u == v) continue;
            bounded_hops(g, u, len, hops);
            if (hops[v] != len) continue;
            const std::uint64_t key = pair_key(u, v);
            if (excluded.contains(key) || !chosen.insert(key).second) continue;
            samples.push_back({std::min(u, v), std::max(u, v), len});
            --need;
        }
        if (need == 0) continue;

        // Cap exhausted: enumerate the whole stratum and sample the remainder.
        std::vector<std::pair<NodeId, NodeId>> pool;
        for (NodeId u = 0; u < n; ++u) {
            bounded_hops(g, u, len, hops);
            for (std::size_t v = u + 1; v < n; ++v) {
                if (hops[v] != len) continue;
                const std::uint64_t key = pair_key(u, static_cast<NodeId>(v));
                if (excluded.contains(key) || chosen.contains(key)) continue;
                pool.emplace_back(u, static_cast<NodeId>(v));
            }
        }
        if (pool.size() < need) {
            throw std::runtime_error("overlap exhausts candidates at length " +
                                     std::to_string(len) + ": " + std::to_string(pool.size()) +
                                     " remain, need " + std::to_string(need));
        }
        for (std::size_t i = 0; i < need; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            chosen.insert(pair_key(pool[i].first, pool[i].second));
            samples.push_back({pool[i].first, pool[i].second, len});
        }
    }
    return samples;
}

}  // namespace path2vec
