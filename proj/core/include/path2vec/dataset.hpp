#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "path2vec/graph.hpp"
#include "path2vec/metrics.hpp"

namespace path2vec {

// One gold training pair. u is the node whose top-k selection produced the
// record; pairs are unordered, each stored once.
struct SimilarityRecord {
    NodeId u = 0;
    NodeId v = 0;
    double s = 0.0;

    friend bool operator==(const SimilarityRecord&, const SimilarityRecord&) = default;
};

struct SimilarityDataset {
    std::vector<SimilarityRecord> records;
    std::vector<std::string> node_labels;
    std::string metric_name;  // shp | lch | wup | custom
};

// For every node u, the k most similar other nodes (ties at the k-th rank go
// to the smaller id), unioned over u with unordered-pair duplicates collapsed
// and the result sorted by (u, v). Deterministic for any thread count.
SimilarityDataset build_dataset(const Graph& g, Metric metric, std::uint32_t k,
                                unsigned threads = 1);

// TSV lines labelU<TAB>labelV<TAB>s, s rendered so the round trip is
// value-exact. A '# metric<TAB>name' header carries the metric tag.
void save_dataset(const SimilarityDataset& d, std::ostream& out);
SimilarityDataset load_dataset(std::istream& in, std::span<const std::string> node_labels);
SimilarityDataset load_dataset_file(const std::string& path, std::span<const std::string> node_labels);

struct PathSample {
    NodeId u = 0;
    NodeId v = 0;
    std::uint32_t length = 0;  // exact hop distance
};

// Exactly per_length uniformly sampled unordered pairs at every hop distance
// 1..max_length, skipping pairs present in `exclude`. Feasibility of every
// stratum is checked up front (the deficient length is reported). Sampling is
// by rejection over random pairs, capped at 1e7 attempts per stratum, with an
// exhaustive-enumeration fallback. Deterministic given the seed.
std::vector<PathSample> stratified_path_sample(const Graph& g, std::uint32_t max_length,
                                               std::size_t per_length, std::uint64_t seed,
                                               const SimilarityDataset* exclude = nullptr);

}  // namespace path2vec
