#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "path2vec/dataset.hpp"
#include "path2vec/graph.hpp"
#include "path2vec/rng.hpp"

namespace path2vec {

struct TrainingConfig {
    std::uint32_t dim = 300;
    double alpha = 0.01;            // adjacency regularizer coefficient
    std::uint32_t negatives = 3;    // zero-similarity samples per gold pair
    std::uint32_t batch_size = 100; // gold pairs per batch
    double learning_rate = 0.001;
    std::uint32_t max_epochs = 200;
    std::uint32_t patience = 10;    // epochs without validation improvement
    double validation_fraction = 0.05;  // 0 disables early stopping
    std::uint64_t seed = 1;
    unsigned threads = 1;  // >1 waives bit-reproducibility (see train())

    void validate(std::size_t record_count) const;
};

struct EmbeddingMatrix {
    std::vector<std::string> node_labels;
    std::uint32_t dim = 0;
    std::vector<double> values;  // row-major, node_count x dim

    std::size_t node_count() const { return node_labels.size(); }
    std::span<const double> row(NodeId v) const {
        return {values.data() + static_cast<std::size_t>(v) * dim, dim};
    }
    std::span<double> row(NodeId v) {
        return {values.data() + static_cast<std::size_t>(v) * dim, dim};
    }
    // Fixed four-accumulator summation order: deterministic and vectorizable.
    double dot(NodeId a, NodeId b) const;
};

// Entries i.i.d. uniform in [-0.5/dim, +0.5/dim], filled row-major from the
// seed; identical seeds give identical matrices.
EmbeddingMatrix init_embeddings(std::vector<std::string> node_labels, std::uint32_t dim,
                                std::uint64_t seed);

struct TrainingBatch {
    struct Positive {
        NodeId u, v;
        double s;
        NodeId u_adjacent;  // sampled neighbor of u (u itself when isolated)
        NodeId v_adjacent;
    };
    struct Negative {
        NodeId u, v;  // target similarity 0
    };
    std::vector<Positive> positives;
    std::vector<Negative> negatives;  // negatives_per_positive * positives.size()
};

// Draws one adjacent node per endpoint and `negatives_per_positive` zero
// pairs per gold pair; negative partners are uniform over V excluding the
// pair's own endpoints, anchored alternately at u and v.
TrainingBatch make_batch(const Graph& g, std::span<const SimilarityRecord> positives,
                         std::uint32_t negatives_per_positive, Rng& rng);

// Sum over gold and negative pairs of (v_u . v_v - s)^2, minus
// alpha * (v_u . v_n + v_v . v_m) summed over gold pairs only.
double batch_loss(const TrainingBatch& b, const EmbeddingMatrix& e, double alpha);

// Gradient of batch_loss w.r.t. every touched row, rows in first-touch order.
struct BatchGradient {
    std::uint32_t dim = 0;
    std::vector<NodeId> rows;
    std::vector<double> values;  // rows.size() x dim
};
BatchGradient batch_gradient(const TrainingBatch& b, const EmbeddingMatrix& e, double alpha);

struct EpochStats {
    std::uint32_t epoch = 0;       // 1-based
    double train_loss = 0.0;       // mean batch loss per gold pair, pre-update
    double validation_mse = 0.0;   // NaN when early stopping is disabled
};
using ProgressSink = std::function<void(const EpochStats&)>;

struct TrainResult {
    EmbeddingMatrix embeddings;  // best-validation snapshot (final epoch if disabled)
    std::uint32_t epochs_run = 0;
    std::uint32_t best_epoch = 0;
    double best_validation_mse = 0.0;
    std::vector<SimilarityRecord> validation;  // the held-out records
};

// Adam (beta1 0.9, beta2 0.999, eps 1e-8) over shuffled minibatches with
// fresh negative and adjacency samples every epoch. A seeded fixed fraction
// of records is held out; training stops once its MSE has not improved for
// `patience` epochs, and the best snapshot is returned. Moments advance only
// on steps where a row receives gradient. Single-threaded runs are
// bit-reproducible per seed; threads > 1 fans the gradient accumulation out
// and waives that guarantee (everything else still holds).
TrainResult train(const Graph& g, const SimilarityDataset& data, const TrainingConfig& cfg,
                  const ProgressSink& progress = {});

// word2vec text format: "<count> <dim>\n" then "label v1 .. vd\n" per node,
// 6 significant digits on save; load accepts any parseable precision.
void save_embeddings(const EmbeddingMatrix& e, std::ostream& out);
EmbeddingMatrix load_embeddings(std::istream& in);
EmbeddingMatrix load_embeddings_file(const std::string& path);

}  // namespace path2vec
