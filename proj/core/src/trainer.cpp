#include "path2vec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace path2vec {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

double dot_spans(std::span<const double> a, std::span<const double> b) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    const std::size_t n = a.size();
    for (; i + 4 <= n; i += 4) {
        acc0 += a[i] * b[i];
        acc1 += a[i + 1] * b[i + 1];
        acc2 += a[i + 2] * b[i + 2];
        acc3 += a[i + 3] * b[i + 3];
    }
    double acc = (acc0 + acc1) + (acc2 + acc3);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

void TrainingConfig::validate(std::size_t record_count) const {
    if (dim == 0) throw std::invalid_argument("dim must be >= 1");
    if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (max_epochs == 0) throw std::invalid_argument("max_epochs must be >= 1");
    if (patience == 0) throw std::invalid_argument("patience must be >= 1");
    if (validation_fraction < 0.0 || validation_fraction > 0.5) {
        throw std::invalid_argument("validation_fraction must be in [0, 0.5]");
    }
    if (validation_fraction > 0.0 &&
        validation_fraction * static_cast<double>(record_count) < 1.0) {
        throw std::invalid_argument(
            "validation_fraction too small: needs at least one held-out record");
    }
}

double EmbeddingMatrix::dot(NodeId a, NodeId b) const { return dot_spans(row(a), row(b)); }

EmbeddingMatrix init_embeddings(std::vector<std::string> node_labels, std::uint32_t dim,
                                std::uint64_t seed) {
    if (node_labels.empty()) throw std::invalid_argument("node count must be >= 1");
    if (dim == 0) throw std::invalid_argument("dim must be >= 1");
    EmbeddingMatrix e;
    e.node_labels = std::move(node_labels);
    e.dim = dim;
    e.values.resize(e.node_labels.size() * static_cast<std::size_t>(dim));
    const double bound = 0.5 / static_cast<double>(dim);
    Rng rng(derive_seed(seed, 0));
    for (auto& x : e.values) x = rng.range(-bound, bound);
    return e;
}

TrainingBatch make_batch(const Graph& g, std::span<const SimilarityRecord> positives,
                         std::uint32_t negatives_per_positive, Rng& rng) {
    const std::size_t n = g.node_count();
    if (negatives_per_positive > 0 && n < 3) {
        throw std::runtime_error("negative sampling needs at least 3 nodes");
    }
    TrainingBatch batch;
    batch.positives.reserve(positives.size());
    batch.negatives.reserve(positives.size() * negatives_per_positive);

    const auto sample_neighbor = [&](NodeId x) -> NodeId {
        const auto adj = g.neighbors(x);
        if (adj.empty()) return x;  // isolated node: fall back to itself
        return adj[static_cast<std::size_t>(rng.below(adj.size()))];
    };

    for (const auto& r : positives) {
        TrainingBatch::Positive pos;
        pos.u = r.u;
        pos.v = r.v;
        pos.s = r.s;
        pos.u_adjacent = sample_neighbor(r.u);
        pos.v_adjacent = sample_neighbor(r.v);
        batch.positives.push_back(pos);
        for (std::uint32_t t = 0; t < negatives_per_positive; ++t) {
            const NodeId anchor = (t % 2 == 0) ? r.u : r.v;
            NodeId partner;
            do {
                partner = static_cast<NodeId>(rng.below(n));
            } while (partner == r.u || partner == r.v);
            batch.negatives.push_back({anchor, partner});
        }
    }
    return batch;
}

namespace {

// Shared accumulation for batch_loss / batch_gradient / the training loop.
// Gradient rows are indexed in first-touch order so accumulation is
// deterministic.
struct GradientAccumulator {
    std::uint32_t dim;
    std::unordered_map<NodeId, std::uint32_t> slot;
    std::vector<NodeId> rows;
    std::vector<double> values;

    explicit GradientAccumulator(std::uint32_t d) : dim(d) {}

    std::span<double> row(NodeId id) {
        const auto [it, inserted] = slot.emplace(id, static_cast<std::uint32_t>(rows.size()));
        if (inserted) {
            rows.push_back(id);
            values.resize(values.size() + dim, 0.0);
        }
        return {values.data() + static_cast<std::size_t>(it->second) * dim, dim};
    }

    void axpy(NodeId id, double scale, std::span<const double> x) {
        auto r = row(id);
        for (std::uint32_t i = 0; i < dim; ++i) r[i] += scale * x[i];
    }
};

double accumulate_batch(const TrainingBatch& batch, const EmbeddingMatrix& e, double alpha,
                        GradientAccumulator* grad) {
    double loss = 0.0;
    for (const auto& p : batch.positives) {
        const auto vu = e.row(p.u);
        const auto vv = e.row(p.v);
        const double residual = dot_spans(vu, vv) - p.s;
        loss += residual * residual;
        loss -= alpha * (dot_spans(vu, e.row(p.u_adjacent)) + dot_spans(vv, e.row(p.v_adjacent)));
        if (grad != nullptr) {
            grad->axpy(p.u, 2.0 * residual, vv);
            grad->axpy(p.v, 2.0 * residual, vu);
            if (alpha != 0.0) {
                grad->axpy(p.u, -alpha, e.row(p.u_adjacent));
                grad->axpy(p.v, -alpha, e.row(p.v_adjacent));
                grad->axpy(p.u_adjacent, -alpha, vu);
                grad->axpy(p.v_adjacent, -alpha, vv);
            }
        }
    }
    for (const auto& neg : batch.negatives) {
        const auto vu = e.row(neg.u);
        const auto vx = e.row(neg.v);
        const double residual = dot_spans(vu, vx);
        loss += residual * residual;
        if (grad != nullptr) {
            grad->axpy(neg.u, 2.0 * residual, vx);
            grad->axpy(neg.v, 2.0 * residual, vu);
        }
    }
    return loss;
}

}  // namespace

double batch_loss(const TrainingBatch& b, const EmbeddingMatrix& e, double alpha) {
    return accumulate_batch(b, e, alpha, nullptr);
}

BatchGradient batch_gradient(const TrainingBatch& b, const EmbeddingMatrix& e, double alpha) {
    GradientAccumulator acc(e.dim);
    accumulate_batch(b, e, alpha, &acc);
    BatchGradient grad;
    grad.dim = e.dim;
    grad.rows = std::move(acc.rows);
    grad.values = std::move(acc.values);
    return grad;
}

namespace {

// Adam state with lazily materialized per-row moments: a row's moments decay
// only on steps where it receives gradient, which keeps a batch update
// O(touched rows) instead of O(|V|).
struct AdamState {
    double learning_rate;
    std::uint64_t step = 0;
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;
    std::vector<double> m;
    std::vector<double> v;

    AdamState(std::size_t parameters, double lr)
        : learning_rate(lr), m(parameters, 0.0), v(parameters, 0.0) {}

    void apply(EmbeddingMatrix& e, const GradientAccumulator& grad) {
        ++step;
        beta1_pow *= kBeta1;
        beta2_pow *= kBeta2;
        const double m_correction = 1.0 / (1.0 - beta1_pow);
        const double v_correction = 1.0 / (1.0 - beta2_pow);
        const std::uint32_t dim = grad.dim;
        for (std::size_t i = 0; i < grad.rows.size(); ++i) {
            const std::size_t base = static_cast<std::size_t>(grad.rows[i]) * dim;
            const double* g = grad.values.data() + static_cast<std::size_t>(i) * dim;
            for (std::uint32_t j = 0; j < dim; ++j) {
                const double gj = g[j];
                m[base + j] = kBeta1 * m[base + j] + (1.0 - kBeta1) * gj;
                v[base + j] = kBeta2 * v[base + j] + (1.0 - kBeta2) * gj * gj;
                const double m_hat = m[base + j] * m_correction;
                const double v_hat = v[base + j] * v_correction;
                e.values[base + j] -= learning_rate * m_hat / (std::sqrt(v_hat) + kEpsilon);
            }
        }
    }
};

double validation_mse(const EmbeddingMatrix& e, std::span<const SimilarityRecord> records) {
    double total = 0.0;
    for (const auto& r : records) {
        const double residual = e.dot(r.u, r.v) - r.s;
        total += residual * residual;
    }
    return total / static_cast<double>(records.size());
}

void check_finite(const EmbeddingMatrix& e, std::uint32_t epoch) {
    for (const double x : e.values) {
        if (!std::isfinite(x)) {
            throw std::runtime_error("non-finite parameter after epoch " + std::to_string(epoch));
        }
    }
}

// Parallel gradient accumulation: each worker accumulates a private gradient
// over its slice, partials are merged in worker order. Values may differ
// between thread counts (floating-point merge order), never between runs with
// the same count.
double accumulate_batch_parallel(const TrainingBatch& batch, const EmbeddingMatrix& e,
                                 double alpha, GradientAccumulator& grad, unsigned threads) {
    const std::size_t pos_count = batch.positives.size();
    const unsigned workers =
        std::max(1u, std::min(threads, static_cast<unsigned>(std::max<std::size_t>(pos_count, 1))));
    std::vector<TrainingBatch> slices(workers);
    const std::size_t chunk = (pos_count + workers - 1) / workers;
    const std::uint32_t per_positive =
        pos_count == 0 ? 0 : static_cast<std::uint32_t>(batch.negatives.size() / pos_count);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(pos_count, w * chunk);
        const std::size_t end = std::min(pos_count, begin + chunk);
        slices[w].positives.assign(batch.positives.begin() + begin, batch.positives.begin() + end);
        slices[w].negatives.assign(batch.negatives.begin() + begin * per_positive,
                                   batch.negatives.begin() + end * per_positive);
    }
    std::vector<GradientAccumulator> partials;
    partials.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) partials.emplace_back(e.dim);
    std::vector<double> losses(workers, 0.0);

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] { losses[w] = accumulate_batch(slices[w], e, alpha, &partials[w]); });
    }
    for (auto& th : pool) th.join();

    double loss = 0.0;
    for (unsigned w = 0; w < workers; ++w) {
        loss += losses[w];
        const auto& part = partials[w];
        for (std::size_t i = 0; i < part.rows.size(); ++i) {
            auto dst = grad.row(part.rows[i]);
            const double* src = part.values.data() + static_cast<std::size_t>(i) * part.dim;
            for (std::uint32_t j = 0; j < part.dim; ++j) dst[j] += src[j];
        }
    }
    return loss;
}

}  // namespace

TrainResult train(const Graph& g, const SimilarityDataset& data, const TrainingConfig& cfg,
                  const ProgressSink& progress) {
    if (data.records.empty()) throw std::runtime_error("empty dataset");
    if (data.node_labels != g.labels()) {
        throw std::runtime_error("dataset labels do not match graph labels");
    }
    cfg.validate(data.records.size());
    if (cfg.negatives > 0 && g.node_count() < 3) {
        throw std::runtime_error("negative sampling needs at least 3 nodes");
    }

    EmbeddingMatrix embeddings = init_embeddings(g.labels(), cfg.dim, cfg.seed);
    Rng rng(derive_seed(cfg.seed, 1));

    // Fixed, seeded validation split.
    std::vector<std::size_t> order(data.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t val_count =
        cfg.validation_fraction > 0.0
            ? static_cast<std::size_t>(cfg.validation_fraction *
                                       static_cast<double>(data.records.size()))
            : 0;
    const bool early_stopping = val_count > 0;

    TrainResult result;
    result.validation.reserve(val_count);
    std::vector<SimilarityRecord> training;
    training.reserve(data.records.size() - val_count);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& record = data.records[order[i]];
        if (i < val_count) {
            result.validation.push_back(record);
        } else {
            training.push_back(record);
        }
    }
    if (training.empty()) throw std::runtime_error("no training records left after split");

    AdamState adam(embeddings.values.size(), cfg.learning_rate);
    std::vector<double> best_values;
    double best_mse = std::numeric_limits<double>::infinity();
    std::uint32_t best_epoch = 0;
    std::uint32_t stalled = 0;

    for (std::uint32_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        rng.shuffle(training);
        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < training.size(); begin += cfg.batch_size) {
            const std::size_t end = std::min(training.size(), begin + cfg.batch_size);
            const auto batch = make_batch(
                g, std::span<const SimilarityRecord>(training.data() + begin, end - begin),
                cfg.negatives, rng);
            GradientAccumulator grad(cfg.dim);
            if (cfg.threads <= 1) {
                epoch_loss += accumulate_batch(batch, embeddings, cfg.alpha, &grad);
            } else {
                epoch_loss +=
                    accumulate_batch_parallel(batch, embeddings, cfg.alpha, grad, cfg.threads);
            }
            adam.apply(embeddings, grad);
        }
        check_finite(embeddings, epoch);
        result.epochs_run = epoch;

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss / static_cast<double>(training.size());
        stats.validation_mse = early_stopping
                                   ? validation_mse(embeddings, result.validation)
                                   : std::numeric_limits<double>::quiet_NaN();
        if (progress) progress(stats);

        if (early_stopping) {
            if (stats.validation_mse < best_mse) {
                best_mse = stats.validation_mse;
                best_epoch = epoch;
                best_values = embeddings.values;
                stalled = 0;
            } else if (++stalled >= cfg.patience) {
                break;
            }
        }
    }

    if (early_stopping) {
        embeddings.values = std::move(best_values);
        result.best_epoch = best_epoch;
        result.best_validation_mse = best_mse;
    } else {
        result.best_epoch = result.epochs_run;
        result.best_validation_mse = std::numeric_limits<double>::quiet_NaN();
    }
    result.embeddings = std::move(embeddings);
    return result;
}

void save_embeddings(const EmbeddingMatrix& e, std::ostream& out) {
    out << e.node_count() << ' ' << e.dim << "\n";
    for (std::size_t v = 0; v < e.node_count(); ++v) {
        out << e.node_labels[v];
        const auto row = e.row(static_cast<NodeId>(v));
        for (const double x : row) out << ' ' << format_short(x);
        out << "\n";
    }
    if (!out) throw std::runtime_error("embeddings write failed");
}

EmbeddingMatrix load_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("embeddings: empty input");
    std::istringstream header(std::string(strip_cr(line)));
    std::size_t count = 0;
    std::uint32_t dim = 0;
    std::string extra;
    if (!(header >> count >> dim) || (header >> extra) || count == 0 || dim == 0) {
        throw std::runtime_error("embeddings: malformed header '" + line + "'");
    }

    EmbeddingMatrix e;
    e.dim = dim;
    e.node_labels.reserve(count);
    e.values.reserve(count * static_cast<std::size_t>(dim));
    std::unordered_set<std::string> seen;

    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        ++rows;
        if (rows > count) throw std::runtime_error("embeddings: more rows than header declares");
        std::size_t pos = 0;
        std::vector<std::string_view> tokens;
        while (pos < text.size()) {
            const std::size_t space = text.find(' ', pos);
            if (space == std::string_view::npos) {
                tokens.push_back(text.substr(pos));
                break;
            }
            if (space > pos) tokens.push_back(text.substr(pos, space - pos));
            pos = space + 1;
        }
        if (tokens.size() != static_cast<std::size_t>(dim) + 1) {
            throw std::runtime_error("embeddings row " + std::to_string(rows) + ": expected " +
                                     std::to_string(dim + 1) + " fields, got " +
                                     std::to_string(tokens.size()));
        }
        std::string label(tokens[0]);
        if (!seen.insert(label).second) {
            throw std::runtime_error("embeddings: duplicate label '" + label + "'");
        }
        e.node_labels.push_back(std::move(label));
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            e.values.push_back(parse_double(tokens[i], "embedding component"));
        }
    }
    if (rows != count) {
        throw std::runtime_error("embeddings: header declares " + std::to_string(count) +
                                 " rows, body has " + std::to_string(rows));
    }
    return e;
}

EmbeddingMatrix load_embeddings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
    return load_embeddings(in);
}

}  // namespace path2vec
