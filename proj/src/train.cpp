#include "rx/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "rx/rng.hpp"

namespace rx {

namespace {

struct AdamState {
    std::map<std::string, Tensor> m;
    std::map<std::string, Tensor> v;
    long step = 0;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Sum of per-sample gradients over [begin, end), accumulated in index order.
void accumulate_range(const Model& model, const std::vector<Sample>& samples,
                      const std::vector<std::size_t>& order, std::size_t begin,
                      std::size_t end, std::map<std::string, Tensor>& acc,
                      double& loss_sum, std::exception_ptr& error) {
    try {
        for (std::size_t i = begin; i < end; ++i) {
            const Sample& s = samples[order[i]];
            BackwardResult r = backward(model, s.image, s.label);
            loss_sum += r.loss;
            for (auto& [name, grad] : r.grads) {
                Tensor& dst = acc.at(name);
                for (std::size_t k = 0; k < grad.size(); ++k) dst[k] += grad[k];
            }
        }
    } catch (...) {
        error = std::current_exception();
    }
}

}  // namespace

double sequence_accuracy(const Model& model, const std::vector<Sample>& samples) {
    if (samples.empty()) return 0.0;
    std::size_t hits = 0;
    for (const Sample& s : samples) {
        const Logits logits = forward(model, s.image);
        if (greedy_decode_indices(logits) == s.label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

TrainResult train(Model model, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& test_set, const TrainConfig& cfg) {
    if (train_set.empty()) throw InvalidArgument("train: empty training set");
    if (cfg.epochs < 1) throw InvalidArgument("train: epochs must be >= 1");
    if (cfg.learning_rate < 0) throw InvalidArgument("train: negative learning rate");
    if (cfg.batch_size < 1) throw InvalidArgument("train: batch_size must be >= 1");

    const int n_threads = resolve_threads(cfg.threads);
    const auto shapes = weight_shapes(model.config);

    AdamState adam;
    if (cfg.optimizer == OptimizerKind::Adam) {
        for (const auto& [name, shape] : shapes) {
            adam.m.emplace(name, Tensor(shape));
            adam.v.emplace(name, Tensor(shape));
        }
    }
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

    TrainResult result;
    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Fresh seeded shuffle per epoch.
        Rng shuffle_rng(cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch));
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(
                shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }

        double epoch_loss = 0.0;
        int batch_index = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const std::size_t batch_n = stop - start;

            // Per-worker accumulators, merged in worker order so the
            // floating-point reduction order is fixed.
            const int workers =
                static_cast<int>(std::min<std::size_t>(n_threads, batch_n));
            std::vector<std::map<std::string, Tensor>> partial(workers);
            std::vector<double> partial_loss(workers, 0.0);
            std::vector<std::exception_ptr> errors(workers);
            for (int wkr = 0; wkr < workers; ++wkr)
                for (const auto& [name, shape] : shapes)
                    partial[wkr].emplace(name, Tensor(shape));

            std::vector<std::thread> pool;
            const std::size_t chunk = (batch_n + workers - 1) / workers;
            for (int wkr = 0; wkr < workers; ++wkr) {
                const std::size_t b = start + std::min(batch_n, wkr * chunk);
                const std::size_t e = start + std::min(batch_n, (wkr + 1) * chunk);
                pool.emplace_back(accumulate_range, std::cref(model),
                                  std::cref(train_set), std::cref(order), b, e,
                                  std::ref(partial[wkr]), std::ref(partial_loss[wkr]),
                                  std::ref(errors[wkr]));
            }
            for (auto& th : pool) th.join();
            for (auto& err : errors)
                if (err) std::rethrow_exception(err);

            double batch_loss = 0.0;
            for (int wkr = 0; wkr < workers; ++wkr) batch_loss += partial_loss[wkr];
            for (int wkr = 1; wkr < workers; ++wkr)
                for (auto& [name, grad] : partial[0]) {
                    const Tensor& src = partial[wkr].at(name);
                    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += src[k];
                }
            if (!std::isfinite(batch_loss)) throw NonFiniteLoss(epoch, batch_index);

            const double inv_n = 1.0 / static_cast<double>(batch_n);

            double scale = inv_n;
            if (cfg.clip_norm > 0.0) {
                double sq = 0.0;
                for (const auto& [name, grad] : partial[0])
                    for (std::size_t k = 0; k < grad.size(); ++k) {
                        const double g = grad[k] * inv_n;
                        sq += g * g;
                    }
                const double norm = std::sqrt(sq);
                if (norm > cfg.clip_norm) scale = inv_n * (cfg.clip_norm / norm);
            }
            if (cfg.optimizer == OptimizerKind::Adam) {
                ++adam.step;
                const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.step));
                const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.step));
                for (auto& [name, grad] : partial[0]) {
                    Tensor& w = model.at(name);
                    Tensor& m = adam.m.at(name);
                    Tensor& v = adam.v.at(name);
                    for (std::size_t k = 0; k < grad.size(); ++k) {
                        const double g = grad[k] * scale;
                        if (!std::isfinite(g)) throw NonFiniteLoss(epoch, batch_index);
                        m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * g;
                        v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * g * g;
                        w[k] -= cfg.learning_rate * (m[k] / bc1) /
                                (std::sqrt(v[k] / bc2) + kEps);
                    }
                }
            } else {
                for (auto& [name, grad] : partial[0]) {
                    Tensor& w = model.at(name);
                    for (std::size_t k = 0; k < grad.size(); ++k) {
                        const double g = grad[k] * scale;
                        if (!std::isfinite(g)) throw NonFiniteLoss(epoch, batch_index);
                        w[k] -= cfg.learning_rate * g;
                    }
                }
            }
            epoch_loss += batch_loss;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.mean_ctc_loss = epoch_loss / static_cast<double>(train_set.size());
        stats.test_seq_accuracy = sequence_accuracy(model, test_set);
        result.history.push_back(stats);
    }

    result.model = std::move(model);
    return result;
}

void save_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write history " + path);
    out << "epoch,mean_ctc_loss,test_seq_accuracy\n";
    out.precision(17);
    for (const auto& e : history)
        out << e.epoch << ',' << e.mean_ctc_loss << ',' << e.test_seq_accuracy << '\n';
}

}  // namespace rx
