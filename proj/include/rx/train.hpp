#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rx/corpus.hpp"
#include "rx/error.hpp"
#include "rx/model.hpp"

namespace rx {

struct NonFiniteLoss : Error {
    NonFiniteLoss(int epoch, int batch)
        : Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                std::to_string(batch)),
          epoch(epoch),
          batch(batch) {}
    int epoch;
    int batch;
};

enum class OptimizerKind { Sgd, Adam };

struct TrainConfig {
    int epochs = 50;
    double learning_rate = 1e-3;
    int batch_size = 16;
    std::uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double train_fraction = 0.9;
    // Global-norm gradient clip; 0 disables.
    double clip_norm = 5.0;
    // 0 = one worker per hardware thread (capped at 8). Gradients are
    // always merged in a fixed order, so a given thread count is
    // reproducible bit-for-bit.
    int threads = 0;
};

struct EpochStats {
    int epoch = 0;              // 1-based
    double mean_ctc_loss = 0.0;
    double test_seq_accuracy = 0.0;
};

struct TrainResult {
    Model model;
    std::vector<EpochStats> history;
};

// Epoch-driven minibatch training minimizing CTC loss. Deterministic per
// (seed, data, config, threads). Throws NonFiniteLoss when a batch produces
// a non-finite loss or gradient, InfeasibleLabel for labels that cannot fit.
TrainResult train(Model model, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& test_set, const TrainConfig& cfg);

// Greedy-decode exact-match rate over a sample set.
double sequence_accuracy(const Model& model, const std::vector<Sample>& samples);

void save_history_csv(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace rx
