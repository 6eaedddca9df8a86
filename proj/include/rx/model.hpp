#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rx/ctc.hpp"
#include "rx/error.hpp"
#include "rx/image.hpp"
#include "rx/tensor.hpp"

namespace rx {

struct BadMagic : Error {
    using Error::Error;
};
struct VersionMismatch : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct InfeasibleLabel : Error {
    using Error::Error;
};

// Two conv layers (3x3, same pad, ReLU, 2x2 max-pool each) feeding two
// stacked unidirectional LSTMs, then a per-timestep dense softmax head.
// The width axis becomes the sequence axis after pooling.
struct ModelConfig {
    int input_h = 32;
    int input_w = 128;
    std::array<int, 2> conv_filters = {32, 64};
    std::array<int, 2> rnn_units = {64, 128};
    int num_classes = 0;  // charset size + blank

    int timesteps() const { return input_w / 4; }
    int feature_dim() const { return (input_h / 4) * conv_filters[1]; }
    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

// Weight tensors keyed by a fixed name set:
//   conv1.kernel [3,3,1,f1]      conv1.bias [f1]
//   conv2.kernel [3,3,f1,f2]     conv2.bias [f2]
//   lstm1.wx [4u1,D] lstm1.wh [4u1,u1] lstm1.bias [4u1]
//   lstm2.wx [4u2,u1] lstm2.wh [4u2,u2] lstm2.bias [4u2]
//   head.weight [C,u2]           head.bias [C]
// LSTM gate rows are ordered input, forget, cell, output.
struct Model {
    ModelConfig config;
    std::map<std::string, Tensor> weights;

    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
};

// Glorot-uniform weights, zero biases, forget-gate bias 1.0; deterministic
// per seed.
Model init_model(const ModelConfig& config, std::uint64_t seed);

// Expected shape for every weight name under a config.
std::map<std::string, std::vector<int>> weight_shapes(const ModelConfig& config);

Logits forward(const Model& model, const NormImage& img);

struct BackwardResult {
    double loss = 0.0;
    std::map<std::string, Tensor> grads;
};

// CTC loss plus exact reverse-mode gradients for every weight tensor.
// Throws InfeasibleLabel when the label cannot fit the timestep budget.
BackwardResult backward(const Model& model, const NormImage& img,
                        const std::vector<int>& label);

// "RXW1" container: header with config scalars, then named raw tensors,
// everything little-endian. Round-trips bit-exactly.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace rx
