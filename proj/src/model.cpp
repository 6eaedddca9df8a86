#include "rx/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "rx/rng.hpp"

namespace rx {

namespace {

constexpr const char* kWeightOrder[] = {
    "conv1.kernel", "conv1.bias", "conv2.kernel", "conv2.bias",
    "lstm1.wx",     "lstm1.wh",   "lstm1.bias",   "lstm2.wx",
    "lstm2.wh",     "lstm2.bias", "head.weight",  "head.bias",
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---- conv / pool kernels ------------------------------------------------

// 3x3 same-pad convolution, channel-last layout, no activation.
void conv3x3(const double* in, int h, int w, int cin, const Tensor& kernel,
             const Tensor& bias, double* out, int cout) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double* o = out + (static_cast<std::size_t>(y) * w + x) * cout;
            for (int co = 0; co < cout; ++co) o[co] = bias[co];
            for (int ky = 0; ky < 3; ++ky) {
                const int iy = y + ky - 1;
                if (iy < 0 || iy >= h) continue;
                for (int kx = 0; kx < 3; ++kx) {
                    const int ix = x + kx - 1;
                    if (ix < 0 || ix >= w) continue;
                    const double* ip =
                        in + (static_cast<std::size_t>(iy) * w + ix) * cin;
                    const double* kp =
                        kernel.data.data() +
                        (static_cast<std::size_t>(ky) * 3 + kx) * cin * cout;
                    for (int ci = 0; ci < cin; ++ci) {
                        const double a = ip[ci];
                        if (a == 0.0) continue;
                        const double* kr = kp + static_cast<std::size_t>(ci) * cout;
                        for (int co = 0; co < cout; ++co) o[co] += a * kr[co];
                    }
                }
            }
        }
    }
}

// Gradients of conv3x3 w.r.t. kernel, bias and (optionally) input.
void conv3x3_backward(const double* in, int h, int w, int cin,
                      const Tensor& kernel, int cout, const double* dout,
                      Tensor& dkernel, Tensor& dbias, double* din) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double* dp = dout + (static_cast<std::size_t>(y) * w + x) * cout;
            for (int co = 0; co < cout; ++co) dbias[co] += dp[co];
            for (int ky = 0; ky < 3; ++ky) {
                const int iy = y + ky - 1;
                if (iy < 0 || iy >= h) continue;
                for (int kx = 0; kx < 3; ++kx) {
                    const int ix = x + kx - 1;
                    if (ix < 0 || ix >= w) continue;
                    const std::size_t in_off = (static_cast<std::size_t>(iy) * w + ix) * cin;
                    const std::size_t k_off =
                        (static_cast<std::size_t>(ky) * 3 + kx) * cin * cout;
                    for (int ci = 0; ci < cin; ++ci) {
                        const double a = in[in_off + ci];
                        double* dkr = dkernel.data.data() + k_off +
                                      static_cast<std::size_t>(ci) * cout;
                        double acc = 0.0;
                        const double* kr = kernel.data.data() + k_off +
                                           static_cast<std::size_t>(ci) * cout;
                        for (int co = 0; co < cout; ++co) {
                            dkr[co] += a * dp[co];
                            acc += kr[co] * dp[co];
                        }
                        if (din) din[in_off + ci] += acc;
                    }
                }
            }
        }
    }
}

struct PoolTrace {
    std::vector<double> out;
    std::vector<int> src;  // flat index into the pre-pool map
};

PoolTrace maxpool2x2(const double* in, int h, int w, int c) {
    const int oh = h / 2;
    const int ow = w / 2;
    PoolTrace r;
    r.out.resize(static_cast<std::size_t>(oh) * ow * c);
    r.src.resize(r.out.size());
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            for (int ch = 0; ch < c; ++ch) {
                double best = -1e300;
                int best_idx = 0;
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        const int idx =
                            ((2 * y + dy) * w + (2 * x + dx)) * c + ch;
                        if (in[idx] > best) {
                            best = in[idx];
                            best_idx = idx;
                        }
                    }
                }
                const std::size_t o = (static_cast<std::size_t>(y) * ow + x) * c + ch;
                r.out[o] = best;
                r.src[o] = best_idx;
            }
        }
    }
    return r;
}

// ---- LSTM ---------------------------------------------------------------

struct LstmTrace {
    // Per timestep, post-nonlinearity gate activations and states.
    std::vector<double> i, f, g, o, c, h, tc;  // each T * units
    int units = 0;
};

// x: T x in_dim (row-major). Returns hidden sequence in trace.h.
LstmTrace lstm_forward(const double* x, int T, int in_dim, const Tensor& wx,
                       const Tensor& wh, const Tensor& bias, int units) {
    LstmTrace tr;
    tr.units = units;
    const std::size_t n = static_cast<std::size_t>(T) * units;
    tr.i.resize(n);
    tr.f.resize(n);
    tr.g.resize(n);
    tr.o.resize(n);
    tr.c.resize(n);
    tr.h.resize(n);
    tr.tc.resize(n);

    std::vector<double> z(4 * static_cast<std::size_t>(units));
    std::vector<double> h_prev(units, 0.0), c_prev(units, 0.0);
    for (int t = 0; t < T; ++t) {
        for (int r = 0; r < 4 * units; ++r) z[r] = bias[r];
        const double* xt = x + static_cast<std::size_t>(t) * in_dim;
        for (int r = 0; r < 4 * units; ++r) {
            const double* row = wx.data.data() + static_cast<std::size_t>(r) * in_dim;
            double acc = 0.0;
            for (int k = 0; k < in_dim; ++k) acc += row[k] * xt[k];
            z[r] += acc;
        }
        for (int r = 0; r < 4 * units; ++r) {
            const double* row = wh.data.data() + static_cast<std::size_t>(r) * units;
            double acc = 0.0;
            for (int k = 0; k < units; ++k) acc += row[k] * h_prev[k];
            z[r] += acc;
        }
        const std::size_t off = static_cast<std::size_t>(t) * units;
        for (int u = 0; u < units; ++u) {
            const double iv = sigmoid(z[u]);
            const double fv = sigmoid(z[units + u]);
            const double gv = std::tanh(z[2 * units + u]);
            const double ov = sigmoid(z[3 * units + u]);
            const double cv = fv * c_prev[u] + iv * gv;
            const double tcv = std::tanh(cv);
            tr.i[off + u] = iv;
            tr.f[off + u] = fv;
            tr.g[off + u] = gv;
            tr.o[off + u] = ov;
            tr.c[off + u] = cv;
            tr.tc[off + u] = tcv;
            tr.h[off + u] = ov * tcv;
        }
        std::copy(tr.h.begin() + off, tr.h.begin() + off + units, h_prev.begin());
        std::copy(tr.c.begin() + off, tr.c.begin() + off + units, c_prev.begin());
    }
    return tr;
}

// Backpropagation through time. dh_seq: T x units upstream gradient.
// dx (T x in_dim) receives the input gradient.
void lstm_backward(const double* x, int T, int in_dim, const Tensor& wx,
                   const Tensor& wh, const LstmTrace& tr,
                   const std::vector<double>& dh_seq, Tensor& dwx, Tensor& dwh,
                   Tensor& dbias, std::vector<double>& dx) {
    const int units = tr.units;
    std::vector<double> dh(units, 0.0), dc(units, 0.0);
    std::vector<double> dz(4 * static_cast<std::size_t>(units));
    for (int t = T - 1; t >= 0; --t) {
        const std::size_t off = static_cast<std::size_t>(t) * units;
        for (int u = 0; u < units; ++u) {
            const double iv = tr.i[off + u];
            const double fv = tr.f[off + u];
            const double gv = tr.g[off + u];
            const double ov = tr.o[off + u];
            const double tcv = tr.tc[off + u];
            const double dh_total = dh[u] + dh_seq[off + u];
            const double dc_total = dc[u] + dh_total * ov * (1.0 - tcv * tcv);
            const double c_prev =
                t > 0 ? tr.c[off - static_cast<std::size_t>(units) + u] : 0.0;
            dz[u] = dc_total * gv * iv * (1.0 - iv);
            dz[units + u] = dc_total * c_prev * fv * (1.0 - fv);
            dz[2 * units + u] = dc_total * iv * (1.0 - gv * gv);
            dz[3 * units + u] = dh_total * tcv * ov * (1.0 - ov);
            dc[u] = dc_total * fv;
        }
        const double* xt = x + static_cast<std::size_t>(t) * in_dim;
        const double* h_prev =
            t > 0 ? tr.h.data() + off - static_cast<std::size_t>(units) : nullptr;
        std::fill(dh.begin(), dh.end(), 0.0);
        double* dxt = dx.data() + static_cast<std::size_t>(t) * in_dim;
        for (int r = 0; r < 4 * units; ++r) {
            const double d = dz[r];
            if (d == 0.0) continue;
            dbias[r] += d;
            double* dwx_row = dwx.data.data() + static_cast<std::size_t>(r) * in_dim;
            const double* wx_row = wx.data.data() + static_cast<std::size_t>(r) * in_dim;
            for (int k = 0; k < in_dim; ++k) {
                dwx_row[k] += d * xt[k];
                dxt[k] += d * wx_row[k];
            }
            double* dwh_row = dwh.data.data() + static_cast<std::size_t>(r) * units;
            const double* wh_row = wh.data.data() + static_cast<std::size_t>(r) * units;
            if (h_prev) {
                for (int k = 0; k < units; ++k) {
                    dwh_row[k] += d * h_prev[k];
                    dh[k] += d * wh_row[k];
                }
            }
        }
    }
}

// ---- full-network forward trace ------------------------------------------

struct ForwardTrace {
    std::vector<double> input;        // h*w
    std::vector<double> conv1_post;   // h*w*f1 (post-ReLU)
    PoolTrace pool1;                  // h/2 * w/2 * f1
    std::vector<double> conv2_post;   // h/2*w/2*f2 (post-ReLU)
    PoolTrace pool2;                  // h/4 * w/4 * f2
    std::vector<double> features;     // T x D sequence
    LstmTrace lstm1, lstm2;
    Logits logits;
};

ForwardTrace run_forward(const Model& model, const NormImage& img) {
    const ModelConfig& cfg = model.config;
    if (img.width != cfg.input_w || img.height != cfg.input_h)
        throw ShapeMismatch("forward: expected " + std::to_string(cfg.input_h) +
                            "x" + std::to_string(cfg.input_w) + " input, got " +
                            std::to_string(img.height) + "x" +
                            std::to_string(img.width));

    const int h = cfg.input_h, w = cfg.input_w;
    const int f1 = cfg.conv_filters[0], f2 = cfg.conv_filters[1];
    const int u1 = cfg.rnn_units[0], u2 = cfg.rnn_units[1];
    const int T = cfg.timesteps();
    const int D = cfg.feature_dim();
    const int C = cfg.num_classes;

    ForwardTrace tr;
    tr.input = img.pixels;

    tr.conv1_post.resize(static_cast<std::size_t>(h) * w * f1);
    conv3x3(tr.input.data(), h, w, 1, model.at("conv1.kernel"),
            model.at("conv1.bias"), tr.conv1_post.data(), f1);
    for (double& v : tr.conv1_post) v = v > 0.0 ? v : 0.0;
    tr.pool1 = maxpool2x2(tr.conv1_post.data(), h, w, f1);

    tr.conv2_post.resize(static_cast<std::size_t>(h / 2) * (w / 2) * f2);
    conv3x3(tr.pool1.out.data(), h / 2, w / 2, f1, model.at("conv2.kernel"),
            model.at("conv2.bias"), tr.conv2_post.data(), f2);
    for (double& v : tr.conv2_post) v = v > 0.0 ? v : 0.0;
    tr.pool2 = maxpool2x2(tr.conv2_post.data(), h / 2, w / 2, f2);

    // Columns become the sequence: feature[t][row*f2 + ch].
    const int h4 = h / 4, w4 = w / 4;
    tr.features.assign(static_cast<std::size_t>(T) * D, 0.0);
    for (int t = 0; t < w4; ++t)
        for (int row = 0; row < h4; ++row)
            for (int ch = 0; ch < f2; ++ch)
                tr.features[static_cast<std::size_t>(t) * D + row * f2 + ch] =
                    tr.pool2.out[(static_cast<std::size_t>(row) * w4 + t) * f2 + ch];

    tr.lstm1 = lstm_forward(tr.features.data(), T, D, model.at("lstm1.wx"),
                            model.at("lstm1.wh"), model.at("lstm1.bias"), u1);
    tr.lstm2 = lstm_forward(tr.lstm1.h.data(), T, u1, model.at("lstm2.wx"),
                            model.at("lstm2.wh"), model.at("lstm2.bias"), u2);

    const Tensor& head_w = model.at("head.weight");
    const Tensor& head_b = model.at("head.bias");
    tr.logits = Logits(T, C);
    for (int t = 0; t < T; ++t) {
        const double* h2 = tr.lstm2.h.data() + static_cast<std::size_t>(t) * u2;
        double maxv = -1e300;
        std::vector<double> z(C);
        for (int k = 0; k < C; ++k) {
            const double* row = head_w.data.data() + static_cast<std::size_t>(k) * u2;
            double acc = head_b[k];
            for (int j = 0; j < u2; ++j) acc += row[j] * h2[j];
            z[k] = acc;
            maxv = std::max(maxv, acc);
        }
        double sum = 0.0;
        for (int k = 0; k < C; ++k) {
            z[k] = std::exp(z[k] - maxv);
            sum += z[k];
        }
        for (int k = 0; k < C; ++k) tr.logits.at(t, k) = z[k] / sum;
    }
    for (double v : tr.logits.probs)
        if (!std::isfinite(v)) throw Error("forward: non-finite logits");
    return tr;
}

}  // namespace

void ModelConfig::validate() const {
    if (input_h < 4 || input_w < 4 || input_h % 4 != 0 || input_w % 4 != 0)
        throw InvalidArgument("model config: input must be a multiple of 4 in both axes");
    if (conv_filters[0] < 1 || conv_filters[1] < 1 || rnn_units[0] < 1 ||
        rnn_units[1] < 1)
        throw InvalidArgument("model config: layer sizes must be >= 1");
    if (num_classes < 2)
        throw InvalidArgument("model config: need at least one symbol plus blank");
}

Tensor& Model::at(const std::string& name) {
    auto it = weights.find(name);
    if (it == weights.end()) throw InvalidArgument("model: no weight " + name);
    return it->second;
}

const Tensor& Model::at(const std::string& name) const {
    auto it = weights.find(name);
    if (it == weights.end()) throw InvalidArgument("model: no weight " + name);
    return it->second;
}

std::map<std::string, std::vector<int>> weight_shapes(const ModelConfig& cfg) {
    const int f1 = cfg.conv_filters[0], f2 = cfg.conv_filters[1];
    const int u1 = cfg.rnn_units[0], u2 = cfg.rnn_units[1];
    const int D = cfg.feature_dim();
    return {
        {"conv1.kernel", {3, 3, 1, f1}},
        {"conv1.bias", {f1}},
        {"conv2.kernel", {3, 3, f1, f2}},
        {"conv2.bias", {f2}},
        {"lstm1.wx", {4 * u1, D}},
        {"lstm1.wh", {4 * u1, u1}},
        {"lstm1.bias", {4 * u1}},
        {"lstm2.wx", {4 * u2, u1}},
        {"lstm2.wh", {4 * u2, u2}},
        {"lstm2.bias", {4 * u2}},
        {"head.weight", {cfg.num_classes, u2}},
        {"head.bias", {cfg.num_classes}},
    };
}

Model init_model(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    Model model;
    model.config = config;
    const auto shapes = weight_shapes(config);
    Rng rng(seed);
    for (const char* name : kWeightOrder) {
        Tensor t(shapes.at(name));
        const std::string n(name);
        if (n.ends_with(".bias")) {
            // Zero biases; LSTM forget gates get 1.0.
            if (n.starts_with("lstm")) {
                const int units = t.shape[0] / 4;
                for (int u = 0; u < units; ++u) t[units + u] = 1.0;
            }
        } else {
            double fan_in, fan_out;
            if (t.shape.size() == 4) {
                fan_in = 9.0 * t.shape[2];
                fan_out = 9.0 * t.shape[3];
            } else {
                fan_in = t.shape[1];
                fan_out = t.shape[0];
            }
            const double limit = std::sqrt(6.0 / (fan_in + fan_out));
            for (double& v : t.data) v = rng.uniform(-limit, limit);
        }
        model.weights.emplace(n, std::move(t));
    }
    return model;
}

Logits forward(const Model& model, const NormImage& img) {
    return run_forward(model, img).logits;
}

BackwardResult backward(const Model& model, const NormImage& img,
                        const std::vector<int>& label) {
    const ModelConfig& cfg = model.config;
    ForwardTrace tr = run_forward(model, img);

    if (!ctc_feasible(label, cfg.timesteps()))
        throw InfeasibleLabel("backward: label needs more than " +
                              std::to_string(cfg.timesteps()) + " timesteps");
    CtcResult ctc = ctc_loss(tr.logits, label);
    if (!ctc.feasible)
        throw InfeasibleLabel("backward: no feasible alignment for label");

    BackwardResult result;
    result.loss = ctc.loss;
    for (const auto& [name, shape] : weight_shapes(cfg))
        result.grads.emplace(name, Tensor(shape));

    const int h = cfg.input_h, w = cfg.input_w;
    const int f1 = cfg.conv_filters[0], f2 = cfg.conv_filters[1];
    const int u1 = cfg.rnn_units[0], u2 = cfg.rnn_units[1];
    const int T = cfg.timesteps();
    const int D = cfg.feature_dim();
    const int C = cfg.num_classes;

    // Softmax backward: dz_j = p_j * (dp_j - sum_k p_k dp_k).
    std::vector<double> dlogit(static_cast<std::size_t>(T) * C);
    for (int t = 0; t < T; ++t) {
        double dot = 0.0;
        for (int k = 0; k < C; ++k)
            dot += tr.logits.at(t, k) *
                   ctc.grad_probs[static_cast<std::size_t>(t) * C + k];
        for (int k = 0; k < C; ++k)
            dlogit[static_cast<std::size_t>(t) * C + k] =
                tr.logits.at(t, k) *
                (ctc.grad_probs[static_cast<std::size_t>(t) * C + k] - dot);
    }

    // Dense head.
    const Tensor& head_w = model.at("head.weight");
    Tensor& d_head_w = result.grads.at("head.weight");
    Tensor& d_head_b = result.grads.at("head.bias");
    std::vector<double> dh2(static_cast<std::size_t>(T) * u2, 0.0);
    for (int t = 0; t < T; ++t) {
        const double* h2 = tr.lstm2.h.data() + static_cast<std::size_t>(t) * u2;
        for (int k = 0; k < C; ++k) {
            const double d = dlogit[static_cast<std::size_t>(t) * C + k];
            if (d == 0.0) continue;
            d_head_b[k] += d;
            double* dw = d_head_w.data.data() + static_cast<std::size_t>(k) * u2;
            const double* wr = head_w.data.data() + static_cast<std::size_t>(k) * u2;
            double* dh = dh2.data() + static_cast<std::size_t>(t) * u2;
            for (int j = 0; j < u2; ++j) {
                dw[j] += d * h2[j];
                dh[j] += d * wr[j];
            }
        }
    }

    // LSTM stack.
    std::vector<double> dh1(static_cast<std::size_t>(T) * u1, 0.0);
    lstm_backward(tr.lstm1.h.data(), T, u1, model.at("lstm2.wx"),
                  model.at("lstm2.wh"), tr.lstm2, dh2,
                  result.grads.at("lstm2.wx"), result.grads.at("lstm2.wh"),
                  result.grads.at("lstm2.bias"), dh1);
    std::vector<double> dfeat(static_cast<std::size_t>(T) * D, 0.0);
    lstm_backward(tr.features.data(), T, D, model.at("lstm1.wx"),
                  model.at("lstm1.wh"), tr.lstm1, dh1,
                  result.grads.at("lstm1.wx"), result.grads.at("lstm1.wh"),
                  result.grads.at("lstm1.bias"), dfeat);

    // Un-flatten sequence gradient onto the pooled grid.
    const int h4 = h / 4, w4 = w / 4;
    std::vector<double> dpool2(static_cast<std::size_t>(h4) * w4 * f2, 0.0);
    for (int t = 0; t < w4; ++t)
        for (int row = 0; row < h4; ++row)
            for (int ch = 0; ch < f2; ++ch)
                dpool2[(static_cast<std::size_t>(row) * w4 + t) * f2 + ch] =
                    dfeat[static_cast<std::size_t>(t) * D + row * f2 + ch];

    // pool2 -> relu2 -> conv2.
    std::vector<double> dconv2(tr.conv2_post.size(), 0.0);
    for (std::size_t i = 0; i < dpool2.size(); ++i)
        dconv2[tr.pool2.src[i]] += dpool2[i];
    for (std::size_t i = 0; i < dconv2.size(); ++i)
        if (tr.conv2_post[i] <= 0.0) dconv2[i] = 0.0;
    std::vector<double> dpool1(tr.pool1.out.size(), 0.0);
    conv3x3_backward(tr.pool1.out.data(), h / 2, w / 2, f1,
                     model.at("conv2.kernel"), f2, dconv2.data(),
                     result.grads.at("conv2.kernel"),
                     result.grads.at("conv2.bias"), dpool1.data());

    // pool1 -> relu1 -> conv1.
    std::vector<double> dconv1(tr.conv1_post.size(), 0.0);
    for (std::size_t i = 0; i < dpool1.size(); ++i)
        dconv1[tr.pool1.src[i]] += dpool1[i];
    for (std::size_t i = 0; i < dconv1.size(); ++i)
        if (tr.conv1_post[i] <= 0.0) dconv1[i] = 0.0;
    conv3x3_backward(tr.input.data(), h, w, 1, model.at("conv1.kernel"), f1,
                     dconv1.data(), result.grads.at("conv1.kernel"),
                     result.grads.at("conv1.bias"), nullptr);

    return result;
}

// ---- RXW1 container -------------------------------------------------------

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw ParseError("model file: truncated");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (in.gcount() != 8) throw ParseError("model file: truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model " + path);
    out.write("RXW1", 4);
    const ModelConfig& c = model.config;
    put_u32(out, static_cast<std::uint32_t>(c.num_classes - 1));  // charset size
    put_u32(out, static_cast<std::uint32_t>(c.input_h));
    put_u32(out, static_cast<std::uint32_t>(c.input_w));
    put_u32(out, static_cast<std::uint32_t>(c.conv_filters[0]));
    put_u32(out, static_cast<std::uint32_t>(c.conv_filters[1]));
    put_u32(out, static_cast<std::uint32_t>(c.rnn_units[0]));
    put_u32(out, static_cast<std::uint32_t>(c.rnn_units[1]));
    put_u32(out, static_cast<std::uint32_t>(c.num_classes));
    put_u32(out, static_cast<std::uint32_t>(model.weights.size()));
    for (const char* name : kWeightOrder) {
        const Tensor& t = model.at(name);
        const std::string n(name);
        put_u32(out, static_cast<std::uint32_t>(n.size()));
        out.write(n.data(), static_cast<std::streamsize>(n.size()));
        put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
        for (int e : t.shape) put_u32(out, static_cast<std::uint32_t>(e));
        for (double v : t.data) put_f64(out, v);
    }
    if (!out) throw IoError("write failed: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "RXW", 3) != 0)
        throw BadMagic("model file: bad magic");
    if (magic[3] != '1')
        throw VersionMismatch(std::string("model file: unsupported version '") +
                              magic[3] + "'");

    Model model;
    const auto charset_size = get_u32(in);
    model.config.input_h = static_cast<int>(get_u32(in));
    model.config.input_w = static_cast<int>(get_u32(in));
    model.config.conv_filters[0] = static_cast<int>(get_u32(in));
    model.config.conv_filters[1] = static_cast<int>(get_u32(in));
    model.config.rnn_units[0] = static_cast<int>(get_u32(in));
    model.config.rnn_units[1] = static_cast<int>(get_u32(in));
    model.config.num_classes = static_cast<int>(get_u32(in));
    if (model.config.num_classes != static_cast<int>(charset_size) + 1)
        throw ShapeMismatch("model file: charset size does not match class count");
    model.config.validate();

    const auto expected = weight_shapes(model.config);
    const auto count = get_u32(in);
    if (count != expected.size())
        throw ShapeMismatch("model file: expected " +
                            std::to_string(expected.size()) + " tensors, found " +
                            std::to_string(count));
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto name_len = get_u32(in);
        if (name_len > 256) throw ParseError("model file: absurd name length");
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (static_cast<std::uint32_t>(in.gcount()) != name_len)
            throw ParseError("model file: truncated");
        auto it = expected.find(name);
        if (it == expected.end())
            throw ShapeMismatch("model file: unexpected tensor " + name);
        const auto rank = get_u32(in);
        std::vector<int> shape;
        for (std::uint32_t r = 0; r < rank; ++r)
            shape.push_back(static_cast<int>(get_u32(in)));
        if (shape != it->second)
            throw ShapeMismatch("model file: tensor " + name +
                                " has a shape inconsistent with the header config");
        Tensor t(shape);
        for (double& v : t.data) v = get_f64(in);
        if (model.weights.count(name))
            throw ParseError("model file: duplicate tensor " + name);
        model.weights.emplace(name, std::move(t));
    }
    if (model.weights.size() != expected.size())
        throw ShapeMismatch("model file: missing tensors");
    return model;
}

}  // namespace rx
