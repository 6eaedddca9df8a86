#include "rx/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "rx/error.hpp"

namespace rx {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) with -inf as the additive identity.
inline double logaddexp(double a, double b) {
    if (a == kLogZero) return b;
    if (b == kLogZero) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

}  // namespace

std::vector<int> collapse(const std::vector<int>& path, int blank) {
    std::vector<int> out;
    int prev = -1;
    for (int c : path) {
        if (c != prev && c != blank) out.push_back(c);
        prev = c;
    }
    return out;
}

bool ctc_feasible(const std::vector<int>& label, int timesteps) {
    std::size_t need = label.size();
    for (std::size_t i = 1; i < label.size(); ++i)
        if (label[i] == label[i - 1]) ++need;
    return need <= static_cast<std::size_t>(timesteps);
}

CtcResult ctc_loss(const Logits& logits, const std::vector<int>& label) {
    const int T = logits.timesteps;
    const int C = logits.num_classes;
    const int blank = C - 1;
    for (int v : label)
        if (v < 0 || v >= blank)
            throw InvalidArgument("ctc_loss: label index out of range");

    CtcResult result;
    result.grad_probs.assign(static_cast<std::size_t>(T) * C, 0.0);
    if (!ctc_feasible(label, T)) {
        result.loss = std::numeric_limits<double>::infinity();
        result.feasible = false;
        return result;
    }

    // Extended label: blanks interleaved around every symbol.
    const int S = 2 * static_cast<int>(label.size()) + 1;
    std::vector<int> ext(S, blank);
    for (std::size_t i = 0; i < label.size(); ++i) ext[2 * i + 1] = label[i];

    auto log_p = [&](int t, int s) { return safe_log(logits.at(t, ext[s])); };

    // Forward: alpha[t][s] includes the emission at t.
    std::vector<double> alpha(static_cast<std::size_t>(T) * S, kLogZero);
    alpha[0] = log_p(0, 0);
    if (S > 1) alpha[1] = log_p(0, 1);
    for (int t = 1; t < T; ++t) {
        for (int s = 0; s < S; ++s) {
            double acc = alpha[static_cast<std::size_t>(t - 1) * S + s];
            if (s >= 1)
                acc = logaddexp(acc, alpha[static_cast<std::size_t>(t - 1) * S + s - 1]);
            if (s >= 2 && ext[s] != blank && ext[s] != ext[s - 2])
                acc = logaddexp(acc, alpha[static_cast<std::size_t>(t - 1) * S + s - 2]);
            alpha[static_cast<std::size_t>(t) * S + s] =
                acc == kLogZero ? kLogZero : acc + log_p(t, s);
        }
    }

    double log_total = alpha[static_cast<std::size_t>(T - 1) * S + S - 1];
    if (S > 1)
        log_total =
            logaddexp(log_total, alpha[static_cast<std::size_t>(T - 1) * S + S - 2]);

    if (log_total == kLogZero) {
        // All consistent paths have zero probability.
        result.loss = std::numeric_limits<double>::infinity();
        result.feasible = false;
        return result;
    }
    result.loss = -log_total;

    // Backward: beta[t][s] excludes the emission at t (completion mass).
    std::vector<double> beta(static_cast<std::size_t>(T) * S, kLogZero);
    beta[static_cast<std::size_t>(T - 1) * S + S - 1] = 0.0;
    if (S > 1) beta[static_cast<std::size_t>(T - 1) * S + S - 2] = 0.0;
    for (int t = T - 2; t >= 0; --t) {
        for (int s = 0; s < S; ++s) {
            double acc = kLogZero;
            for (int step = 0; step <= 2; ++step) {
                const int s2 = s + step;
                if (s2 >= S) break;
                if (step == 2 && (ext[s2] == blank || ext[s2] == ext[s])) continue;
                const double b = beta[static_cast<std::size_t>(t + 1) * S + s2];
                if (b == kLogZero) continue;
                acc = logaddexp(acc, b + log_p(t + 1, s2));
            }
            beta[static_cast<std::size_t>(t) * S + s] = acc;
        }
    }

    // d loss / d p[t][k] = -exp(logsum_{s: ext[s]=k} alpha[t][s]+beta[t][s]
    //                           - log_total - log p[t][k])
    for (int t = 0; t < T; ++t) {
        std::vector<double> per_class(C, kLogZero);
        for (int s = 0; s < S; ++s) {
            const double a = alpha[static_cast<std::size_t>(t) * S + s];
            const double b = beta[static_cast<std::size_t>(t) * S + s];
            if (a == kLogZero || b == kLogZero) continue;
            per_class[ext[s]] = logaddexp(per_class[ext[s]], a + b);
        }
        for (int k = 0; k < C; ++k) {
            if (per_class[k] == kLogZero) continue;
            const double lp = safe_log(logits.at(t, k));
            if (lp == kLogZero) continue;
            result.grad_probs[static_cast<std::size_t>(t) * C + k] =
                -std::exp(per_class[k] - log_total - lp);
        }
    }
    return result;
}

std::vector<int> greedy_decode_indices(const Logits& logits) {
    const int blank = logits.num_classes - 1;
    std::vector<int> path(logits.timesteps);
    for (int t = 0; t < logits.timesteps; ++t) {
        int best = 0;
        for (int c = 1; c < logits.num_classes; ++c)
            if (logits.at(t, c) > logits.at(t, best)) best = c;
        path[t] = best;
    }
    return collapse(path, blank);
}

std::string greedy_decode(const Logits& logits, const Charset& charset) {
    return charset.decode(greedy_decode_indices(logits));
}

void LexiconTrie::insert(const std::vector<int>& word_indices) {
    int node = 0;
    for (int idx : word_indices) {
        int next = step(node, idx);
        if (next < 0) {
            next = static_cast<int>(nodes_.size());
            nodes_.push_back({});
            auto& children = nodes_[node].children;
            children.insert(std::lower_bound(children.begin(), children.end(),
                                             std::pair<int, int>(idx, -1)),
                            {idx, next});
        }
        node = next;
    }
    if (!nodes_[node].is_word) {
        nodes_[node].is_word = true;
        ++word_count_;
    }
}

LexiconTrie LexiconTrie::from_words(const std::vector<std::string>& words,
                                    const Charset& charset) {
    LexiconTrie trie;
    for (const auto& w : words) {
        try {
            trie.insert(charset.encode(w));
        } catch (const InvalidArgument&) {
            // Word contains codepoints outside the charset; unreachable by
            // the recognizer, so it cannot constrain decoding.
        }
    }
    return trie;
}

int LexiconTrie::step(int node, int index) const {
    const auto& children = nodes_[node].children;
    auto it = std::lower_bound(children.begin(), children.end(),
                               std::pair<int, int>(index, -1));
    if (it != children.end() && it->first == index) return it->second;
    return -1;
}

namespace {

struct PrefixState {
    double log_blank = kLogZero;     // mass of paths ending in blank
    double log_nonblank = kLogZero;  // mass of paths ending in the last symbol
    int trie_node = 0;

    double total() const { return logaddexp(log_blank, log_nonblank); }
};

}  // namespace

std::vector<BeamHypothesis> beam_decode(const Logits& logits, const Charset& charset,
                                        int beam_width, const LexiconTrie* lexicon) {
    if (beam_width < 1) throw InvalidArgument("beam_decode: beam_width must be >= 1");
    const int blank = logits.num_classes - 1;

    using Prefix = std::vector<int>;
    std::map<Prefix, PrefixState> beam;
    PrefixState init;
    init.log_blank = 0.0;  // empty path
    init.trie_node = lexicon ? lexicon->root() : 0;
    beam.emplace(Prefix{}, init);

    for (int t = 0; t < logits.timesteps; ++t) {
        std::map<Prefix, PrefixState> next;
        auto slot = [&](const Prefix& p, int trie_node) -> PrefixState& {
            auto it = next.find(p);
            if (it == next.end()) {
                PrefixState fresh;
                fresh.trie_node = trie_node;
                it = next.emplace(p, fresh).first;
            }
            return it->second;
        };

        for (const auto& [prefix, state] : beam) {
            const double p_blank = logits.at(t, blank);
            // Blank keeps the prefix and moves all mass to the blank bucket.
            if (p_blank > 0.0) {
                auto& s = slot(prefix, state.trie_node);
                s.log_blank =
                    logaddexp(s.log_blank, state.total() + std::log(p_blank));
            }
            const int last = prefix.empty() ? -1 : prefix.back();
            for (int c = 0; c < blank; ++c) {
                const double p = logits.at(t, c);
                if (p <= 0.0) continue;
                const double log_pc = std::log(p);
                if (c == last) {
                    // Repeat without blank merges into the same prefix.
                    if (state.log_nonblank != kLogZero) {
                        auto& same = slot(prefix, state.trie_node);
                        same.log_nonblank =
                            logaddexp(same.log_nonblank, state.log_nonblank + log_pc);
                    }
                    // Blank-separated repeat extends the prefix.
                    if (state.log_blank != kLogZero) {
                        int node = state.trie_node;
                        if (lexicon) {
                            node = lexicon->step(node, c);
                            if (node < 0) continue;
                        }
                        Prefix ext = prefix;
                        ext.push_back(c);
                        auto& s = slot(ext, node);
                        s.log_nonblank =
                            logaddexp(s.log_nonblank, state.log_blank + log_pc);
                    }
                } else {
                    int node = state.trie_node;
                    if (lexicon) {
                        node = lexicon->step(node, c);
                        if (node < 0) continue;
                    }
                    Prefix ext = prefix;
                    ext.push_back(c);
                    auto& s = slot(ext, node);
                    s.log_nonblank =
                        logaddexp(s.log_nonblank, state.total() + log_pc);
                }
            }
        }

        // Keep the top beam_width prefixes; ties break lexicographically.
        if (next.size() > static_cast<std::size_t>(beam_width)) {
            std::vector<std::pair<Prefix, PrefixState>> ranked(next.begin(),
                                                               next.end());
            std::sort(ranked.begin(), ranked.end(),
                      [](const auto& a, const auto& b) {
                          const double ta = a.second.total();
                          const double tb = b.second.total();
                          if (ta != tb) return ta > tb;
                          return a.first < b.first;
                      });
            ranked.resize(beam_width);
            next = std::map<Prefix, PrefixState>(ranked.begin(), ranked.end());
        }
        beam = std::move(next);
    }

    std::vector<BeamHypothesis> out;
    for (const auto& [prefix, state] : beam) {
        if (lexicon && !lexicon->is_word(state.trie_node)) continue;
        if (state.total() == kLogZero) continue;
        BeamHypothesis hyp;
        hyp.prefix = prefix;
        hyp.log_prob = state.total();
        hyp.text = charset.decode(prefix);
        out.push_back(std::move(hyp));
    }
    std::sort(out.begin(), out.end(), [](const BeamHypothesis& a, const BeamHypothesis& b) {
        if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
        return a.prefix < b.prefix;
    });
    if (out.size() > static_cast<std::size_t>(beam_width)) out.resize(beam_width);
    return out;
}

void save_logits(const std::string& path, const Logits& logits) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write logits " + path);
    auto put_u32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                              static_cast<unsigned char>((v >> 8) & 0xFF),
                              static_cast<unsigned char>((v >> 16) & 0xFF),
                              static_cast<unsigned char>((v >> 24) & 0xFF)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u32(static_cast<std::uint32_t>(logits.timesteps));
    put_u32(static_cast<std::uint32_t>(logits.num_classes));
    out.write(reinterpret_cast<const char*>(logits.probs.data()),
              static_cast<std::streamsize>(logits.probs.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path);
}

Logits load_logits(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open logits " + path);
    auto get_u32 = [&]() -> std::uint32_t {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (in.gcount() != 4) throw ParseError("logits: truncated header");
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    };
    const auto t = get_u32();
    const auto c = get_u32();
    Logits logits(static_cast<int>(t), static_cast<int>(c));
    in.read(reinterpret_cast<char*>(logits.probs.data()),
            static_cast<std::streamsize>(logits.probs.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != logits.probs.size() * sizeof(double))
        throw ParseError("logits: truncated data");
    return logits;
}

}  // namespace rx
