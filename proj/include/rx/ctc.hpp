#pragma once

#include <string>
#include <vector>

#include "rx/charset.hpp"

namespace rx {

// Per-timestep class probabilities; row-stochastic T x num_classes.
// Blank is the last class (num_classes - 1).
struct Logits {
    int timesteps = 0;
    int num_classes = 0;
    std::vector<double> probs;  // row-major

    Logits() = default;
    Logits(int t, int c) : timesteps(t), num_classes(c), probs(static_cast<std::size_t>(t) * c, 0.0) {}
    double at(int t, int c) const { return probs[static_cast<std::size_t>(t) * num_classes + c]; }
    double& at(int t, int c) { return probs[static_cast<std::size_t>(t) * num_classes + c]; }
};

// Merge adjacent duplicates, then delete blanks.
std::vector<int> collapse(const std::vector<int>& path, int blank);

struct CtcResult {
    double loss = 0.0;               // -ln P(label | logits); +inf when infeasible
    std::vector<double> grad_probs;  // d loss / d probs, T x num_classes; zero when infeasible
    bool feasible = true;
};

// Exact log-space forward-backward over the blank-interleaved extended label.
CtcResult ctc_loss(const Logits& logits, const std::vector<int>& label);

// True when the label fits T frames (repeats need a separating blank).
bool ctc_feasible(const std::vector<int>& label, int timesteps);

// Collapse of the per-row argmax path (ties toward the lowest class index).
std::string greedy_decode(const Logits& logits, const Charset& charset);
std::vector<int> greedy_decode_indices(const Logits& logits);

// Prefix trie over charset-encoded words, used to constrain beam search.
class LexiconTrie {
public:
    LexiconTrie() { nodes_.push_back({}); }

    void insert(const std::vector<int>& word_indices);
    // Encodes each word through the charset; words with unmapped codepoints
    // are skipped (the recognizer can never emit them).
    static LexiconTrie from_words(const std::vector<std::string>& words,
                                  const Charset& charset);

    // Child node id or -1.
    int step(int node, int index) const;
    bool is_word(int node) const { return nodes_[node].is_word; }
    int root() const { return 0; }
    std::size_t word_count() const { return word_count_; }

private:
    struct Node {
        std::vector<std::pair<int, int>> children;  // (class index, node id), sorted
        bool is_word = false;
    };
    std::vector<Node> nodes_;
    std::size_t word_count_ = 0;
};

struct BeamHypothesis {
    std::vector<int> prefix;  // collapsed label indices
    double log_prob = 0.0;
    std::string text;  // prefix decoded through the charset
};

// Graves-style prefix beam search: hypotheses merge by collapsed prefix,
// pooling blank/non-blank mass. With a lexicon, extensions leaving the trie
// are pruned and only complete words are returned.
std::vector<BeamHypothesis> beam_decode(const Logits& logits, const Charset& charset,
                                        int beam_width,
                                        const LexiconTrie* lexicon = nullptr);

// Simple binary block (T, C as little-endian u32, then T*C doubles) so the
// decoder is testable without the network.
void save_logits(const std::string& path, const Logits& logits);
Logits load_logits(const std::string& path);

}  // namespace rx
