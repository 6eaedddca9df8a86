#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rx/charset.hpp"
#include "rx/glyphs.hpp"
#include "rx/image.hpp"

namespace rx {

// One training/evaluation item: a standardized render plus its label.
struct Sample {
    NormImage image;          // standardized, default 32x128
    std::vector<int> label;   // charset indices, no blanks
    std::string source_word;  // UTF-8
};

// Margin-to-ink-height ratio shared by the renderer and the recognize crop
// path, so word crops carry the same framing statistics either way.
inline constexpr double kWordFramePad = 0.2;

struct RenderOptions {
    int out_h = 32;
    int out_w = 128;
    int scale = 3;          // glyph cell magnification before jitter
    int smooth_radius = 0;  // match the imaging config used at recognition time
    // Seeded per-sample geometric augmentation, applied before
    // standardization so the recognizer tolerates resampling shifts.
    double max_rotate_deg = 2.5;
    double max_shear = 0.06;
};

// Renders a word by concatenating jittered glyph bitmaps and standardizing.
// Pure function of (word, charset, atlas, jitter_seed, options).
// Throws UnknownGlyph for uncovered codepoints and InvalidArgument when the
// label cannot fit the CTC timestep budget.
Sample render_word(const std::string& word, const Charset& charset,
                   const GlyphAtlas& atlas, std::uint64_t jitter_seed,
                   const RenderOptions& options = {});

// The pre-standardization stage of render_word: the jittered word drawn
// dark-on-light at glyph scale. Used to compose synthetic page images that
// go through the same resampling path as training samples.
NormImage render_word_canvas(const std::string& word, const GlyphAtlas& atlas,
                             std::uint64_t jitter_seed,
                             const RenderOptions& options = {});

// Seeded shuffle then cut: |train| = floor(n * train_fraction).
std::pair<std::vector<Sample>, std::vector<Sample>> split_dataset(
    std::vector<Sample> samples, double train_fraction, std::uint64_t seed);

// Same split on indices, for callers that keep samples external.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed);

}  // namespace rx
