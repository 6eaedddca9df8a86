#include "rx/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "rx/error.hpp"
#include "rx/rng.hpp"
#include "rx/unicode.hpp"

namespace rx {

namespace {

// Minimum CTC path length for a label: one frame per symbol plus one
// separating blank per adjacent repeat.
std::size_t min_timesteps(const std::vector<int>& label) {
    std::size_t need = label.size();
    for (std::size_t i = 1; i < label.size(); ++i)
        if (label[i] == label[i - 1]) ++need;
    return need;
}

}  // namespace

NormImage render_word_canvas(const std::string& word, const GlyphAtlas& atlas,
                             std::uint64_t jitter_seed,
                             const RenderOptions& options) {
    if (word.empty()) throw InvalidArgument("render_word: empty word");
    const auto codepoints = uni::decode_utf8(word);
    for (char32_t cp : codepoints)
        if (!atlas.contains(cp)) throw UnknownGlyph(cp);

    Rng rng(jitter_seed);
    const int scale = options.scale;
    const int glyph_h = 7 * scale;
    const int margin = scale + 2;
    const int canvas_h = glyph_h + 2 * margin;

    // First pass decides per-glyph jitter so the canvas width is known.
    struct Placement {
        char32_t cp;
        int dx;      // gap before the glyph
        int dy;      // baseline jitter
        double ink;  // ink intensity (dark on light)
        bool bold;
    };
    std::vector<Placement> plan;
    plan.reserve(codepoints.size());
    int canvas_w = margin;
    for (std::size_t i = 0; i < codepoints.size(); ++i) {
        Placement p;
        p.cp = codepoints[i];
        p.dx = i == 0 ? 0 : static_cast<int>(rng.uniform_int(scale / 2, scale + 1));
        p.dy = static_cast<int>(rng.uniform_int(-(scale / 2) - 1, scale / 2 + 1));
        p.ink = rng.uniform(0.0, 0.25);
        p.bold = rng.uniform() < 0.3;
        canvas_w += p.dx + 5 * scale + (p.bold ? 1 : 0);
        plan.push_back(p);
    }
    canvas_w += margin;

    NormImage canvas(canvas_w, canvas_h, 1.0);
    int pen_x = margin;
    for (const auto& p : plan) {
        pen_x += p.dx;
        const GlyphBitmap& bm = atlas.bitmap(p.cp);
        for (int gy = 0; gy < bm.height; ++gy) {
            for (int gx = 0; gx < bm.width; ++gx) {
                if (!bm.on(gx, gy)) continue;
                const int x0 = pen_x + gx * scale;
                const int y0 = margin + p.dy + gy * scale;
                const int w = scale + (p.bold ? 1 : 0);
                for (int yy = y0; yy < y0 + scale; ++yy) {
                    for (int xx = x0; xx < x0 + w; ++xx) {
                        if (xx < 0 || yy < 0 || xx >= canvas.width || yy >= canvas.height)
                            continue;
                        canvas.at(xx, yy) = p.ink;
                    }
                }
            }
        }
        pen_x += 5 * scale + (p.bold ? 1 : 0);
    }

    // Light speckle noise.
    const int speckles = static_cast<int>(rng.uniform_int(0, canvas_w / 16));
    for (int s = 0; s < speckles; ++s) {
        const int x = static_cast<int>(rng.uniform_int(0, canvas.width - 1));
        const int y = static_cast<int>(rng.uniform_int(0, canvas.height - 1));
        canvas.at(x, y) = rng.uniform(0.55, 0.85);
    }
    return canvas;
}

Sample render_word(const std::string& word, const Charset& charset,
                   const GlyphAtlas& atlas, std::uint64_t jitter_seed,
                   const RenderOptions& options) {
    Sample sample;
    sample.source_word = word;
    sample.label = charset.encode(word);
    const std::size_t timesteps = static_cast<std::size_t>(options.out_w) / 4;
    if (min_timesteps(sample.label) > timesteps)
        throw InvalidArgument("render_word: label too long for " +
                              std::to_string(timesteps) + " timesteps: " + word);

    const NormImage canvas = render_word_canvas(word, atlas, jitter_seed, options);

    // Same smoothing the page sees at recognition time, a jittered affine
    // warp, then the shared tight-crop framing and standardization. Samples
    // feed the recognizer, which trains on ink intensity.
    Rng rng(jitter_seed ^ 0xA5A5A5A5A5A5A5A5ULL);
    NormImage staged = smooth(canvas, options.smooth_radius);
    if (options.max_rotate_deg > 0.0 || options.max_shear > 0.0) {
        AugmentSpec spec;
        spec.rotate_deg = rng.uniform(-options.max_rotate_deg, options.max_rotate_deg);
        spec.shear_x = rng.uniform(-options.max_shear, options.max_shear);
        staged = augment(staged, spec);
    }
    staged = frame_ink(staged, 0.5, kWordFramePad);
    sample.image = invert(standardize(staged, options.out_h, options.out_w));
    return sample;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidArgument("split: train_fraction must be in (0,1)");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(order[i - 1], order[j]);
    }
    const std::size_t n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
    std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
    std::vector<std::size_t> test(order.begin() + n_train, order.end());
    return {std::move(train), std::move(test)};
}

std::pair<std::vector<Sample>, std::vector<Sample>> split_dataset(
    std::vector<Sample> samples, double train_fraction, std::uint64_t seed) {
    auto [train_idx, test_idx] = split_indices(samples.size(), train_fraction, seed);
    std::vector<Sample> train, test;
    train.reserve(train_idx.size());
    test.reserve(test_idx.size());
    for (auto i : train_idx) train.push_back(std::move(samples[i]));
    for (auto i : test_idx) test.push_back(std::move(samples[i]));
    return {std::move(train), std::move(test)};
}

}  // namespace rx
