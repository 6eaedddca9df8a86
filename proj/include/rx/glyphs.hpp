#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "rx/error.hpp"

namespace rx {

struct UnknownGlyph : Error {
    explicit UnknownGlyph(char32_t cp);
    char32_t codepoint;
};

// 5x7 bitmap per codepoint, row-major booleans.
struct GlyphBitmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;
    bool on(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
};

// Embedded synthetic font: lowercase ASCII letters, digits, 'é', and a
// stylized Devanagari subset. Enough to exercise multi-script rendering
// without any real handwriting data.
class GlyphAtlas {
public:
    static const GlyphAtlas& builtin();

    bool contains(char32_t cp) const { return glyphs_.count(cp) != 0; }
    // Throws UnknownGlyph when the codepoint is not covered.
    const GlyphBitmap& bitmap(char32_t cp) const;

    std::vector<char32_t> covered() const;

private:
    GlyphAtlas();
    std::unordered_map<char32_t, GlyphBitmap> glyphs_;
};

}  // namespace rx
