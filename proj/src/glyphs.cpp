#include "rx/glyphs.hpp"

#include <array>

#include "rx/unicode.hpp"

namespace rx {

UnknownGlyph::UnknownGlyph(char32_t cp)
    : Error("no glyph for codepoint U+" +
            [](char32_t c) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%04X", static_cast<unsigned>(c));
                return std::string(buf);
            }(cp) +
            " ('" + uni::encode_utf8(cp) + "')"),
      codepoint(cp) {}

namespace {

struct GlyphDef {
    char32_t cp;
    std::array<const char*, 7> rows;  // 5 columns, '#' = ink
};

// clang-format off
const GlyphDef kFont[] = {
    {U'a', {".....", ".....", ".###.", "....#", ".####", "#...#", ".####"}},
    {U'b', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "####."}},
    {U'c', {".....", ".....", ".####", "#....", "#....", "#....", ".####"}},
    {U'd', {"....#", "....#", ".####", "#...#", "#...#", "#...#", ".####"}},
    {U'e', {".....", ".....", ".###.", "#...#", "#####", "#....", ".###."}},
    {U'f', {"..##.", ".#..#", ".#...", "###..", ".#...", ".#...", ".#..."}},
    {U'g', {".....", ".###.", "#...#", "#...#", ".####", "....#", ".###."}},
    {U'h', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#"}},
    {U'i', {"..#..", ".....", ".##..", "..#..", "..#..", "..#..", ".###."}},
    {U'j', {"...#.", ".....", "..##.", "...#.", "...#.", "#..#.", ".##.."}},
    {U'k', {"#....", "#....", "#..#.", "#.#..", "##...", "#.#..", "#..#."}},
    {U'l', {".##..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {U'm', {".....", ".....", "##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#"}},
    {U'n', {".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#"}},
    {U'o', {".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###."}},
    {U'p', {".....", "####.", "#...#", "#...#", "####.", "#....", "#...."}},
    {U'q', {".....", ".####", "#...#", "#...#", ".####", "....#", "....#"}},
    {U'r', {".....", ".....", "#.##.", "##..#", "#....", "#....", "#...."}},
    {U's', {".....", ".....", ".####", "#....", ".###.", "....#", "####."}},
    {U't', {".#...", ".#...", "####.", ".#...", ".#...", ".#..#", "..##."}},
    {U'u', {".....", ".....", "#...#", "#...#", "#...#", "#...#", ".####"}},
    {U'v', {".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {U'w', {".....", ".....", "#.#.#", "#.#.#", "#.#.#", "#.#.#", ".#.#."}},
    {U'x', {".....", ".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#"}},
    {U'y', {".....", "#...#", "#...#", ".####", "....#", "#...#", ".###."}},
    {U'z', {".....", ".....", "#####", "...#.", "..#..", ".#...", "#####"}},
    {U'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
    {U'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {U'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {U'3', {".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."}},
    {U'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {U'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {U'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {U'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {U'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {U'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
    {U'é', {"..#..", ".#...", ".###.", "#...#", "#####", "#....", ".###."}},  // é
    // Stylized Devanagari demonstration subset (shirorekha + distinct body).
    {U'क', {"#####", ".#..#", ".#..#", "###.#", ".#..#", ".#..#", ".#..#"}},  // ka
    {U'ख', {"#####", "#.#.#", "#.#.#", ".##.#", "#...#", "#...#", ".####"}},  // kha
    {U'ग', {"#####", "..#.#", "..#.#", "..#.#", "..#.#", "#.#.#", ".##.#"}},  // ga
    {U'ज', {"#####", "#..#.", ".#.#.", "##.#.", "#..#.", "#..#.", "##.#."}},  // ja
    {U'ट', {"#####", "....#", "..###", ".#..#", "#...#", "#...#", ".####"}},  // tta
    {U'त', {"#####", ".#..#", "#.#.#", "#.#.#", "..#.#", "..#.#", "..#.#"}},  // ta
    {U'द', {"#####", ".###.", "...#.", "..##.", ".#..#", "#...#", ".###."}},  // da
    {U'न', {"#####", "..#.#", "..#.#", "#####", "..#.#", "..#.#", "..#.#"}},  // na
    {U'प', {"#####", "#...#", "#...#", "#.###", "#...#", "#...#", "#...#"}},  // pa
    {U'म', {"#####", "#...#", "##..#", "#.#.#", "##..#", "#...#", "#...#"}},  // ma
    {U'र', {"#####", "..#..", "..#..", ".###.", "#..#.", "...#.", "..#.."}},  // ra
    {U'ल', {"#####", "#.#.#", "#.#.#", ".###.", "..#.#", ".#..#", "#..##"}},  // la
    {U'स', {"#####", "#.#.#", "#.#.#", ".#..#", ".##.#", "#...#", "#..##"}},  // sa
    {U'ह', {"#####", "....#", ".##.#", "#..##", "#...#", "#.#.#", ".#.##"}},  // ha
    {U'ा', {"#####", "...#.", "...#.", "...#.", "...#.", "...#.", "...#."}},  // sign aa
    {U'ि', {"#####", ".#...", "#....", "#....", "#....", "#....", "#..#."}},  // sign i
};
// clang-format on

}  // namespace

GlyphAtlas::GlyphAtlas() {
    for (const auto& def : kFont) {
        GlyphBitmap bm;
        bm.width = 5;
        bm.height = 7;
        bm.bits.resize(5 * 7);
        for (int y = 0; y < 7; ++y)
            for (int x = 0; x < 5; ++x)
                bm.bits[static_cast<std::size_t>(y) * 5 + x] =
                    def.rows[y][x] == '#' ? 1 : 0;
        glyphs_.emplace(def.cp, std::move(bm));
    }
}

const GlyphAtlas& GlyphAtlas::builtin() {
    static const GlyphAtlas atlas;
    return atlas;
}

const GlyphBitmap& GlyphAtlas::bitmap(char32_t cp) const {
    auto it = glyphs_.find(cp);
    if (it == glyphs_.end()) throw UnknownGlyph(cp);
    return it->second;
}

std::vector<char32_t> GlyphAtlas::covered() const {
    std::vector<char32_t> cps;
    cps.reserve(glyphs_.size());
    for (const auto& [cp, _] : glyphs_) cps.push_back(cp);
    return cps;
}

}  // namespace rx
