#include "rx/unicode.hpp"

#include <algorithm>

#include "rx/error.hpp"

namespace rx::uni {

namespace {

struct CombiningRow {
    std::uint32_t cp;
    std::uint8_t ccc;
};
struct DecompRow {
    std::uint32_t cp;
    std::uint32_t first;
    std::uint32_t second;  // 0 for singleton decompositions
};
struct CompRow {
    std::uint32_t first;
    std::uint32_t second;
    std::uint32_t composed;
};
struct LowerRow {
    std::uint32_t cp;
    std::uint32_t lower;
};

#include "unicode_tables.inc"

// Hangul syllable arithmetic per the Unicode standard, chapter 3.12.
constexpr std::uint32_t kSBase = 0xAC00;
constexpr std::uint32_t kLBase = 0x1100;
constexpr std::uint32_t kVBase = 0x1161;
constexpr std::uint32_t kTBase = 0x11A7;
constexpr std::uint32_t kLCount = 19;
constexpr std::uint32_t kVCount = 21;
constexpr std::uint32_t kTCount = 28;
constexpr std::uint32_t kNCount = kVCount * kTCount;
constexpr std::uint32_t kSCount = kLCount * kNCount;

const DecompRow* find_decomp(char32_t cp) {
    auto it = std::lower_bound(
        std::begin(kDecomp), std::end(kDecomp), static_cast<std::uint32_t>(cp),
        [](const DecompRow& row, std::uint32_t key) { return row.cp < key; });
    if (it != std::end(kDecomp) && it->cp == cp) return it;
    return nullptr;
}

char32_t find_composition(char32_t a, char32_t b) {
    auto key = std::pair<std::uint32_t, std::uint32_t>(a, b);
    auto it = std::lower_bound(
        std::begin(kComp), std::end(kComp), key,
        [](const CompRow& row, const std::pair<std::uint32_t, std::uint32_t>& k) {
            return std::pair(row.first, row.second) < k;
        });
    if (it != std::end(kComp) && it->first == a && it->second == b)
        return it->composed;
    // Hangul L+V and LV+T compose algorithmically.
    if (a >= kLBase && a < kLBase + kLCount && b >= kVBase && b < kVBase + kVCount)
        return kSBase + ((a - kLBase) * kVCount + (b - kVBase)) * kTCount;
    if (a >= kSBase && a < kSBase + kSCount && (a - kSBase) % kTCount == 0 &&
        b > kTBase && b < kTBase + kTCount)
        return a + (b - kTBase);
    return 0;
}

void decompose_into(char32_t cp, std::vector<char32_t>& out) {
    if (cp >= kSBase && cp < kSBase + kSCount) {
        std::uint32_t index = cp - kSBase;
        out.push_back(kLBase + index / kNCount);
        out.push_back(kVBase + (index % kNCount) / kTCount);
        if (index % kTCount) out.push_back(kTBase + index % kTCount);
        return;
    }
    if (const DecompRow* row = find_decomp(cp)) {
        decompose_into(row->first, out);
        if (row->second) decompose_into(row->second, out);
        return;
    }
    out.push_back(cp);
}

}  // namespace

std::uint8_t combining_class(char32_t cp) {
    auto it = std::lower_bound(
        std::begin(kCombining), std::end(kCombining),
        static_cast<std::uint32_t>(cp),
        [](const CombiningRow& row, std::uint32_t key) { return row.cp < key; });
    if (it != std::end(kCombining) && it->cp == cp) return it->ccc;
    return 0;
}

char32_t to_lower(char32_t cp) {
    auto it = std::lower_bound(
        std::begin(kLower), std::end(kLower), static_cast<std::uint32_t>(cp),
        [](const LowerRow& row, std::uint32_t key) { return row.cp < key; });
    if (it != std::end(kLower) && it->cp == cp) return it->lower;
    return cp;
}

std::vector<char32_t> decode_utf8(const std::string& bytes) {
    std::vector<char32_t> out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const auto fail = [&](const char* why) {
        throw ParseError(std::string("invalid UTF-8 at byte ") +
                         std::to_string(i) + ": " + why);
    };
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        char32_t cp;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            fail("bad leading byte");
            return out;
        }
        if (i + len > bytes.size()) fail("truncated sequence");
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) fail("bad continuation byte");
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinByLen[len]) fail("overlong encoding");
        if (cp >= 0xD800 && cp <= 0xDFFF) fail("surrogate codepoint");
        if (cp > 0x10FFFF) fail("codepoint out of range");
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

std::string encode_utf8(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) out += encode_utf8(cp);
    return out;
}

bool is_valid_utf8(const std::string& bytes) {
    try {
        decode_utf8(bytes);
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

std::vector<char32_t> nfc(const std::vector<char32_t>& in) {
    // 1. Full canonical decomposition.
    std::vector<char32_t> buf;
    buf.reserve(in.size());
    for (char32_t cp : in) decompose_into(cp, buf);

    // 2. Canonical ordering: stable sort of nonzero-ccc runs.
    for (std::size_t i = 1; i < buf.size(); ++i) {
        const std::uint8_t ccc = combining_class(buf[i]);
        if (ccc == 0) continue;
        std::size_t j = i;
        while (j > 0) {
            const std::uint8_t prev = combining_class(buf[j - 1]);
            if (prev == 0 || prev <= ccc) break;
            std::swap(buf[j - 1], buf[j]);
            --j;
        }
    }

    // 3. Canonical composition (UAX #15).
    if (buf.empty()) return buf;
    std::vector<char32_t> out;
    out.reserve(buf.size());
    out.push_back(buf[0]);
    std::ptrdiff_t starter = combining_class(buf[0]) == 0 ? 0 : -1;
    for (std::size_t i = 1; i < buf.size(); ++i) {
        const char32_t cp = buf[i];
        const std::uint8_t ccc = combining_class(cp);
        bool blocked = true;
        if (starter >= 0) {
            if (static_cast<std::size_t>(starter) + 1 == out.size()) {
                blocked = false;  // adjacent to the starter
            } else {
                blocked = combining_class(out.back()) >= ccc;
            }
        }
        if (!blocked) {
            if (char32_t composed = find_composition(out[starter], cp)) {
                out[starter] = composed;
                continue;
            }
        }
        out.push_back(cp);
        if (ccc == 0) starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
    }
    return out;
}

std::string nfc(const std::string& utf8) {
    return encode_utf8(nfc(decode_utf8(utf8)));
}

std::vector<char32_t> fold_case(const std::vector<char32_t>& in) {
    std::vector<char32_t> out;
    out.reserve(in.size());
    for (char32_t cp : in) out.push_back(to_lower(cp));
    return out;
}

std::string fold_case(const std::string& utf8) {
    return encode_utf8(fold_case(decode_utf8(utf8)));
}

}  // namespace rx::uni
