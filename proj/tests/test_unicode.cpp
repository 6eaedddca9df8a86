#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rx/error.hpp"
#include "rx/unicode.hpp"

using namespace rx;

TEST_CASE("utf8 round trip") {
    const std::string s = "paracétamol कि ßẞ";
    CHECK(uni::encode_utf8(uni::decode_utf8(s)) == s);
}

TEST_CASE("utf8 rejects malformed bytes") {
    CHECK_THROWS_AS(uni::decode_utf8("\xC0\xAF"), ParseError);       // overlong
    CHECK_THROWS_AS(uni::decode_utf8("\xE0\x80\x80"), ParseError);   // overlong
    CHECK_THROWS_AS(uni::decode_utf8("\xED\xA0\x80"), ParseError);   // surrogate
    CHECK_THROWS_AS(uni::decode_utf8("\xF5\x80\x80\x80"), ParseError);
    CHECK_THROWS_AS(uni::decode_utf8("abc\x80"), ParseError);        // stray cont.
    CHECK_THROWS_AS(uni::decode_utf8("\xC3"), ParseError);           // truncated
    CHECK(uni::is_valid_utf8("plain ascii"));
    CHECK_FALSE(uni::is_valid_utf8("\xFF"));
}

TEST_CASE("nfc composes decomposed latin") {
    // e + combining acute -> é (U+00E9)
    CHECK(uni::nfc(std::string("e\xCC\x81")) == "\xC3\xA9");
    // paracétamol typed with a decomposed accent
    CHECK(uni::nfc(std::string("parace\xCC\x81tamol")) == "paracétamol");
}

TEST_CASE("nfc keeps devanagari ka + vowel sign i canonical") {
    // U+0915 U+093F has no precomposed form; NFC leaves the pair in place.
    const std::vector<char32_t> in = {0x0915, 0x093F};
    CHECK(uni::nfc(in) == in);
    CHECK(uni::nfc(std::string("कि")) == "कि");
}

TEST_CASE("nfc respects composition exclusions") {
    // U+0958 (qa) canonically decomposes to ka + nukta and is excluded from
    // recomposition, so NFC(U+0958) is the decomposed pair.
    const std::vector<char32_t> qa = {0x0958};
    const std::vector<char32_t> expected = {0x0915, 0x093C};
    CHECK(uni::nfc(qa) == expected);
    // ...and the pair itself stays decomposed.
    CHECK(uni::nfc(expected) == expected);
}

TEST_CASE("nfc reorders combining marks canonically") {
    // cedilla (ccc 202) sorts before acute (ccc 230); both then compose
    // onto the base: c -> ç -> ḉ (U+1E09).
    const std::vector<char32_t> in = {U'c', 0x0301, 0x0327};
    const std::vector<char32_t> expected = {0x1E09};
    CHECK(uni::nfc(in) == expected);
}

TEST_CASE("nfc handles hangul algorithmically") {
    const std::vector<char32_t> jamo = {0x1100, 0x1161, 0x11A8};  // g + a + k
    const std::vector<char32_t> syllable = {0xAC01};
    CHECK(uni::nfc(jamo) == syllable);
}

TEST_CASE("nfc is idempotent") {
    const std::vector<std::string> cases = {
        "paracétamol", "parace\xCC\x81tamol", "कि", "क़", "ẛ", "Café déjà vu",
    };
    for (const auto& s : cases) {
        const auto once = uni::nfc(s);
        CHECK(uni::nfc(once) == once);
    }
}

TEST_CASE("case folding") {
    CHECK(uni::fold_case(std::string("Paracetamol")) == "paracetamol");
    CHECK(uni::fold_case(std::string("ÉTAMOL")) == "étamol");
    CHECK(uni::to_lower(U'A') == U'a');
    CHECK(uni::to_lower(U'5') == U'5');
    // Devanagari has no case.
    CHECK(uni::fold_case(std::string("कि")) == "कि");
}
