#include "rx/charset.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "rx/error.hpp"
#include "rx/unicode.hpp"

namespace rx {

Charset::Charset(std::vector<char32_t> codepoints)
    : codepoints_(std::move(codepoints)) {
    for (std::size_t i = 0; i < codepoints_.size(); ++i) {
        auto [it, inserted] =
            index_.emplace(codepoints_[i], static_cast<int>(i));
        if (!inserted)
            throw InvalidArgument("charset: duplicate codepoint U+" +
                                  std::to_string(static_cast<std::uint32_t>(codepoints_[i])));
    }
}

Charset Charset::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open charset file " + path);
    std::vector<char32_t> cps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto decoded = uni::decode_utf8(line);
        if (decoded.size() != 1)
            throw ParseError("charset: expected one codepoint per line", lineno);
        cps.push_back(decoded[0]);
    }
    return Charset(std::move(cps));
}

Charset Charset::from_words(const std::vector<std::string>& words) {
    std::set<char32_t> cps;
    for (const auto& w : words)
        for (char32_t cp : uni::decode_utf8(w)) cps.insert(cp);
    return Charset(std::vector<char32_t>(cps.begin(), cps.end()));
}

void Charset::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write charset file " + path);
    for (char32_t cp : codepoints_) out << uni::encode_utf8(cp) << "\n";
}

std::optional<int> Charset::index_of(char32_t cp) const {
    auto it = index_.find(cp);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> Charset::encode(const std::string& utf8_word) const {
    std::vector<int> out;
    for (char32_t cp : uni::decode_utf8(utf8_word)) {
        auto idx = index_of(cp);
        if (!idx)
            throw InvalidArgument("charset: unmapped codepoint in \"" + utf8_word +
                                  "\"");
        out.push_back(*idx);
    }
    return out;
}

std::string Charset::decode(const std::vector<int>& indices) const {
    std::string out;
    for (int i : indices) out += uni::encode_utf8(codepoint(i));
    return out;
}

}  // namespace rx
