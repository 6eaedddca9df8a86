#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rx {

// Ordered alphabet of Unicode scalar values; the CTC blank is the implicit
// extra last class (index size()).
class Charset {
public:
    Charset() = default;
    explicit Charset(std::vector<char32_t> codepoints);

    static Charset from_file(const std::string& path);
    // Distinct codepoints of the given words, sorted ascending.
    static Charset from_words(const std::vector<std::string>& words);

    void save(const std::string& path) const;

    std::size_t size() const { return codepoints_.size(); }
    int blank_index() const { return static_cast<int>(codepoints_.size()); }
    int num_classes() const { return static_cast<int>(codepoints_.size()) + 1; }

    char32_t codepoint(int index) const { return codepoints_.at(index); }
    std::optional<int> index_of(char32_t cp) const;

    // Maps a word to label indices. Throws InvalidArgument on unmapped
    // codepoints.
    std::vector<int> encode(const std::string& utf8_word) const;
    std::string decode(const std::vector<int>& indices) const;

    const std::vector<char32_t>& codepoints() const { return codepoints_; }

private:
    std::vector<char32_t> codepoints_;
    std::unordered_map<char32_t, int> index_;
};

}  // namespace rx
