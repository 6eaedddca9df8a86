#include "rx/uam.hpp"

#include <fstream>

#include "rx/error.hpp"
#include "rx/fuzzy.hpp"
#include "rx/unicode.hpp"

namespace rx {

void ValidUamDb::add(const std::string& word, const std::string& lang) {
    const std::string n = uni::nfc(word);
    if (n.empty()) return;
    const std::string folded = uni::fold_case(n);
    folded_global_.insert(folded);
    originals_.insert(n);
    if (!lang.empty()) {
        folded_by_lang_[lang].insert(folded);
        originals_by_lang_[lang].insert(n);
    }
}

ValidUamDb ValidUamDb::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open uam db " + path);
    ValidUamDb db;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!uni::is_valid_utf8(line))
            throw ParseError("uam db: invalid UTF-8", lineno);
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("uam db: expected lang<TAB>word", lineno);
        db.add(line.substr(tab + 1), line.substr(0, tab));
    }
    return db;
}

bool ValidUamDb::contains(const std::string& nfc_text,
                          const std::optional<std::string>& lang) const {
    const std::string folded = uni::fold_case(nfc_text);
    if (!lang) return folded_global_.count(folded) != 0;
    auto it = folded_by_lang_.find(*lang);
    return it != folded_by_lang_.end() && it->second.count(folded) != 0;
}

std::vector<std::string> ValidUamDb::entries(
    const std::optional<std::string>& lang) const {
    if (!lang) return {originals_.begin(), originals_.end()};
    auto it = originals_by_lang_.find(*lang);
    if (it == originals_by_lang_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

UamString map_segments(const std::vector<std::string>& pieces) {
    if (pieces.empty()) throw InvalidArgument("map_segments: no pieces");
    std::string joined;
    for (const auto& p : pieces) {
        if (p.empty()) throw InvalidArgument("map_segments: empty piece");
        joined += p;
    }
    UamString s;
    s.text = uni::nfc(joined);
    s.status = UamStatus::Unclassified;
    return s;
}

UamStatus classify(const UamString& s, const ValidUamDb& db,
                   const std::optional<std::string>& lang) {
    return db.contains(s.text, lang) ? UamStatus::Valid : UamStatus::Invalid;
}

UamString repair(UamString s, const ValidUamDb& db, std::size_t max_dist,
                 const std::optional<std::string>& lang) {
    if (s.status == UamStatus::Valid) return s;

    const auto query = uni::fold_case(uni::decode_utf8(s.text));
    std::string best_entry;
    std::size_t best_dist = max_dist + 1;
    for (const std::string& entry : db.entries(lang)) {
        const auto key = uni::fold_case(uni::decode_utf8(entry));
        const std::size_t d = levenshtein(query, key);
        if (d < best_dist) {
            best_dist = d;
            best_entry = entry;
        } else if (d == best_dist && !best_entry.empty()) {
            const auto cur = uni::decode_utf8(best_entry);
            const auto cand = uni::decode_utf8(entry);
            if (cand.size() < cur.size() ||
                (cand.size() == cur.size() && entry < best_entry))
                best_entry = entry;
        }
    }
    if (best_dist <= max_dist) {
        s.original = s.text;
        s.distance = best_dist;
        s.text = best_entry;
        s.status = UamStatus::Repaired;
    } else {
        s.status = UamStatus::Invalid;
    }
    return s;
}

}  // namespace rx
