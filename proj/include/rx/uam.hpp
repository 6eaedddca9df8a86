#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rx {

enum class UamStatus { Unclassified, Valid, Invalid, Repaired };

// A composed, NFC-canonical candidate string with its validity against the
// reference database.
struct UamString {
    std::string text;  // NFC UTF-8
    UamStatus status = UamStatus::Unclassified;
    std::string original;      // pre-repair text (Repaired only)
    std::size_t distance = 0;  // edit distance to the original (Repaired only)
};

// Reference wordlist: global set plus per-language partitions. Entries are
// stored NFC; membership tests are case-folded.
class ValidUamDb {
public:
    void add(const std::string& word, const std::string& lang = "");
    // UTF-8 text, one `lang<TAB>word` per line.
    static ValidUamDb load(const std::string& path);

    bool contains(const std::string& nfc_text,
                  const std::optional<std::string>& lang = std::nullopt) const;
    // NFC originals, global or one partition; sorted.
    std::vector<std::string> entries(
        const std::optional<std::string>& lang = std::nullopt) const;

    bool empty() const { return folded_global_.empty(); }

private:
    std::set<std::string> folded_global_;
    std::map<std::string, std::set<std::string>> folded_by_lang_;
    std::set<std::string> originals_;
    std::map<std::string, std::set<std::string>> originals_by_lang_;
};

// Concatenates the recognized pieces in order and NFC-normalizes.
// Throws InvalidArgument when pieces is empty or contains an empty string.
UamString map_segments(const std::vector<std::string>& pieces);

// Membership of the case-folded text in the db (optionally one partition).
UamStatus classify(const UamString& s, const ValidUamDb& db,
                   const std::optional<std::string>& lang = std::nullopt);

// Nearest-entry repair with bounded edit distance; ties break toward the
// shorter entry, then lexicographic. Valid strings pass through untouched.
UamString repair(UamString s, const ValidUamDb& db, std::size_t max_dist,
                 const std::optional<std::string>& lang = std::nullopt);

}  // namespace rx
