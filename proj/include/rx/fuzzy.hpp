#pragma once

#include <string>
#include <vector>

#include "rx/meddb.hpp"

namespace rx {

// Codepoint-level Levenshtein distance (insert/delete/substitute, unit cost).
std::size_t levenshtein(const std::vector<char32_t>& a, const std::vector<char32_t>& b);
// Convenience: NFC-normalizes both UTF-8 strings first.
std::size_t levenshtein(const std::string& a, const std::string& b);

struct Candidate {
    std::size_t entry_index = 0;  // into MedicineDb::entries()
    std::size_t distance = 0;
    double score = 0.0;
};

// BK-tree over case-folded NFC medicine names. Range queries are exact:
// identical result sets to a linear scan.
class FuzzyIndex {
public:
    explicit FuzzyIndex(const MedicineDb& db);

    // All entries within max_dist of the query, sorted by
    // (distance asc, name lexicographic, id).
    std::vector<Candidate> search(const std::string& query, std::size_t max_dist) const;

    const MedicineDb& db() const { return *db_; }

private:
    struct Node {
        std::vector<char32_t> key;               // folded name
        std::vector<std::size_t> entries;        // all entries sharing the key
        std::vector<std::pair<std::size_t, int>> children;  // (distance, node), sorted
    };
    void insert(std::vector<char32_t> key, std::size_t entry_index);

    const MedicineDb* db_;
    std::vector<Node> nodes_;
};

}  // namespace rx
