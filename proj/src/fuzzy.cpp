#include "rx/fuzzy.hpp"

#include <algorithm>

#include "rx/error.hpp"
#include "rx/unicode.hpp"

namespace rx {

std::size_t levenshtein(const std::vector<char32_t>& a,
                        const std::vector<char32_t>& b) {
    const std::size_t n = b.size();
    std::vector<std::size_t> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t prev_diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t old = row[j];
            const std::size_t sub = prev_diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({sub, row[j] + 1, row[j - 1] + 1});
            prev_diag = old;
        }
    }
    return row[n];
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    return levenshtein(uni::nfc(uni::decode_utf8(a)), uni::nfc(uni::decode_utf8(b)));
}

FuzzyIndex::FuzzyIndex(const MedicineDb& db) : db_(&db) {
    if (db.size() == 0) throw InvalidArgument("fuzzy index: empty medicine db");
    for (std::size_t i = 0; i < db.size(); ++i) {
        auto key = uni::fold_case(uni::nfc(uni::decode_utf8(db.entry(i).name)));
        insert(std::move(key), i);
    }
}

void FuzzyIndex::insert(std::vector<char32_t> key, std::size_t entry_index) {
    if (nodes_.empty()) {
        nodes_.push_back({std::move(key), {entry_index}, {}});
        return;
    }
    int node = 0;
    for (;;) {
        const std::size_t d = levenshtein(nodes_[node].key, key);
        if (d == 0) {
            nodes_[node].entries.push_back(entry_index);
            return;
        }
        auto& children = nodes_[node].children;
        auto it = std::lower_bound(children.begin(), children.end(),
                                   std::pair<std::size_t, int>(d, -1));
        if (it != children.end() && it->first == d) {
            node = it->second;
            continue;
        }
        const int fresh = static_cast<int>(nodes_.size());
        children.insert(it, {d, fresh});
        nodes_.push_back({std::move(key), {entry_index}, {}});
        return;
    }
}

std::vector<Candidate> FuzzyIndex::search(const std::string& query,
                                          std::size_t max_dist) const {
    const auto q = uni::fold_case(uni::nfc(uni::decode_utf8(query)));
    std::vector<Candidate> hits;
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        const std::size_t d = levenshtein(node.key, q);
        if (d <= max_dist)
            for (std::size_t e : node.entries) hits.push_back({e, d, 0.0});
        // Triangle inequality: only children with |d_child - d| <= max_dist
        // can contain matches.
        const std::size_t lo = d > max_dist ? d - max_dist : 0;
        const std::size_t hi = d + max_dist;
        for (const auto& [dist, child] : node.children)
            if (dist >= lo && dist <= hi) stack.push_back(child);
    }
    std::sort(hits.begin(), hits.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        const auto& ea = db_->entry(a.entry_index);
        const auto& eb = db_->entry(b.entry_index);
        if (ea.name != eb.name) return ea.name < eb.name;
        return ea.id < eb.id;
    });
    return hits;
}

}  // namespace rx
