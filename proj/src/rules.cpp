#include "rx/rules.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace rx {

namespace {

bool contains_all(const std::vector<int>& transaction, const std::vector<int>& items) {
    return std::includes(transaction.begin(), transaction.end(), items.begin(),
                         items.end());
}

std::size_t count_support(const std::vector<std::vector<int>>& tx,
                          const std::vector<int>& items) {
    std::size_t n = 0;
    for (const auto& t : tx)
        if (contains_all(t, items)) ++n;
    return n;
}

}  // namespace

std::vector<ItemsetSupport> apriori(const std::vector<std::vector<int>>& transactions,
                                    double min_support) {
    if (transactions.empty()) throw EmptyTransactionDb();
    if (!(min_support > 0.0 && min_support <= 1.0))
        throw InvalidArgument("apriori: min_support must be in (0,1]");
    const double n = static_cast<double>(transactions.size());

    std::vector<ItemsetSupport> result;

    // Level 1.
    std::map<int, std::size_t> singleton_counts;
    for (const auto& t : transactions)
        for (int item : t) ++singleton_counts[item];
    std::vector<std::vector<int>> level;
    for (const auto& [item, count] : singleton_counts) {
        const double support = static_cast<double>(count) / n;
        if (support >= min_support) {
            result.push_back({{item}, count, support});
            level.push_back({item});
        }
    }

    while (level.size() > 1) {
        // Join candidates sharing a (k-1)-prefix; the level is sorted, so
        // joins stay lexicographic.
        std::vector<std::vector<int>> candidates;
        for (std::size_t i = 0; i < level.size(); ++i) {
            for (std::size_t j = i + 1; j < level.size(); ++j) {
                const auto& a = level[i];
                const auto& b = level[j];
                if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
                std::vector<int> joined = a;
                joined.push_back(b.back());
                // Downward closure: every (k-1)-subset must be frequent.
                bool all_frequent = true;
                for (std::size_t drop = 0; drop + 1 < joined.size() && all_frequent;
                     ++drop) {
                    std::vector<int> subset;
                    subset.reserve(joined.size() - 1);
                    for (std::size_t k = 0; k < joined.size(); ++k)
                        if (k != drop) subset.push_back(joined[k]);
                    all_frequent = std::binary_search(level.begin(), level.end(), subset);
                }
                if (all_frequent) candidates.push_back(std::move(joined));
            }
        }

        std::vector<std::vector<int>> next_level;
        for (auto& cand : candidates) {
            const std::size_t count = count_support(transactions, cand);
            const double support = static_cast<double>(count) / n;
            if (support >= min_support) {
                result.push_back({cand, count, support});
                next_level.push_back(std::move(cand));
            }
        }
        level = std::move(next_level);
    }
    return result;
}

std::vector<Rule> mine_rules(const std::vector<ItemsetSupport>& itemsets,
                             double min_confidence) {
    std::map<std::vector<int>, double> support_of;
    for (const auto& s : itemsets) support_of[s.items] = s.support;

    std::vector<Rule> rules;
    for (const auto& s : itemsets) {
        if (s.items.size() < 2) continue;
        for (std::size_t drop = 0; drop < s.items.size(); ++drop) {
            Rule r;
            r.consequent = s.items[drop];
            for (std::size_t k = 0; k < s.items.size(); ++k)
                if (k != drop) r.antecedent.push_back(s.items[k]);
            // Antecedent and consequent are frequent by downward closure.
            const double sup_a = support_of.at(r.antecedent);
            const double sup_c = support_of.at({r.consequent});
            r.support = s.support;
            r.confidence = s.support / sup_a;
            r.lift = r.confidence / sup_c;
            if (r.confidence >= min_confidence) rules.push_back(std::move(r));
        }
    }
    std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
        return a.consequent < b.consequent;
    });
    return rules;
}

std::vector<AssociationRule> mine_association_rules(const MedicineDb& db,
                                                    const TransactionDb& tx,
                                                    double min_support,
                                                    double min_confidence) {
    std::vector<std::vector<int>> transactions;
    transactions.reserve(tx.transactions.size());
    for (const auto& t : tx.transactions) {
        std::vector<int> items;
        items.reserve(t.entry_indices.size());
        for (std::size_t e : t.entry_indices) items.push_back(static_cast<int>(e));
        transactions.push_back(std::move(items));
    }
    const auto itemsets = apriori(transactions, min_support);
    const auto rules = mine_rules(itemsets, min_confidence);

    std::vector<AssociationRule> out;
    out.reserve(rules.size());
    for (const auto& r : rules) {
        AssociationRule a;
        for (int item : r.antecedent)
            a.antecedent_ids.push_back(db.entry(static_cast<std::size_t>(item)).id);
        a.consequent_id = db.entry(static_cast<std::size_t>(r.consequent)).id;
        a.support = r.support;
        a.confidence = r.confidence;
        a.lift = r.lift;
        out.push_back(std::move(a));
    }
    return out;
}

void save_rules_tsv(const std::string& path, const std::vector<AssociationRule>& rules) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write rules " + path);
    out.precision(17);
    for (const auto& r : rules) {
        for (std::size_t i = 0; i < r.antecedent_ids.size(); ++i) {
            if (i) out << ',';
            out << r.antecedent_ids[i];
        }
        out << '\t' << r.consequent_id << '\t' << r.support << '\t' << r.confidence
            << '\t' << r.lift << '\n';
    }
}

}  // namespace rx
