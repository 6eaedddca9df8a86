#pragma once

#include <string>
#include <vector>

#include "rx/error.hpp"
#include "rx/meddb.hpp"

namespace rx {

struct EmptyTransactionDb : Error {
    EmptyTransactionDb() : Error("apriori: empty transaction db") {}
};

// Frequent itemset with its support; items are sorted indices.
struct ItemsetSupport {
    std::vector<int> items;
    std::size_t count = 0;
    double support = 0.0;
};

// Classic level-wise Apriori: (k-1)-prefix join for candidates, pruned by
// downward closure, supports counted against the transaction list.
// Transactions must hold sorted unique item indices.
std::vector<ItemsetSupport> apriori(const std::vector<std::vector<int>>& transactions,
                                    double min_support);

struct Rule {
    std::vector<int> antecedent;  // sorted
    int consequent = 0;
    double support = 0.0;     // support of antecedent + consequent
    double confidence = 0.0;  // support(A u {c}) / support(A)
    double lift = 0.0;        // confidence / support({c})
};

// Single-consequent rules from the frequent itemsets, kept when
// confidence >= min_confidence.
std::vector<Rule> mine_rules(const std::vector<ItemsetSupport>& itemsets,
                             double min_confidence);

// Same rules with items resolved to medicine ids.
struct AssociationRule {
    std::vector<std::string> antecedent_ids;
    std::string consequent_id;
    double support = 0.0;
    double confidence = 0.0;
    double lift = 0.0;
};

std::vector<AssociationRule> mine_association_rules(const MedicineDb& db,
                                                    const TransactionDb& tx,
                                                    double min_support,
                                                    double min_confidence);

// TSV: antecedent_ids(comma-joined) \t consequent \t support \t confidence \t lift
void save_rules_tsv(const std::string& path, const std::vector<AssociationRule>& rules);

}  // namespace rx
