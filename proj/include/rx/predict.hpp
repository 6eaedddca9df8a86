#pragma once

#include <set>
#include <string>
#include <vector>

#include "rx/fuzzy.hpp"
#include "rx/rules.hpp"

namespace rx {

struct OptimizerConfig {
    std::size_t max_dist = 2;
    double min_support = 0.2;
    double min_confidence = 0.5;
    double assoc_weight = 1.0;  // lambda; 0 reproduces pure fuzzy ranking

    void validate() const;
};

// Fuses edit distance with association evidence:
//   score = (max_dist - distance)
//         + lambda * max{ confidence(A -> candidate) : A subset of context }
// Candidates sorted by (score desc, distance asc, name lexicographic).
// Empty result means the raw string is unresolved.
std::vector<Candidate> optimize_prediction(const std::string& raw,
                                           const std::set<std::string>& context_med_ids,
                                           const FuzzyIndex& index,
                                           const std::vector<AssociationRule>& rules,
                                           const OptimizerConfig& cfg);

}  // namespace rx
