#include "rx/predict.hpp"

#include <algorithm>

#include "rx/error.hpp"

namespace rx {

void OptimizerConfig::validate() const {
    if (min_support <= 0.0 || min_support > 1.0)
        throw InvalidArgument("optimizer: min_support must be in (0,1]");
    if (min_confidence < 0.0 || min_confidence > 1.0)
        throw InvalidArgument("optimizer: min_confidence must be in [0,1]");
    if (assoc_weight < 0.0)
        throw InvalidArgument("optimizer: assoc_weight must be >= 0");
}

std::vector<Candidate> optimize_prediction(const std::string& raw,
                                           const std::set<std::string>& context_med_ids,
                                           const FuzzyIndex& index,
                                           const std::vector<AssociationRule>& rules,
                                           const OptimizerConfig& cfg) {
    if (raw.empty()) throw InvalidArgument("optimize_prediction: empty raw string");

    std::vector<Candidate> candidates = index.search(raw, cfg.max_dist);
    const MedicineDb& db = index.db();

    for (Candidate& c : candidates) {
        const std::string& id = db.entry(c.entry_index).id;
        double best_conf = 0.0;
        for (const AssociationRule& r : rules) {
            if (r.consequent_id != id) continue;
            const bool applies = std::all_of(
                r.antecedent_ids.begin(), r.antecedent_ids.end(),
                [&](const std::string& a) { return context_med_ids.count(a) != 0; });
            if (applies) best_conf = std::max(best_conf, r.confidence);
        }
        c.score = (static_cast<double>(cfg.max_dist) - static_cast<double>(c.distance)) +
                  cfg.assoc_weight * best_conf;
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const Candidate& a, const Candidate& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.distance != b.distance) return a.distance < b.distance;
                         return db.entry(a.entry_index).name < db.entry(b.entry_index).name;
                     });
    return candidates;
}

}  // namespace rx
