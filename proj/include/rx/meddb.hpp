#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "rx/error.hpp"

namespace rx {

struct DuplicateId : Error {
    DuplicateId(const std::string& id, std::size_t line)
        : Error("duplicate medicine id '" + id + "' on line " +
                std::to_string(line)),
          id(id),
          line(line) {}
    std::string id;
    std::size_t line;
};

struct UnknownId : Error {
    UnknownId(const std::string& id, std::size_t line)
        : Error("unknown medicine id '" + id + "' on line " +
                std::to_string(line)),
          id(id),
          line(line) {}
    std::string id;
    std::size_t line;
};

struct MedicineEntry {
    std::string id;
    std::string name;  // NFC-normalized UTF-8
    std::string lang;  // BCP-47 tag
    std::string description;
};

// Pharmaceutical lexicon loaded from a 4-column TSV. Names are stored
// NFC-normalized; lookups work on the case-folded form too.
class MedicineDb {
public:
    const std::vector<MedicineEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const MedicineEntry& entry(std::size_t i) const { return entries_.at(i); }

    const MedicineEntry* by_id(const std::string& id) const;
    // All entries whose case-folded NFC name matches the query's.
    std::vector<std::size_t> by_name(const std::string& name) const;

    void add(MedicineEntry entry);  // throws DuplicateId (line 0)

    static MedicineDb load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::vector<MedicineEntry> entries_;
    std::unordered_map<std::string, std::size_t> id_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> name_index_;
};

// One prescription: the set of medicines that appeared together.
struct Transaction {
    std::vector<std::size_t> entry_indices;  // sorted, unique
};

struct TransactionDb {
    std::vector<Transaction> transactions;

    // UTF-8 text, one transaction per line, TAB-separated medicine ids.
    // Duplicate ids within a line collapse; unknown ids are an error.
    static TransactionDb load(const std::string& path, const MedicineDb& db);
};

}  // namespace rx
