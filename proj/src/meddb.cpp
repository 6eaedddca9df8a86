#include "rx/meddb.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rx/unicode.hpp"

namespace rx {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string folded_key(const std::string& name) {
    return uni::fold_case(uni::nfc(name));
}

}  // namespace

const MedicineEntry* MedicineDb::by_id(const std::string& id) const {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) return nullptr;
    return &entries_[it->second];
}

std::vector<std::size_t> MedicineDb::by_name(const std::string& name) const {
    auto it = name_index_.find(folded_key(name));
    if (it == name_index_.end()) return {};
    return it->second;
}

void MedicineDb::add(MedicineEntry entry) {
    entry.name = uni::nfc(entry.name);
    if (entry.name.empty()) throw ParseError("medicine name must be non-empty");
    if (id_index_.count(entry.id)) throw DuplicateId(entry.id, 0);
    const std::size_t idx = entries_.size();
    id_index_.emplace(entry.id, idx);
    name_index_[folded_key(entry.name)].push_back(idx);
    entries_.push_back(std::move(entry));
}

MedicineDb MedicineDb::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open medicine db " + path);
    MedicineDb db;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!uni::is_valid_utf8(line))
            throw ParseError("medicine db: invalid UTF-8", lineno);
        auto fields = split_tabs(line);
        if (fields.size() != 4)
            throw ParseError("medicine db: expected 4 tab-separated columns, got " +
                                 std::to_string(fields.size()),
                             lineno);
        if (fields[0].empty())
            throw ParseError("medicine db: empty id", lineno);
        if (fields[1].empty())
            throw ParseError("medicine db: empty name", lineno);
        if (db.id_index_.count(fields[0])) throw DuplicateId(fields[0], lineno);
        db.add({fields[0], fields[1], fields[2], fields[3]});
    }
    return db;
}

void MedicineDb::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write medicine db " + path);
    for (const auto& e : entries_)
        out << e.id << '\t' << e.name << '\t' << e.lang << '\t' << e.description
            << '\n';
}

TransactionDb TransactionDb::load(const std::string& path, const MedicineDb& db) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open transactions " + path);
    TransactionDb tx;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!uni::is_valid_utf8(line))
            throw ParseError("transactions: invalid UTF-8", lineno);
        Transaction t;
        for (const auto& id : split_tabs(line)) {
            if (id.empty()) continue;
            const MedicineEntry* e = db.by_id(id);
            if (!e) throw UnknownId(id, lineno);
            t.entry_indices.push_back(
                static_cast<std::size_t>(e - db.entries().data()));
        }
        std::sort(t.entry_indices.begin(), t.entry_indices.end());
        t.entry_indices.erase(
            std::unique(t.entry_indices.begin(), t.entry_indices.end()),
            t.entry_indices.end());
        if (!t.entry_indices.empty()) tx.transactions.push_back(std::move(t));
    }
    return tx;
}

}  // namespace rx
