#include "hgl/symbol.hpp"

#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace hgl {

namespace {

struct Table {
    std::mutex mu;
    std::unordered_map<std::string, std::unique_ptr<Symbol::Entry>> entries;
    std::uint32_t next = 1;
};

Table& table() {
    static Table t;
    return t;
}

const std::string& empty_name() {
    static const std::string s;
    return s;
}

}  // namespace

Symbol::Symbol(std::string_view name) {
    Table& t = table();
    std::lock_guard lock(t.mu);
    auto it = t.entries.find(std::string(name));
    if (it != t.entries.end()) {
        e_ = it->second.get();
        return;
    }
    auto entry = std::make_unique<Entry>();
    entry->name = std::string(name);
    entry->id = t.next++;
    entry->kind = 0;
    entry->index = -1;
    if (name.size() > 1 && (name[0] == '?' || name[0] == '#')) {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
            digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
        if (digits) {
            entry->kind = name[0];
            entry->index = std::stoi(std::string(name.substr(1)));
        }
    }
    e_ = entry.get();
    t.entries.emplace(entry->name, std::move(entry));
}

const std::string& Symbol::str() const { return e_ ? e_->name : empty_name(); }

int natural_compare(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t i0 = i, j0 = j;
            while (i0 < a.size() && a[i0] == '0') ++i0;
            while (j0 < b.size() && b[j0] == '0') ++j0;
            std::size_t i1 = i0, j1 = j0;
            while (i1 < a.size() && std::isdigit(static_cast<unsigned char>(a[i1]))) ++i1;
            while (j1 < b.size() && std::isdigit(static_cast<unsigned char>(b[j1]))) ++j1;
            if (i1 - i0 != j1 - j0) return (i1 - i0) < (j1 - j0) ? -1 : 1;
            for (std::size_t k = 0; k < i1 - i0; ++k)
                if (a[i0 + k] != b[j0 + k]) return a[i0 + k] < b[j0 + k] ? -1 : 1;
            // equal value: fewer leading zeros first
            if (i1 - i != j1 - j) return (i1 - i) < (j1 - j) ? -1 : 1;
            i = i1;
            j = j1;
            continue;
        }
        if (a[i] != b[j])
            return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]) ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return 0;
}

bool operator<(Symbol a, Symbol b) {
    if (a.e_ == b.e_) return false;
    return natural_compare(a.str(), b.str()) < 0;
}

}  // namespace hgl
