#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace hgl {

// Interned name. Selectors, logic variables, node ids, edge ids, labels and
// predicate symbols all live in this one space.
class Symbol {
public:
    struct Entry {
        std::string name;
        std::uint32_t id;
        char kind;   // '?' metavariable, '#' eigenvariable, 0 otherwise
        int index;   // numeric suffix for '?'/'#' names
    };

    Symbol() = default;
    explicit Symbol(std::string_view name);
    Symbol(const char* name) : Symbol(std::string_view(name)) {}
    Symbol(const std::string& name) : Symbol(std::string_view(name)) {}

    const std::string& str() const;
    bool empty() const { return e_ == nullptr || e_->name.empty(); }
    std::uint32_t id() const { return e_ ? e_->id : 0; }
    char kind() const { return e_ ? e_->kind : 0; }
    int index() const { return e_ ? e_->index : -1; }
    bool is_meta() const { return kind() == '?'; }
    bool is_eigen() const { return kind() == '#'; }

    friend bool operator==(Symbol a, Symbol b) { return a.e_ == b.e_; }
    // Natural order on names: digit runs compare numerically.
    friend bool operator<(Symbol a, Symbol b);
    friend bool operator>(Symbol a, Symbol b) { return b < a; }
    friend bool operator<=(Symbol a, Symbol b) { return !(b < a); }
    friend bool operator>=(Symbol a, Symbol b) { return !(a < b); }

    const Entry* entry() const { return e_; }

private:
    const Entry* e_ = nullptr;
};

int natural_compare(std::string_view a, std::string_view b);

inline std::ostream& operator<<(std::ostream& os, Symbol s) { return os << s.str(); }

}  // namespace hgl

template <>
struct std::hash<hgl::Symbol> {
    std::size_t operator()(hgl::Symbol s) const noexcept {
        return std::hash<const void*>{}(s.entry());
    }
};
