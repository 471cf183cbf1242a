#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hgl/error.hpp"
#include "hgl/symbol.hpp"

namespace hgl {

class Lexer;

using SymbolMap = std::map<Symbol, Symbol>;
using SymbolSet = std::set<Symbol>;

struct Edge {
    Symbol label;
    SymbolMap att;  // selector -> node; dom(att) is the edge type

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Concrete hypergraph. Abstract (up-to-isomorphism) comparisons go through
// is_isomorphic / canonical_form.
struct Hypergraph {
    SymbolSet nodes;
    std::map<Symbol, Edge> edges;  // edge id -> edge
    SymbolMap ext;                 // partial selector -> node

    SymbolSet type() const;
    std::size_t size() const { return nodes.size() + edges.size(); }
    bool ext_injective() const;
    // Throws Error when attachments or ext point outside the node set.
    void validate() const;

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

// Label -> ordered selector list. The order fixes predicate argument order
// when hypergraphs are read as formulas.
struct Alphabet {
    std::map<Symbol, std::vector<Symbol>> types;

    bool contains(Symbol label) const { return types.count(label) != 0; }
    const std::vector<Symbol>& type_of(Symbol label) const;
    void add(Symbol label, std::vector<Symbol> selectors);
    // Selector order for an edge: the alphabet's order if known, else sorted.
    std::vector<Symbol> selectors_of(const Edge& e) const;
};

struct Isomorphism {
    SymbolMap nodes;
    SymbolMap edges;
};

Hypergraph empty_hypergraph();
Hypergraph string_graph(const std::vector<Symbol>& word);
Hypergraph handle(Symbol label, const std::vector<Symbol>& type);
Hypergraph disjoint_union(const Hypergraph& h1, const Hypergraph& h2);
Hypergraph quotient(const Hypergraph& h, const std::vector<std::pair<Symbol, Symbol>>& rel);
Hypergraph replace(const Hypergraph& h, Symbol edge, const Hypergraph& k);
Hypergraph parallel_composition(const Hypergraph& h1, const Hypergraph& h2);
Hypergraph substitute(const Hypergraph& h, const SymbolMap& sub);
std::optional<Isomorphism> is_isomorphic(const Hypergraph& h1, const Hypergraph& h2);
bool check_isomorphism(const Hypergraph& h1, const Hypergraph& h2, const Isomorphism& iso);
std::string canonical_form(const Hypergraph& h);
inline std::size_t size(const Hypergraph& h) { return h.size(); }

// Helpers shared by the other modules.
Hypergraph rename_nodes(const Hypergraph& h, const SymbolMap& renaming);
Hypergraph remove_node(const Hypergraph& h, Symbol node);
// Fresh name "<prefix><n>" avoiding `used`, smallest n >= start.
Symbol fresh_symbol(const std::string& prefix, const SymbolSet& used, int start = 1);
// Every concrete hypergraph over `alphabet` with exactly the external type
// `ext_type` (ext injective or not per flag) and size <= bound, one per
// isomorphism class.
std::vector<Hypergraph> enumerate_hypergraphs(const Alphabet& alphabet,
                                              const std::vector<Symbol>& ext_type,
                                              std::size_t size_bound, bool injective_ext);

// .hgr text format
Hypergraph parse_hgr(const std::string& text, int first_line = 1);
// Reads node/edge/ext statements until a token that cannot start one. Used
// by formats that embed hypergraph blocks.
Hypergraph parse_hgr_statements(Lexer& lx);
std::string render_hgr(const Hypergraph& h);
std::string to_dot(const Hypergraph& h, const std::string& name = "H");

}  // namespace hgl
