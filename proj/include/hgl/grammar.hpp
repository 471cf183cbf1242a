#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hgl/formula.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/prover.hpp"

namespace hgl {

// Word over a string grammar's alphabet.
using Word = std::vector<Symbol>;
Word word_of(const std::string& letters);  // one symbol per character
Word split_word(const std::string& text);  // whitespace-separated when spaces occur, else per character

struct StringGrammar {
    Logic logic = Logic::MILL1;
    SymbolSet alphabet;
    Formula start;
    std::map<Symbol, std::vector<Formula>> lexicon;

    // Free variables of start and lexicon within {s, t}; arities consistent.
    void validate() const;
};

struct HypergraphGrammar {
    Logic logic = Logic::MILL1;
    Alphabet terminals;
    SymbolSet ext_type;  // X
    Formula start;
    std::map<Symbol, std::vector<Formula>> lexicon;
    std::vector<Formula> node_lexicon;  // entries for •, free variables within {x•}
    // Symbolic lexicon extension: every edge and node entry may additionally
    // carry up to `pool_slots` formulas from `pool` (tensored on). Membership
    // searches the pooled multiset directly instead of expanding entries.
    std::vector<Formula> pool;
    int pool_slots = 0;

    void validate() const;
};

using Grammar = std::variant<StringGrammar, HypergraphGrammar>;

struct MembershipWitness {
    std::map<Symbol, Formula> edge_choice;  // edge id (or letter position "x<i>") -> entry
    std::map<Symbol, Formula> node_choice;
    Sequent sequent;
    ProofTree proof;
};

struct Membership {
    enum Outcome { Accepted, Rejected, Unknown };
    Outcome outcome = Rejected;
    std::optional<MembershipWitness> witness;
    long candidates = 0;  // lexicon assignments handed to the prover
};

const char* to_string(Membership::Outcome o);

struct MemberOptions {
    long budget = 200000;  // focusing decisions per ILL1 prover call
    bool want_witness = true;
    // Drop node formulas entirely (negative control for node assignments).
    bool ignore_nodes = false;
    // When every position's entries form a product over disjoint predicate
    // families, search each family on its own and prove the combination.
    bool split_families = true;
};

Membership accepts_string(const StringGrammar& g, const Word& w, MemberOptions opts = {});
Membership accepts_hypergraph(const HypergraphGrammar& g, const Hypergraph& h, MemberOptions opts = {});
bool string_language_member(const HypergraphGrammar& g, const Word& w, MemberOptions opts = {});

// The sequent of a fixed lexicon assignment: edge formulas in edge-id order,
// then node formulas in node order.
Sequent membership_sequent(const HypergraphGrammar& g, const Hypergraph& h,
                           const std::map<Symbol, Formula>& edge_choice,
                           const std::map<Symbol, Formula>& node_choice);

// .gram files
Grammar parse_gram(const std::string& text);
std::string render_gram(const Grammar& g);

}  // namespace hgl
