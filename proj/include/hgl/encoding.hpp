#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hgl/formula.hpp"
#include "hgl/grammar.hpp"
#include "hgl/ht.hpp"

namespace hgl {

// Edge atoms in edge-id order, then ν(v) in node order. Argument order per
// edge follows `order` (alphabet order if the label is known, else sorted
// selectors).
std::vector<Formula> diagram(const Hypergraph& h, const Alphabet& order = {});
// ∃ over the non-external nodes (node order) of the left-associated tensor
// of the diagram. Throws Error on the empty hypergraph.
Formula diagram_formula(const Hypergraph& h, const Alphabet& order = {});

struct EncodedRule {
    HtRule rule;
    Formula formula;  // ∀u⃗ (D(rhs) ⊸ D(lhs)[χ])
    SymbolMap chi;    // ext_lhs(σ) -> ext_rhs(σ)
};
EncodedRule rule_formula(const HtRule& p, const Alphabet& order = {});

// {!fm(r) | r ∈ reusable}, {fm(r) | r ∈ once}, 𝒟(target) ⊢ D(source)[χ]
// with χ(ext_source(σ)) = ext_target(σ). Throws Error if the types differ.
Sequent derivation_sequent(const Hypergraph& source, const Hypergraph& target,
                           const std::vector<HtRule>& reusable, const std::vector<HtRule>& once,
                           const Alphabet& order = {});

// ILL1 grammar: start ⊗!fm(r) ⊸ D(S)[h_S], a ▷ a(σ⃗), • ▷ ν(x•).
HypergraphGrammar ill1_grammar_of(const HtSystem& sys);
// MILL1 grammar for a linear-time system with time constant c. The fm
// factors live in the grammar's pool with c slots per position.
HypergraphGrammar mill1_grammar_of(const HtSystem& sys, int c);

// Predicates of the two grammars are renamed apart (suffixes @1, @2). Returns
// a grammar with an empty lexicon when the external types differ.
HypergraphGrammar intersection_grammar(const HypergraphGrammar& g1, const HypergraphGrammar& g2);
StringGrammar intersection_grammar(const StringGrammar& g1, const StringGrammar& g2);

// Start S ⊗ (q ⊸ q), • ▷ q ⊸ q, lexicon unchanged; q is a fresh nullary
// predicate.
HypergraphGrammar string_to_hyper_grammar(const StringGrammar& g);
// Start μ(s) ⊗ S; each {s,t}-typed entry B yields the non-border entries
// B ⊗ C[t/x•] and the border entries B ⊗ μ(s) ⊗ C1[s/x•] ⊗ C2[t/x•].
StringGrammar hyper_to_string_grammar(const HypergraphGrammar& g);
// The predicate chosen for μ by hyper_to_string_grammar.
Symbol border_predicate(const HypergraphGrammar& g);

// Every rule α → β becomes sg(α) → sg(β) over {s,t}-typed labels; symbols
// are single characters. Nonterminals are the symbols outside `terminals`.
HtSystem srs_to_hts(const std::vector<std::pair<std::string, std::string>>& rules, const std::string& start,
                    const std::string& terminals);

// Alpha-equivalence modulo associativity and commutativity of ⊗.
bool alpha_eq_ac(const Formula& a, const Formula& b);

}  // namespace hgl
