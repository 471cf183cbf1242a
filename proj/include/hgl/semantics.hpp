#pragma once

// Hypergraph language models over a finite window of variables.
//
// Formulas are read as sets of abstract hypergraphs: ⊗ is parallel
// composition, ⊸ its residual, quantifiers range over the window. Only
// hypergraphs with |E| + |internal nodes| <= cap are stored; since that
// measure adds up under parallel composition, truncation commutes with ⊗ and
// residuation stays exact. A ⊸ B ranges over the stored hypergraphs only,
// and compositions that leave the cap are not tested.

#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "hgl/formula.hpp"
#include "hgl/hypergraph.hpp"

namespace hgl {

struct BoundedUniverse {
    Alphabet alphabet;
    std::vector<Symbol> window;
    std::size_t cap = 2;

    static std::size_t measure(const Hypergraph& h);  // |E| + |internal nodes|
    bool contains(const Hypergraph& h) const;
    // One representative per isomorphism class, K0 included.
    std::vector<Hypergraph> members() const;
};

using HypergraphLanguage = std::set<std::string>;  // canonical forms

class Valuation {
public:
    explicit Valuation(BoundedUniverse u);
    Valuation(const Valuation& other);

    const BoundedUniverse& universe() const { return u_; }
    // Graphs outside the universe are rejected with Error.
    void set_atom(const Formula& atom, const std::vector<Hypergraph>& graphs);
    void add_to_atom(const Formula& atom, const Hypergraph& h);
    std::vector<Formula> atoms() const;
    // Adds sub_h(u(A)) to u(A[h]) for every atom A and every total h on the
    // window, until nothing changes.
    void close_under_substitution();

    // Memoized; throws Error on `!` or on free variables outside the window.
    const HypergraphLanguage& eval(const Formula& f) const;
    const Hypergraph& graph(const std::string& key) const;
    std::string intern(const Hypergraph& h) const;  // canonical form, remembered
    const std::vector<std::string>& member_keys() const;

private:
    BoundedUniverse u_;
    std::map<std::string, HypergraphLanguage> atoms_;  // alpha key of the atom
    std::map<std::string, Formula> atom_formulas_;
    mutable std::mutex mu_;
    mutable std::map<std::string, Hypergraph> graphs_;
    mutable std::map<std::string, HypergraphLanguage> memo_;
    mutable std::vector<std::string> members_;
    mutable bool have_members_ = false;

    HypergraphLanguage compute(const Formula& f) const;
};

// {canonical(H1 // H2) | Hi in Li} restricted to the universe.
HypergraphLanguage compose(const Valuation& v, const HypergraphLanguage& a, const HypergraphLanguage& b);
// u(A1) // ... // u(An) ⊆ u(B); an empty antecedent asks for K0 ∈ u(B).
bool sequent_true(const Valuation& v, const Sequent& s);

// Every total map window -> window.
std::vector<SymbolMap> total_maps(const std::vector<Symbol>& window);

struct ModelReport {
    long checks = 0;
    std::vector<std::string> violations;  // clause number and formula

    bool ok() const { return violations.empty(); }
};
// Clause 1 (sub_h(u(A)) ⊆ u(A[h]) for total h) on every sample, clauses 2-5
// recomputed directly on every compound subformula of the samples.
ModelReport check_model_axioms(const Valuation& v, const std::vector<Formula>& samples);
// Same, clause 1 only.
ModelReport check_substitution_clause(const Valuation& v, const std::vector<Formula>& samples);
// Same, clauses 2-5 only.
ModelReport check_connective_clauses(const Valuation& v, const std::vector<Formula>& samples);

// The hypergraph H^{X;Y}_{Γ;A}: nodes FVar(Γ) ∪ X, one edge per formula of Γ
// labeled by its ξ-form, external nodes (V ∩ FVar(A)) ∪ Y named by
// themselves. Throws Error unless Y ⊆ FVar(Γ) ∪ X.
Hypergraph canonical_hypergraph(const std::vector<Formula>& gamma, const Formula& a, const SymbolSet& x,
                                const SymbolSet& y);
// Edge label used for a formula in canonical hypergraphs.
Symbol circ_label(const Formula& f);

// Valuation files: `window { x, y }`, `cap N`, `type LABEL { sels }` lines and
// `atom p(x,y) : { { hgr statements }, ... }` entries.
Valuation parse_valuation(const std::string& text);
std::string render_valuation(const Valuation& v);

}  // namespace hgl
