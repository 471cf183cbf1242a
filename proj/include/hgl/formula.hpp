#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hgl/hypergraph.hpp"

namespace hgl {

enum class Op { Atom, Tensor, Lolli, Exists, Forall, Bang };

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct FNode {
    Op op;
    Symbol sym;                 // predicate for atoms, bound variable for binders
    std::vector<Symbol> args;   // atom arguments
    Formula a, b;               // operands; binders and ! use `a`
};

// Reserved names.
Symbol nu_pred();         // node predicate ν
Symbol x_dot();           // x• (node-lexicon variable)
Symbol xi(int i);         // ξi placeholders
bool is_reserved_variable(Symbol v);

Formula atom(Symbol pred, std::vector<Symbol> args = {});
Formula tensor(Formula a, Formula b);
Formula lolli(Formula a, Formula b);
Formula exists(Symbol v, Formula body);
Formula forall(Symbol v, Formula body);
Formula exists_all(const std::vector<Symbol>& vs, Formula body);
Formula forall_all(const std::vector<Symbol>& vs, Formula body);
Formula bang(Formula a);
// Left-associated big tensor; throws Error on an empty list.
Formula tensor_all(const std::vector<Formula>& fs);

inline bool is_atom(const Formula& f) { return f->op == Op::Atom; }
bool has_bang(const Formula& f);
bool has_quantifier(const Formula& f);
void collect_predicates(const Formula& f, std::map<Symbol, std::size_t>& arity);

SymbolSet free_vars(const Formula& f);
// Free-variable occurrences, left to right.
std::vector<Symbol> free_occurrences(const Formula& f);
// Capture-avoiding: clashing binders get primes appended.
Formula apply_subst(const Formula& f, const SymbolMap& h);
// i-th free occurrence (left to right) becomes ξi.
Formula circ(const Formula& f);

// Alpha-invariant key; alpha_eq(a, b) iff alpha_key(a) == alpha_key(b).
std::string alpha_key(const Formula& f);
bool alpha_eq(const Formula& a, const Formula& b);
// Canonical order: by alpha_key.
bool formula_less(const Formula& a, const Formula& b);

std::string render(const Formula& f, bool unicode = false);

struct Sequent {
    std::vector<Formula> ante;  // multiset
    Formula succ;

    Sequent() = default;
    Sequent(std::vector<Formula> a, Formula s);
    // Sorts the antecedent by the canonical order.
    void normalize();
};

bool sequent_alpha_eq(const Sequent& a, const Sequent& b);
std::string render(const Sequent& s, bool unicode = false);
SymbolSet free_vars(const Sequent& s);
Sequent apply_subst(const Sequent& s, const SymbolMap& h);

struct ParseOptions {
    bool allow_reserved_binders = false;
};

class Lexer;
Formula parse_formula(const std::string& text, ParseOptions opts = {});
Formula parse_formula(Lexer& lx, ParseOptions opts = {});
Sequent parse_sequent(const std::string& text, ParseOptions opts = {});
// Throws Error if some predicate occurs with two arities.
void check_arities(const std::vector<Formula>& fs);

}  // namespace hgl
