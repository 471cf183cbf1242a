#pragma once

// Seeded property and oracle suites shared by the tests, the `corpus`
// subcommand and the acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hgl/encoding.hpp"
#include "hgl/grammar.hpp"
#include "hgl/ht.hpp"
#include "hgl/prover.hpp"
#include "hgl/semantics.hpp"

namespace hgl {

struct SuiteReport {
    std::string name;
    long cases = 0;
    long failures = 0;
    long unknown = 0;  // undecided cases (budget)
    double max_seconds = 0;
    std::vector<std::string> notes;  // first few failure descriptions

    bool ok() const { return failures == 0; }
    void fail(const std::string& what);
    std::string summary() const;
};

// Per-case generator: deterministic in (seed, index).
std::mt19937_64 case_rng(std::uint64_t seed, long index);

// ---- hypergraph algebra ----

Hypergraph random_hypergraph(std::mt19937_64& rng, int max_nodes, int max_edges,
                             const std::vector<Symbol>& ext_pool, bool injective_ext);
// Parallel composition associativity and commutativity, K0 unit, total
// substitution composition, quotient by the empty relation, replacement
// type and size arithmetic. One report per law.
std::vector<SuiteReport> algebra_suite(long n, std::uint64_t seed);

// ---- logic ----

// Shape of generated formulas: predicates p<family>/2, q<family>/2,
// r<family>/1 over `vars`.
struct FormulaShape {
    std::string family;
    std::vector<Symbol> vars{"x0", "x1", "x2"};
    bool quantifiers = true;
    bool negative = true;  // ⊸ and ∀ in random_formula
};

// Derivable by construction: built upward from axioms with random rules.
Sequent random_derivable_sequent(std::mt19937_64& rng, int depth, const FormulaShape& shape = {});
// Derivable sequent with `anchor` as the first antecedent formula.
Sequent random_derivable_sequent_with(std::mt19937_64& rng, int depth, const Formula& anchor,
                                      const FormulaShape& shape = {});
Formula random_formula(std::mt19937_64& rng, int depth, const FormulaShape& shape = {});
// Changes one predicate or argument; usually breaks derivability.
Sequent mutate_sequent(std::mt19937_64& rng, const Sequent& s);
// Invertible normalization preserves derivability, cut composition of
// derivable pairs, splitting over disjoint predicate families.
std::vector<SuiteReport> logic_suite(long n, std::uint64_t seed);

// ---- rule-multiset derivations versus the prover ----

struct OracleInstance {
    Hypergraph from, to;
    std::vector<HtRule> reusable, once;
    int max_steps = 6;
    bool planted = false;  // `to` came from an actual derivation
};

struct OracleOutcome {
    Verdict::Kind prover = Verdict::NotDerivable;
    bool found = false;  // ht-engine verdict
    double seconds = 0;

    bool decided() const { return prover != Verdict::BudgetExhausted; }
    bool agree() const { return !decided() || (prover == Verdict::Derivable) == found; }
};

// Instances within 5 nodes, 4 edges, two rules of each kind; every rule
// grows the graph, so max_steps covers every derivation.
OracleInstance random_oracle_instance(std::mt19937_64& rng);
OracleOutcome run_oracle_instance(const OracleInstance& inst, long budget = 200000);
SuiteReport derivation_oracle_suite(long n, std::uint64_t seed, int jobs = 1, long budget = 200000);

// ---- grammars built from systems ----

// A -> a | a A over string graphs: the language sg(a^n), n >= 1.
HtSystem toy_string_system();
// Rooted trees: T -> c | b T | d T T, with unary c and ternary d.
HtSystem toy_tree_system();
// Compares grammar membership with enumerate_language on every terminal
// graph of the system's external type up to size_bound.
SuiteReport grammar_agreement(const std::string& name, const HtSystem& sys, const HypergraphGrammar& g,
                              std::size_t size_bound, int step_bound, int jobs = 1);

// Intersection membership against the conjunction of both memberships,
// including a two-grammar description of (a^n b^n)^n.
SuiteReport intersection_suite(int jobs = 1);
// String/hypergraph grammar converters on words up to length 4.
SuiteReport converter_suite();

// ---- hypergraph language models ----

// Labels a {1, 2} and b {1}, window {x0, x1}, cap 2.
BoundedUniverse small_universe();
// Random atom values for p, q, r over the window, closed under substitution.
Valuation random_valuation(std::mt19937_64& rng, const BoundedUniverse& u);
// Per valuation: connective clauses on random formulas, the substitution
// clause on random ⊸/∀-free formulas, residuation on random triples; then
// quantifier-free derivable sequents must be true in every valuation. The
// substitution clause on formulas with ⊸ or ∀ is only counted in the notes
// of the last report: the finite window does not preserve it.
std::vector<SuiteReport> semantics_suite(long valuations, long sequents, std::uint64_t seed);
// Equality and isolated-node removal for canonical hypergraphs, exhaustive
// over a fixed formula pool and a three-variable window.
std::vector<SuiteReport> canonical_hypergraph_suite();

// ---- worked examples ----

// One report per bundled scenario, reading the files under data_dir, plus a
// 20-instance derivation oracle batch.
std::vector<SuiteReport> worked_examples_suite(const std::string& data_dir);

// Runs f(i) for i in [0, n) on `jobs` threads.
void parallel_for(long n, int jobs, const std::function<void(long)>& f);

}  // namespace hgl
