#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hgl/formula.hpp"

namespace hgl {

// Two-sided sequent derivation. Rule names: ax, ⊗L, ⊗R, ⊸L, ⊸R, ∃L, ∃R,
// ∀L, ∀R, !-dereliction, !-contraction, !-weakening, !-promotion.
struct ProofTree {
    std::string rule;
    Sequent conclusion;
    std::vector<ProofTree> premises;
    Formula principal;  // null for ax
    Symbol witness;     // instantiation or eigenvariable, when the rule has one

    std::size_t size() const;
};

enum class Logic { MILL1, ILL1 };

struct SearchStats {
    long decides = 0;   // focusing decisions taken
    int use_bound = 0;  // last iterative-deepening bound on uses of !-formulas
};

struct Verdict {
    enum Kind { Derivable, NotDerivable, BudgetExhausted };
    Kind kind = NotDerivable;
    std::optional<ProofTree> proof;
    SearchStats stats;

    bool derivable() const { return kind == Derivable; }
};

const char* to_string(Verdict::Kind k);

// Applies ⊗L, ⊸R, ∃L and ∀R until none applies. Eigenvariables are z1, z2, ...
// avoiding the sequent's free variables.
Sequent invertible_normalize(const Sequent& s);

struct ProveOptions {
    bool want_proof = true;
    // Cap on the total number of uses of !-formulas (ILL1 only); -1 means none.
    int max_uses = -1;
};

// Complete for MILL1. Throws Error if `!` occurs.
Verdict prove_mill1(const Sequent& s, ProveOptions opts = {});
// Budget counts focusing decisions. Sequents without `!` go to prove_mill1.
Verdict prove_ill1(const Sequent& s, long budget = 10000, ProveOptions opts = {});
Verdict prove(const Sequent& s, Logic logic, long budget = 10000, ProveOptions opts = {});

bool check_proof(const ProofTree& t, const Sequent& s);
// Same as check_proof, with the reason for the first rejected node.
bool check_proof(const ProofTree& t, const Sequent& s, std::string& why);

std::string serialize(const ProofTree& t);

}  // namespace hgl
