#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hgl/hypergraph.hpp"

namespace hgl {

struct HtRule {
    std::string name;
    Hypergraph lhs, rhs;

    // Throws Error unless both ext maps are injective and the types agree.
    void validate() const;
};

struct HtSystem {
    Alphabet nonterminals, terminals;
    std::vector<HtRule> rules;
    Hypergraph start;

    Alphabet alphabet() const;  // N ∪ T
    bool is_terminal_graph(const Hypergraph& h) const;
    void validate() const;
};

// lhs node -> G node, lhs edge -> G edge.
struct Occurrence {
    SymbolMap nodes;
    SymbolMap edges;

    std::string str() const;
};

struct DerivationStep {
    HtRule rule;
    Occurrence occ;
    Hypergraph result;
};

struct Derivation {
    Hypergraph start;
    std::vector<DerivationStep> steps;

    const Hypergraph& result() const { return steps.empty() ? start : steps.back().result; }
    // Re-applies every step and compares with the stored results.
    bool replays() const;
};

std::vector<Occurrence> applicable_matches(const Hypergraph& g, const HtRule& r);
bool is_occurrence(const Hypergraph& g, const HtRule& r, const Occurrence& occ);
// Throws Error on a stale occurrence.
Hypergraph apply(const Hypergraph& g, const HtRule& r, const Occurrence& occ);

std::optional<Derivation> derives(const HtSystem& sys, const Hypergraph& target, int max_steps);
// Derivation from g to a graph isomorphic to target that uses every rule of
// `once` exactly once and rules of `reusable` freely.
std::optional<Derivation> derives_with_rule_multiset(const Hypergraph& g, const Hypergraph& target,
                                                     const std::vector<HtRule>& reusable,
                                                     const std::vector<HtRule>& once, int max_steps);
// Terminal graphs reachable within step_bound steps with size <= size_bound,
// keyed by canonical form.
std::map<std::string, Hypergraph> enumerate_language(const HtSystem& sys, std::size_t size_bound,
                                                     int step_bound);

// Linear-time system whose string-graph language encodes exact cover by
// 3-sets.
HtSystem np_complete_system();
// The string graph b w1 b ... b wm b c a x1 a y1 a z1 ... for an instance.
Hypergraph exact_cover_graph(const std::vector<std::string>& universe,
                             const std::vector<std::vector<std::string>>& triples);

// .htr: `rule NAME` headers, lhs statements, `=>`, rhs statements.
std::vector<HtRule> parse_htr(const std::string& text, const std::string& default_name = "r");
std::string render_htr(const std::vector<HtRule>& rules);
// .hts: `nonterminal`/`terminal` type lines, `start ... end`, `rule NAME
// ... => ... end` blocks and `include FILE.htr` lines (resolved against
// `base_dir`).
HtSystem parse_hts(const std::string& text, const std::string& base_dir = ".");
std::string render_hts(const HtSystem& sys);
std::string derivation_dot(const Derivation& d);

}  // namespace hgl
