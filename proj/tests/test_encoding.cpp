#include "doctest.h"
#include "hgl/encoding.hpp"
#include "test_util.hpp"

using namespace hgl;
using testutil::load_hgr;
using testutil::read_data;
using testutil::sg;

namespace {

Formula F(const std::string& s, ParseOptions o = {}) { return parse_formula(s, o); }

std::vector<std::string> rendered(const std::vector<Formula>& fs) {
    std::vector<std::string> out;
    for (const auto& f : fs) out.push_back(render(f));
    return out;
}

}  // namespace

TEST_CASE("diagrams") {
    Hypergraph h = load_hgr("fig2_right.hgr");
    SymbolMap m{{"n", "v1"}, {"m", "v2"}, {"p", "v3"}, {"q", "v4"}};
    Hypergraph r = rename_nodes(h, m);
    Alphabet order;
    order.add("C", {"1", "2", "3"});
    CHECK(rendered(diagram(r, order)) == std::vector<std::string>{"D(v3,v4)", "C(v1,v3,v4)", "X(v4,v3)", "Y(v4)",
                                                                  "nu(v1)", "nu(v2)", "nu(v3)", "nu(v4)"});
    Hypergraph single;
    single.nodes = {"v"};
    CHECK(rendered(diagram(single)) == std::vector<std::string>{"nu(v)"});
    CHECK(rendered(diagram(sg("a"))) == std::vector<std::string>{"a(v0,v1)", "nu(v0)", "nu(v1)"});
    single.ext = {{"x", "v"}};
    CHECK(alpha_eq(diagram_formula(single), F("nu(v)")));
    CHECK(alpha_eq(diagram_formula(sg("ab")), F("ex v1. a(v0,v1) * b(v1,v2) * nu(v0) * nu(v1) * nu(v2)")));
    CHECK_THROWS_AS(diagram_formula(empty_hypergraph()), Error);
}

TEST_CASE("rule formulas") {
    HtRule p = parse_htr(read_data("example6.htr")).at(0);
    EncodedRule e = rule_formula(p);
    CHECK(free_vars(e.formula).empty());
    CHECK(alpha_eq(e.formula, F(read_data("example6_fm.txt"))));
    CHECK(e.chi == SymbolMap{{"u1", "v3"}, {"u3", "v4"}});

    HtRule id{"id", handle("a", {"s", "t"}), handle("a", {"s", "t"})};
    CHECK(alpha_eq(rule_formula(id).formula, F("fa s. fa t. a(s,t) * nu(s) * nu(t) -o a(s,t) * nu(s) * nu(t)",
                                               ParseOptions{true})));

    // The displayed string-rule formula reads lhs -o rhs; the rule encoding
    // reads rhs -o lhs, so the display is the encoding of the reversed rule.
    HtRule ab = parse_htr(read_data("string_rule.htr")).at(0);
    Formula shown = F(read_data("string_rule_fm.txt"));
    HtRule reversed{"rev", ab.rhs, ab.lhs};
    CHECK(alpha_eq(rule_formula(reversed).formula, shown));
    CHECK(!alpha_eq(rule_formula(ab).formula, shown));
    Formula fwd = rule_formula(ab).formula;
    CHECK(fwd->a->a->op == Op::Lolli);
}

TEST_CASE("derivation sequent for one rule") {
    HtRule r = parse_htr(read_data("fig2_rule.htr")).at(0);
    Sequent s = derivation_sequent(load_hgr("fig2_left.hgr"), load_hgr("fig2_right.hgr"), {}, {r});
    CHECK(prove_mill1(s).derivable());
    Sequent bad = derivation_sequent(load_hgr("fig2_left.hgr"), load_hgr("fig2_left.hgr"), {}, {r});
    CHECK(!prove_mill1(bad).derivable());
    Sequent reusable = derivation_sequent(load_hgr("fig2_left.hgr"), load_hgr("fig2_right.hgr"), {r}, {});
    CHECK(prove_ill1(reusable).derivable());
}

TEST_CASE("grammars from systems") {
    HtSystem sys;
    sys.nonterminals.add("A", {"s", "t"});
    sys.nonterminals.add("B", {"s", "t"});
    sys.terminals.add("C", {"1", "2", "3"});
    sys.terminals.add("D", {"s", "t"});
    sys.terminals.add("X", {"s", "t"});
    sys.terminals.add("Y", {"s"});
    sys.start = load_hgr("fig2_left.hgr");
    sys.rules = parse_htr(read_data("fig2_rule.htr"));
    HypergraphGrammar g3 = ill1_grammar_of(sys);
    int bangs = 0;
    std::function<void(const Formula&)> count = [&](const Formula& f) {
        if (!f) return;
        if (f->op == Op::Bang) ++bangs;
        count(f->a);
        count(f->b);
    };
    count(g3.start);
    CHECK(bangs == 1);
    CHECK(accepts_hypergraph(g3, load_hgr("fig2_right.hgr")).outcome == Membership::Accepted);

    HypergraphGrammar g4 = mill1_grammar_of(sys, 1);
    CHECK(g4.pool.size() == 1);
    auto m = accepts_hypergraph(g4, load_hgr("fig2_right.hgr"));
    REQUIRE(m.outcome == Membership::Accepted);
    CHECK(check_proof(m.witness->proof, m.witness->sequent));
    CHECK(accepts_hypergraph(mill1_grammar_of(sys, 0), load_hgr("fig2_right.hgr")).outcome ==
          Membership::Rejected);

    HtSystem none = sys;
    none.rules.clear();
    none.terminals.add("A", {"s", "t"});
    none.terminals.add("B", {"s", "t"});
    none.nonterminals = {};
    HypergraphGrammar g0 = ill1_grammar_of(none);
    CHECK(g0.start->op == Op::Exists);
    CHECK(accepts_hypergraph(g0, load_hgr("fig2_left.hgr")).outcome == Membership::Accepted);
}

TEST_CASE("string rewriting systems") {
    HtSystem sys = srs_to_hts({{"S", "aSb"}, {"S", "ab"}}, "S", "ab");
    CHECK(sys.rules.size() == 2);
    auto lang = enumerate_language(sys, 17, 6);
    std::set<std::string> want;
    for (std::string w : {"ab", "aabb", "aaabbb", "aaaabbbb"}) want.insert(canonical_form(sg(w)));
    std::set<std::string> got;
    for (const auto& [k, h] : lang) got.insert(k);
    CHECK(got == want);
    CHECK_THROWS_AS(srs_to_hts({{"S", ""}}, "S", "ab"), Error);
}

TEST_CASE("grammar converters") {
    StringGrammar g = std::get<StringGrammar>(parse_gram(read_data("ex1.gram")));
    HypergraphGrammar h = string_to_hyper_grammar(g);
    StringGrammar back = hyper_to_string_grammar(h);
    for (std::string w : {"a", "aa", "aaa", "aaaa"}) {
        bool in = accepts_string(g, word_of(w)).outcome == Membership::Accepted;
        CHECK(string_language_member(h, word_of(w)) == in);
        CHECK((accepts_string(back, word_of(w)).outcome == Membership::Accepted) == in);
    }
    Symbol mu = border_predicate(h);
    Formula eps = apply_subst(back.start, {{"s", "x0"}, {"t", "x0"}});
    CHECK(!prove_mill1(Sequent({}, eps)).derivable());
    CHECK(mu.str() == "mu");
}

TEST_CASE("intersection") {
    StringGrammar g = std::get<StringGrammar>(parse_gram(read_data("ex1.gram")));
    HypergraphGrammar h = string_to_hyper_grammar(g);
    HypergraphGrammar hh = intersection_grammar(h, h);
    for (std::string w : {"a", "aa", "aaa"})
        CHECK(string_language_member(hh, word_of(w)) == string_language_member(h, word_of(w)));
    HypergraphGrammar other = h;
    other.ext_type = {"s"};
    HypergraphGrammar e = intersection_grammar(h, other);
    CHECK(!string_language_member(e, word_of("aa")));
    CHECK(alpha_eq_ac(F("a * (b * c)"), F("c * b * a")));
    CHECK(!alpha_eq_ac(F("a * b"), F("a * a")));
}
