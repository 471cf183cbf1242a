#include "doctest.h"
#include "hgl/semantics.hpp"
#include "hgl/suites.hpp"

using namespace hgl;

namespace {

Formula F(const std::string& s) { return parse_formula(s); }

BoundedUniverse universe(std::vector<Symbol> window, std::size_t cap = 2) {
    BoundedUniverse u;
    u.alphabet.add("a", {"1", "2"});
    u.alphabet.add("b", {"1"});
    u.window = std::move(window);
    u.cap = cap;
    return u;
}

// a-edge from ext x to ext y
Hypergraph a_edge(Symbol x, Symbol y) {
    return parse_hgr("node u w\nedge e a { 1=u, 2=w }\next { " + x.str() + "=u, " + y.str() + "=w }\n");
}

Hypergraph b_loop(Symbol x) { return parse_hgr("node u\nedge e b { 1=u }\next { " + x.str() + "=u }\n"); }

HypergraphLanguage keys(const Valuation& v, const std::vector<Hypergraph>& hs) {
    HypergraphLanguage out;
    for (const Hypergraph& h : hs) out.insert(v.intern(h));
    return out;
}

}  // namespace

TEST_CASE("measure and universe") {
    BoundedUniverse u = universe({"x", "y"});
    CHECK(BoundedUniverse::measure(empty_hypergraph()) == 0);
    CHECK(BoundedUniverse::measure(a_edge("x", "y")) == 1);
    Hypergraph internal = parse_hgr("node u\nedge e b { 1=u }\n");
    CHECK(BoundedUniverse::measure(internal) == 2);
    CHECK(u.contains(a_edge("x", "y")));
    CHECK_FALSE(u.contains(a_edge("x", "z")));
    Hypergraph c = parse_hgr("node u\nedge e c { 1=u }\next { x=u }\n");
    CHECK_FALSE(u.contains(c));
    auto members = u.members();
    std::set<std::string> distinct;
    for (const Hypergraph& h : members) {
        CHECK(u.contains(h));
        distinct.insert(canonical_form(h));
    }
    CHECK(distinct.size() == members.size());
    CHECK(distinct.count(canonical_form(empty_hypergraph())));
}

TEST_CASE("evaluation clauses on small languages") {
    Valuation v(universe({"x", "y"}));
    Hypergraph h1 = a_edge("x", "y"), h2 = b_loop("y");
    v.set_atom(F("p(x,y)"), {h1});
    v.set_atom(F("r(y)"), {h2});
    CHECK(v.eval(F("p(x,y) * r(y)")) == keys(v, {parallel_composition(h1, h2)}));
    // both ends fused on y: the b-loop sits on the target of the a-edge
    Hypergraph glued = parallel_composition(h1, h2);
    CHECK(glued.nodes.size() == 2);
    CHECK(glued.type() == SymbolSet{"x", "y"});

    v.set_atom(F("k(x)"), {empty_hypergraph()});
    CHECK(v.eval(F("k(x) -o p(x,y)")) == v.eval(F("p(x,y)")));
    CHECK(v.eval(F("k(x) * p(x,y)")) == v.eval(F("p(x,y)")));

    CHECK(sequent_true(v, parse_sequent("p(x,y) |- p(x,y)")));
    CHECK(sequent_true(v, parse_sequent("p(x,y), r(y) |- p(x,y) * r(y)")));
    CHECK(sequent_true(v, parse_sequent("|- k(x)")));
    CHECK_FALSE(sequent_true(v, parse_sequent("|- p(x,y)")));
    CHECK_FALSE(sequent_true(v, parse_sequent("p(x,y) |- r(y)")));

    CHECK_THROWS_AS(v.eval(F("p(x,z)")), Error);
    CHECK_THROWS_AS(v.eval(F("!p(x,y)")), Error);
    CHECK_THROWS_AS(v.add_to_atom(F("p(x,y)"), parse_hgr("node u\nedge e c { 1=u }\n")), Error);
}

TEST_CASE("quantifiers range over the window") {
    Valuation v(universe({"x", "y", "z"}, 1));
    v.set_atom(F("r(x)"), {b_loop("x")});
    v.set_atom(F("r(y)"), {b_loop("y"), empty_hypergraph()});
    v.set_atom(F("r(z)"), {empty_hypergraph(), b_loop("z")});
    HypergraphLanguage all;
    HypergraphLanguage meet = v.eval(F("r(x)"));
    for (const char* w : {"r(x)", "r(y)", "r(z)"}) {
        const auto& l = v.eval(F(w));
        all.insert(l.begin(), l.end());
        HypergraphLanguage keep;
        for (const auto& k : meet)
            if (l.count(k)) keep.insert(k);
        meet = keep;
    }
    CHECK(v.eval(F("ex w. r(w)")) == all);
    CHECK(v.eval(F("fa w. r(w)")) == meet);
    CHECK(v.eval(F("fa w. r(w)")).empty());
}

TEST_CASE("model clauses on a hand-built valuation") {
    // one atom over a two-variable window, closed by hand: sub_h(u(p(x,y)))
    // for every total h lands in u(p(h x, h y))
    Valuation v(universe({"x", "y"}));
    v.set_atom(F("p(x,y)"), {a_edge("x", "y")});
    v.set_atom(F("p(y,x)"), {a_edge("y", "x")});
    v.set_atom(F("p(x,x)"), {substitute(a_edge("x", "y"), {{"x", "x"}, {"y", "x"}})});
    v.set_atom(F("p(y,y)"), {substitute(a_edge("x", "y"), {{"x", "y"}, {"y", "y"}})});
    std::vector<Formula> samples{F("p(x,y)"), F("p(x,y) * p(y,x)"), F("ex z. p(x,z)"), F("fa z. p(z,z)"),
                                 F("p(x,y) -o p(x,y) * p(y,x)")};
    ModelReport pos = check_model_axioms(v, {samples[0], samples[1], samples[2]});
    CHECK(pos.ok());
    CHECK(pos.checks > 0);
    CHECK(check_connective_clauses(v, samples).ok());

    Valuation closed(universe({"x", "y"}));
    closed.set_atom(F("p(x,y)"), {a_edge("x", "y")});
    closed.close_under_substitution();
    CHECK(closed.eval(F("p(x,x)")) == v.eval(F("p(x,x)")));
    CHECK(check_substitution_clause(closed, {F("p(x,y)"), F("p(y,y)")}).ok());
}

TEST_CASE("dropping an image breaks the substitution clause") {
    Valuation v(universe({"x", "y"}));
    v.set_atom(F("p(x,y)"), {a_edge("x", "y")});
    v.close_under_substitution();
    v.set_atom(F("p(y,x)"), {});
    ModelReport r = check_substitution_clause(v, {F("p(x,y)")});
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().find("clause 1") != std::string::npos);
}

TEST_CASE("residuation on seeded valuations") {
    BoundedUniverse u = small_universe();
    for (long i = 0; i < 3; ++i) {
        auto rng = case_rng(11, i);
        Valuation v = random_valuation(rng, u);
        FormulaShape shape{"", u.window, true};
        for (int k = 0; k < 3; ++k) {
            Formula a = random_formula(rng, 1, shape), b = random_formula(rng, 1, shape),
                    c = random_formula(rng, 1, shape);
            HypergraphLanguage ab = compose(v, v.eval(a), v.eval(b));
            bool left = std::includes(v.eval(c).begin(), v.eval(c).end(), ab.begin(), ab.end());
            const HypergraphLanguage& bc = v.eval(lolli(b, c));
            bool right = std::includes(bc.begin(), bc.end(), v.eval(a).begin(), v.eval(a).end());
            CHECK(left == right);
        }
    }
}

TEST_CASE("canonical hypergraphs") {
    Hypergraph h = canonical_hypergraph({F("p(x,y)")}, F("p(x,y)"), {}, {});
    CHECK(h.nodes == SymbolSet{"x", "y"});
    REQUIRE(h.edges.size() == 1);
    const Edge& e = h.edges.begin()->second;
    CHECK(e.label == circ_label(F("p(x,y)")));
    CHECK(e.att.at(xi(1)) == Symbol("x"));
    CHECK(e.att.at(xi(2)) == Symbol("y"));
    CHECK(h.type() == SymbolSet{"x", "y"});

    CHECK(canonical_hypergraph({}, F("fa x. p(x,x)"), {}, {}) == empty_hypergraph());
    // the same ξ-form labels formulas that differ only in their free variables
    CHECK(circ_label(F("p(x,y)")) == circ_label(F("p(z,z)")));
    CHECK_THROWS_AS(canonical_hypergraph({F("p(x,y)")}, F("q(x)"), {}, {"z"}), Error);
    Hypergraph extra = canonical_hypergraph({F("p(x,y)")}, F("q(z)"), {"z"}, {"z"});
    CHECK(extra.nodes == SymbolSet{"x", "y", "z"});
    CHECK(extra.type() == SymbolSet{"z"});
}

TEST_CASE("canonical hypergraph properties, exhaustive") {
    for (const SuiteReport& r : canonical_hypergraph_suite()) {
        INFO(r.summary());
        CHECK(r.cases > 0);
        CHECK(r.ok());
    }
}

TEST_CASE("valuation files") {
    const std::string text = R"(window { x, y }
cap 2
type a { 1, 2 }
type b { 1 }
atom p(x,y) : {
  { node u w
    edge e a { 1=u, 2=w }
    ext { x=u, y=w } },
  { }
}
atom r(y) : { }
)";
    Valuation v = parse_valuation(text);
    CHECK(v.universe().window == std::vector<Symbol>{"x", "y"});
    CHECK(v.eval(F("p(x,y)")).size() == 2);
    CHECK(v.eval(F("r(y)")).empty());
    Valuation back = parse_valuation(render_valuation(v));
    CHECK(back.eval(F("p(x,y)")) == v.eval(F("p(x,y)")));
    CHECK(render_valuation(back) == render_valuation(v));

    CHECK_THROWS_AS(parse_valuation("cap 2\n"), Error);
    CHECK_THROWS_AS(parse_valuation("window { x }\natom p(x,z) : { }\n"), Error);
    CHECK_THROWS_AS(parse_valuation("window { x }\ntype a { 1 }\natom p(x) : { { node u\nedge e c { 1=u } } }\n"),
                    Error);
    CHECK_THROWS_AS(parse_valuation("window { x }\nbogus 1\n"), Error);
}
