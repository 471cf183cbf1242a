#include <random>

#include "doctest.h"
#include "hgl/hypergraph.hpp"
#include "hgl/lexer.hpp"

using namespace hgl;

namespace {

Hypergraph sg(const std::string& w) {
    std::vector<Symbol> word;
    for (char c : w) word.emplace_back(std::string(1, c));
    return string_graph(word);
}

}  // namespace

TEST_CASE("string graphs") {
    Hypergraph h = sg("ab");
    CHECK(h.nodes == SymbolSet{"v0", "v1", "v2"});
    CHECK(h.edges.at("e1") == Edge{"a", {{"s", "v0"}, {"t", "v1"}}});
    CHECK(h.edges.at("e2") == Edge{"b", {{"s", "v1"}, {"t", "v2"}}});
    CHECK(h.ext == SymbolMap{{"s", "v0"}, {"t", "v2"}});
    CHECK(size(sg("aa")) == 5);
    Hypergraph eps = string_graph({});
    CHECK(eps.nodes.size() == 1);
    CHECK(eps.ext.at("s") == eps.ext.at("t"));
}

TEST_CASE("handles") {
    Hypergraph h = handle("a", {"x", "y", "z"});
    CHECK(h.nodes == SymbolSet{"x", "y", "z"});
    CHECK(h.edges.size() == 1);
    CHECK(h.ext == SymbolMap{{"x", "x"}, {"y", "y"}, {"z", "z"}});
    CHECK(size(h) == 4);
    Hypergraph z = handle("a", {});
    CHECK(z.nodes.empty());
    CHECK(z.edges.size() == 1);
    CHECK(size(empty_hypergraph()) == 0);
}

TEST_CASE("disjoint union") {
    Hypergraph u = disjoint_union(handle("S", {"s", "t"}), handle("Q1", {}));
    CHECK(u.nodes.size() == 2);
    CHECK(u.edges.size() == 2);
    CHECK(u.type() == SymbolSet{"s", "t"});
    CHECK(is_isomorphic(disjoint_union(empty_hypergraph(), sg("ab")), sg("ab")));
    CHECK_THROWS_AS(disjoint_union(sg("a"), sg("b")), Error);
}

TEST_CASE("quotient") {
    Hypergraph h = sg("ab");
    CHECK(is_isomorphic(quotient(h, {}), h));
    Hypergraph q = quotient(h, {{"v0", "v2"}});
    CHECK(q.nodes.size() == 2);
    CHECK(q.ext.at("s") == q.ext.at("t"));
    CHECK(q.edges.at("e1").att.at("s") == q.edges.at("e2").att.at("t"));
    Hypergraph all = quotient(h, {{"v0", "v1"}, {"v1", "v2"}});
    CHECK(all.nodes.size() == 1);
    CHECK_THROWS_AS(quotient(h, {{"v0", "zz"}}), Error);
}

TEST_CASE("replacement") {
    Hypergraph h = sg("ab");
    Hypergraph r = replace(h, "e1", handle("a", {"s", "t"}));
    CHECK(is_isomorphic(r, h));
    Hypergraph r2 = replace(h, "e1", sg("cc"));
    CHECK(r2.type() == h.type());
    CHECK(r2.edges.size() == h.edges.size() - 1 + 2);
    CHECK(is_isomorphic(r2, sg("ccb")));
    CHECK_THROWS_AS(replace(h, "e9", sg("c")), Error);
    CHECK_THROWS_AS(replace(h, "e1", handle("a", {"x"})), Error);
}

TEST_CASE("parallel composition and substitution") {
    Hypergraph t1 = handle("A", {"x", "y", "z"});
    Hypergraph t2 = handle("B", {"y", "z", "t"});
    Hypergraph c = parallel_composition(t1, t2);
    CHECK(c.nodes.size() == 4);
    CHECK(c.type() == SymbolSet{"x", "y", "z", "t"});
    CHECK(parallel_composition(empty_hypergraph(), t1) == t1);
    CHECK(is_isomorphic(parallel_composition(t1, t2), parallel_composition(t2, t1)));

    // path a,b,c with ext x,y,z,t
    Hypergraph p = parse_hgr(
        "node n1 n2 n3 n4\n"
        "edge e1 a { s=n1, t=n2 }\n"
        "edge e2 b { s=n2, t=n3 }\n"
        "edge e3 c { s=n3, t=n4 }\n"
        "ext { x=n1, y=n2, z=n3, t=n4 }\n");
    Hypergraph q = substitute(p, {{"x", "sigma"}, {"y", "sigma"}, {"z", "tau"}});
    CHECK(q.type() == SymbolSet{"sigma", "tau"});
    CHECK(q.nodes.size() == 3);
    const Edge& a = q.edges.at("e1");
    CHECK(a.att.at("s") == a.att.at("t"));
    CHECK(q.ext.at("sigma") == a.att.at("s"));
    CHECK(q.ext.at("tau") == q.edges.at("e3").att.at("s"));
    CHECK(substitute(p, {{"x", "x"}, {"y", "y"}, {"z", "z"}, {"t", "t"}}) == p);
}

TEST_CASE("isomorphism and canonical form") {
    CHECK(is_isomorphic(sg("ab"), sg("ab")));
    CHECK_FALSE(is_isomorphic(sg("ab"), sg("ba")));
    CHECK(canonical_form(sg("a")) != canonical_form(sg("b")));
    Hypergraph h = sg("aab");
    Hypergraph r = rename_nodes(h, {{"v0", "q"}, {"v1", "w"}, {"v2", "v0"}, {"v3", "k"}});
    auto iso = is_isomorphic(h, r);
    REQUIRE(iso);
    CHECK(check_isomorphism(h, r, *iso));
    CHECK(canonical_form(h) == canonical_form(r));
    // a 4-cycle and two 2-cycles have the same local degrees
    Hypergraph c4 = parse_hgr(
        "node a b c d\nedge e1 r { s=a, t=b }\nedge e2 r { s=b, t=c }\n"
        "edge e3 r { s=c, t=d }\nedge e4 r { s=d, t=a }\next { }\n");
    Hypergraph c22 = parse_hgr(
        "node a b c d\nedge e1 r { s=a, t=b }\nedge e2 r { s=b, t=a }\n"
        "edge e3 r { s=c, t=d }\nedge e4 r { s=d, t=c }\next { }\n");
    CHECK_FALSE(is_isomorphic(c4, c22));
    CHECK(canonical_form(c4) != canonical_form(c22));
}

TEST_CASE("canonical form agrees with isomorphism on random graphs") {
    std::mt19937 rng(11);
    Alphabet al;
    al.add("a", {"s", "t"});
    al.add("b", {"s", "t"});
    al.add("C", {"1", "2", "3"});
    std::vector<Hypergraph> pool = enumerate_hypergraphs(al, {"s"}, 4, true);
    REQUIRE(pool.size() > 20);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const Hypergraph& g = pool[pick(rng)];
        const Hypergraph& h = i % 2 ? pool[pick(rng)] : g;
        // random renaming of h
        std::vector<Symbol> names(h.nodes.begin(), h.nodes.end());
        std::vector<Symbol> shuffled = names;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        SymbolMap ren;
        for (std::size_t k = 0; k < names.size(); ++k) ren[names[k]] = Symbol("w" + shuffled[k].str());
        Hypergraph hr = rename_nodes(h, ren);
        bool iso = is_isomorphic(g, hr).has_value();
        CHECK(iso == (canonical_form(g) == canonical_form(hr)));
        if (&g == &h) CHECK(iso);
    }
}

TEST_CASE("hgr round trip and errors") {
    Hypergraph h = sg("abc");
    CHECK(parse_hgr(render_hgr(h)) == h);
    CHECK_THROWS_AS(parse_hgr("node v1\nedge e1 a { s=v1, t=v2 }\n"), ParseError);
    try {
        parse_hgr("node v1\n\nedge e1 a { s=v1 t=v1 }\n");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::string dot = to_dot(handle("C", {"1", "2", "3"}));
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(dot.find("(2)") != std::string::npos);
}
