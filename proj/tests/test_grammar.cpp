#include <chrono>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hgl/grammar.hpp"
#include "test_util.hpp"

using namespace hgl;
using testutil::load_hgr;
using testutil::read_data;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

HypergraphGrammar ex2() { return std::get<HypergraphGrammar>(parse_gram(read_data("ex2.gram"))); }
StringGrammar ex1() { return std::get<StringGrammar>(parse_gram(read_data("ex1.gram"))); }

Hypergraph renamed(const Hypergraph& h, const std::string& prefix) {
    SymbolMap m;
    for (Symbol v : h.nodes) m[v] = Symbol(prefix + v.str());
    return rename_nodes(h, m);
}

}  // namespace

TEST_CASE("string grammar membership") {
    StringGrammar g = ex1();
    auto m = accepts_string(g, word_of("aa"));
    REQUIRE(m.outcome == Membership::Accepted);
    CHECK(sequent_alpha_eq(m.witness->sequent, parse_sequent(read_data("ex1.sq"))));
    CHECK(check_proof(m.witness->proof, m.witness->sequent));
    CHECK(accepts_string(g, word_of("a")).outcome == Membership::Rejected);
    CHECK(accepts_string(g, word_of("aaa")).outcome == Membership::Rejected);
    CHECK(accepts_string(g, {}).outcome == Membership::Rejected);
    CHECK_THROWS_AS(accepts_string(g, word_of("b")), Error);
    StringGrammar empty = g;
    empty.lexicon.clear();
    CHECK(accepts_string(empty, word_of("aa")).outcome == Membership::Rejected);
}

TEST_CASE("hypergraph grammar membership reproduces the worked sequents") {
    HypergraphGrammar g = ex2();
    auto expected = lines_of(read_data("ex2_expected.txt"));
    REQUIRE(expected.size() == 3);
    const char* graphs[] = {"ex2_graph.hgr", "ex2_string.hgr", "ex2_nodes.hgr"};
    for (int i = 0; i < 3; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        auto m = accepts_hypergraph(g, load_hgr(graphs[i]));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 5);
        REQUIRE(m.outcome == Membership::Accepted);
        CHECK_MESSAGE(sequent_alpha_eq(m.witness->sequent, parse_sequent(expected[i])), render(m.witness->sequent));
        CHECK(check_proof(m.witness->proof, m.witness->sequent));
        CHECK(sequent_alpha_eq(membership_sequent(g, load_hgr(graphs[i]), m.witness->edge_choice,
                                                  m.witness->node_choice),
                               m.witness->sequent));
    }
    CHECK(string_language_member(g, word_of("aa")));
    CHECK(!string_language_member(g, word_of("ab")));
    // wrong type: rejected without candidates
    Hypergraph h = load_hgr("ex2_graph.hgr");
    h.ext.erase(Symbol("t"));
    auto m = accepts_hypergraph(g, h);
    CHECK(m.outcome == Membership::Rejected);
    CHECK(m.candidates == 0);
}

TEST_CASE("membership is invariant under renaming") {
    HypergraphGrammar g = ex2();
    for (const char* f : {"ex2_graph.hgr", "ex2_string.hgr", "ex2_nodes.hgr"}) {
        Hypergraph h = load_hgr(f);
        CHECK(accepts_hypergraph(g, h).outcome == accepts_hypergraph(g, renamed(h, "n_")).outcome);
    }
}

TEST_CASE("node formulas are needed to tell loops from strings") {
    // Without node formulas, accepting sg(aa) forces accepting the looped graph.
    StringGrammar s = ex1();
    HypergraphGrammar g;
    g.terminals.add("a", {"s", "t"});
    g.ext_type = {"s", "t"};
    g.start = s.start;
    g.lexicon = s.lexicon;
    Hypergraph loop;
    loop.nodes = {"v0", "v1"};
    loop.edges[Symbol("e1")] = Edge{"a", {{"s", "v0"}, {"t", "v0"}}};
    loop.edges[Symbol("e2")] = Edge{"a", {{"s", "v0"}, {"t", "v1"}}};
    loop.ext = {{"s", "v0"}, {"t", "v1"}};
    MemberOptions no_nodes;
    no_nodes.ignore_nodes = true;
    CHECK(string_language_member(g, word_of("aa"), no_nodes));
    CHECK(accepts_hypergraph(g, loop, no_nodes).outcome == Membership::Accepted);
}

TEST_CASE("gram files") {
    HypergraphGrammar g = ex2();
    CHECK(g.lexicon.at("a").size() == 2);
    CHECK(g.node_lexicon.size() == 2);
    auto back = std::get<HypergraphGrammar>(parse_gram(render_gram(g)));
    CHECK(back.lexicon.at("b").size() == 1);
    CHECK(alpha_eq(back.lexicon.at("b")[0], g.lexicon.at("b")[0]));
    CHECK(alpha_eq(back.node_lexicon[1], g.node_lexicon[1]));
    auto s = std::get<StringGrammar>(parse_gram(render_gram(ex1())));
    CHECK(s.lexicon.at("a").size() == 2);
    CHECK_THROWS_AS(parse_gram("start : p(s,t)\nlex a : p(s,t)\n"), Error);  // undeclared label
    CHECK_THROWS_AS(parse_gram("grammar string\nstart : p(s,u)\n"), Error);   // free variable
    CHECK_THROWS_AS(parse_gram("logic mill1\ntype a { s, t }\nstart : !p(s,t)\n"), Error);
    CHECK_THROWS_AS(parse_gram("logic foo\n"), ParseError);
}
