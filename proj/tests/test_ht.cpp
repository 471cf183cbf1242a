#include <chrono>
#include <random>
#include <set>

#include "doctest.h"
#include "hgl/ht.hpp"
#include "test_util.hpp"

using namespace hgl;
using testutil::load_hgr;
using testutil::read_data;
using testutil::sg;

namespace {

HtRule fig2_rule() { return parse_htr(read_data("fig2_rule.htr")).at(0); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every label-preserving injective map lhs -> g for which removing the image
// leaves a hypergraph K with G = K[e/lhs].
std::set<std::string> decompositions(const Hypergraph& g, const HtRule& r) {
    std::set<std::string> out;
    std::vector<Symbol> ln(r.lhs.nodes.begin(), r.lhs.nodes.end());
    std::vector<Symbol> gn(g.nodes.begin(), g.nodes.end());
    std::vector<Symbol> le, ge;
    for (const auto& [id, e] : r.lhs.edges) le.push_back(id);
    for (const auto& [id, e] : g.edges) ge.push_back(id);
    Occurrence occ;
    SymbolSet used;
    auto check = [&]() {
        for (const auto& [l, gid] : occ.edges) {
            const Edge& a = r.lhs.edges.at(l);
            const Edge& b = g.edges.at(gid);
            if (a.label != b.label || a.att.size() != b.att.size()) return;
            for (const auto& [s, n] : a.att)
                if (!b.att.count(s) || b.att.at(s) != occ.nodes.at(n)) return;
        }
        SymbolSet lext;
        for (const auto& [s, n] : r.lhs.ext) lext.insert(n);
        Hypergraph k = g;
        for (const auto& [l, gid] : occ.edges) k.edges.erase(gid);
        for (const auto& [u, w] : occ.nodes)
            if (!lext.count(u)) k.nodes.erase(w);
        Edge hole{Symbol("HOLE"), {}};
        for (const auto& [s, n] : r.lhs.ext) hole.att[s] = occ.nodes.at(n);
        k.edges[Symbol("hole")] = hole;
        try {
            k.validate();
        } catch (const Error&) {
            return;
        }
        if (is_isomorphic(replace(k, Symbol("hole"), r.lhs), g)) out.insert(occ.str());
    };
    std::function<void(std::size_t)> edges = [&](std::size_t i) {
        if (i == le.size()) return check();
        for (Symbol gid : ge) {
            bool taken = false;
            for (const auto& [l, x] : occ.edges) taken |= x == gid;
            if (taken) continue;
            occ.edges[le[i]] = gid;
            edges(i + 1);
            occ.edges.erase(le[i]);
        }
    };
    std::function<void(std::size_t)> nodes = [&](std::size_t i) {
        if (i == ln.size()) return edges(0);
        for (Symbol w : gn) {
            if (used.count(w)) continue;
            used.insert(w);
            occ.nodes[ln[i]] = w;
            nodes(i + 1);
            occ.nodes.erase(ln[i]);
            used.erase(w);
        }
    };
    nodes(0);
    return out;
}

Hypergraph random_graph(std::mt19937& rng, int n, int m, const std::vector<std::string>& labels, bool with_ext) {
    Hypergraph h;
    for (int i = 0; i < n; ++i) h.nodes.insert(Symbol("v" + std::to_string(i)));
    std::uniform_int_distribution<int> node(0, n - 1), lab(0, int(labels.size()) - 1);
    for (int i = 0; i < m; ++i) {
        Symbol l(labels[lab(rng)]);
        Edge e{l, {}};
        if (l.str() == "B") {
            e.att[Symbol("s")] = Symbol("v" + std::to_string(node(rng)));
        } else {
            e.att[Symbol("s")] = Symbol("v" + std::to_string(node(rng)));
            e.att[Symbol("t")] = Symbol("v" + std::to_string(node(rng)));
        }
        h.edges[Symbol("e" + std::to_string(i))] = e;
    }
    if (with_ext && n >= 2) {
        h.ext[Symbol("x")] = Symbol("v0");
        h.ext[Symbol("y")] = Symbol("v1");
    }
    return h;
}

}  // namespace

TEST_CASE("fork rule has one occurrence and produces the right graph") {
    HtRule r = fig2_rule();
    Hypergraph left = load_hgr("fig2_left.hgr");
    auto occs = applicable_matches(left, r);
    REQUIRE(occs.size() == 1);
    Hypergraph out = apply(left, r, occs[0]);
    CHECK(is_isomorphic(out, load_hgr("fig2_right.hgr")));
    CHECK(out.type() == left.type());
    auto d = derives_with_rule_multiset(left, load_hgr("fig2_right.hgr"), {}, {r}, 3);
    REQUIRE(d);
    CHECK(d->steps.size() == 1);
    CHECK(d->replays());
}

TEST_CASE("rule applied twice in sequence") {
    HtRule r = parse_htr(read_data("fig1_rule.htr")).at(0);
    Hypergraph g = load_hgr("fig1_start.hgr");
    auto o1 = applicable_matches(g, r);
    REQUIRE(o1.size() == 1);
    Hypergraph g1 = apply(g, r, o1[0]);
    CHECK(is_isomorphic(g1, load_hgr("fig1_step1.hgr")));
    auto o2 = applicable_matches(g1, r);
    REQUIRE(o2.size() == 1);
    CHECK(is_isomorphic(apply(g1, r, o2[0]), load_hgr("fig1_step2.hgr")));
}

TEST_CASE("matching edge cases") {
    HtRule r{"r", handle("a", {"s", "t"}), sg("b")};
    CHECK(applicable_matches(sg("bb"), r).empty());
    HtRule id{"id", sg("ab"), sg("ab")};
    Hypergraph g = sg("abab");
    auto occs = applicable_matches(g, id);
    CHECK(occs.size() == 2);
    for (const auto& o : occs) CHECK(is_isomorphic(apply(g, id, o), g));
    // Internal node of the lhs may not be external in G.
    CHECK(applicable_matches(sg("ab"), HtRule{"r", sg("a"), sg("a")}).size() == 1);
    Occurrence bogus;
    CHECK_THROWS_AS(apply(g, id, bogus), Error);
}

TEST_CASE("dangling condition") {
    // lhs: x -a-> m -a-> y with m internal; G has an extra edge on the middle node.
    HtRule r{"r", sg("aa"), sg("b")};
    Hypergraph g = sg("aa");
    g.edges[Symbol("extra")] = Edge{Symbol("B"), {{Symbol("s"), Symbol("v1")}}};
    Hypergraph host = g;
    host.ext.clear();
    CHECK(applicable_matches(host, r).empty());
    host.edges.erase(Symbol("extra"));
    CHECK(applicable_matches(host, r).size() == 1);
}

TEST_CASE("matching agrees with brute-force decomposition") {
    std::mt19937 rng(7);
    int agree = 0;
    for (int round = 0; round < 300; ++round) {
        Hypergraph g = random_graph(rng, 2 + int(rng() % 4), 1 + int(rng() % 5), {"a", "A", "B"}, rng() % 2);
        Hypergraph lhs = random_graph(rng, 1 + int(rng() % 3), int(rng() % 3), {"a", "A", "B"}, false);
        // random ext on the lhs
        std::vector<Symbol> ln(lhs.nodes.begin(), lhs.nodes.end());
        for (std::size_t i = 0; i < ln.size(); ++i)
            if (rng() % 2) lhs.ext[Symbol("x" + std::to_string(i))] = ln[i];
        HtRule r{"r", lhs, lhs};
        std::set<std::string> fast;
        for (const auto& o : applicable_matches(g, r)) fast.insert(o.str());
        CHECK(fast == decompositions(g, r));
        agree += fast == decompositions(g, r);
    }
    CHECK(agree == 300);
}

TEST_CASE("derivation search basics") {
    HtSystem sys;
    sys.nonterminals.add("S", {"s", "t"});
    sys.terminals.add("a", {"s", "t"});
    sys.start = handle("S", {"s", "t"});
    sys.rules.push_back({"more", handle("S", {"s", "t"}), sg("aS")});
    sys.rules.push_back({"stop", handle("S", {"s", "t"}), sg("a")});
    sys.validate();
    auto d0 = derives(sys, sys.start, 0);
    REQUIRE(d0);
    CHECK(d0->steps.empty());
    auto d = derives(sys, sg("aaa"), 10);
    REQUIRE(d);
    CHECK(d->steps.size() == 3);
    CHECK(d->replays());
    CHECK(!derives(sys, sg("aaa"), 2));
    CHECK(!derives(sys, sg("b"), 10));
    auto lang = enumerate_language(sys, 7, 10);
    std::set<std::string> want;
    for (std::string w : {"a", "aa", "aaa"}) want.insert(canonical_form(sg(w)));
    std::set<std::string> got;
    for (const auto& [k, h] : lang) got.insert(k);
    CHECK(got == want);
    CHECK(!derivation_dot(*d).empty());

    CHECK(derives_with_rule_multiset(sg("ab"), sg("ab"), {}, {}, 0));
    CHECK(!derives_with_rule_multiset(sg("ab"), sg("ba"), {}, {}, 5));
}

TEST_CASE("exact cover system") {
    HtSystem sys = np_complete_system();
    sys.validate();
    CHECK(sys.nonterminals.type_of("T2") == std::vector<Symbol>{"1", "2", "3", "4"});
    CHECK(sys.rules.size() == 13);
    // first rule on the start graph
    auto occs = applicable_matches(sys.start, sys.rules[0]);
    REQUIRE(occs.size() == 1);
    Hypergraph g = apply(sys.start, sys.rules[0], occs[0]);
    CHECK(g.edges.size() == 8);

    Hypergraph pos = exact_cover_graph({"0", "1", "0"}, {{"1", "0", "0"}});
    CHECK(canonical_form(pos) == canonical_form(sg("b0bb1bb0bca1a0a0")));
    auto t0 = std::chrono::steady_clock::now();
    auto d = derives(sys, pos, int(pos.size()));
    CHECK(seconds_since(t0) < 60);
    REQUIRE(d);
    CHECK(d->replays());
    CHECK(d->steps.size() <= pos.size());

    Hypergraph neg = exact_cover_graph({"0", "0", "0"}, {{"1", "0", "0"}});
    t0 = std::chrono::steady_clock::now();
    CHECK(!derives(sys, neg, int(neg.size())));
    CHECK(seconds_since(t0) < 60);

    // Smallest words: c alone, or c followed by one triple left out of the cover.
    auto lang = enumerate_language(sys, 15, 8);
    std::set<std::string> want{canonical_form(sg("c"))};
    for (char x : {'0', '1'})
        for (char y : {'0', '1'})
            for (char z : {'0', '1'}) want.insert(canonical_form(sg(std::string("ca") + x + "a" + y + "a" + z)));
    std::set<std::string> got;
    for (const auto& [k, h] : lang) got.insert(k);
    CHECK(got == want);
}

TEST_CASE("system files round-trip") {
    HtSystem sys = np_complete_system();
    HtSystem back = parse_hts(render_hts(sys));
    REQUIRE(back.rules.size() == sys.rules.size());
    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        CHECK(back.rules[i].name == sys.rules[i].name);
        CHECK(back.rules[i].lhs == sys.rules[i].lhs);
        CHECK(back.rules[i].rhs == sys.rules[i].rhs);
    }
    CHECK(back.start == sys.start);
    auto rules = parse_htr(render_htr(sys.rules));
    CHECK(rules.size() == sys.rules.size());
    CHECK_THROWS_AS(parse_htr("node a\nedge e x { s=a }\n"), ParseError);
}
