#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hgl/suites.hpp"

namespace hgl {

namespace {

using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& dir, const std::string& name) {
    std::ifstream in(dir + "/" + name);
    if (!in) throw Error("cannot read " + dir + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

// Runs one scenario: each check() call is one case.
struct Scenario {
    SuiteReport report;
    explicit Scenario(std::string name) { report.name = std::move(name); }

    void check(bool ok, const std::string& what) {
        ++report.cases;
        if (!ok) report.fail(what);
    }

    void run(const std::function<void(Scenario&)>& body) {
        auto t0 = Clock::now();
        try {
            body(*this);
        } catch (const std::exception& e) {
            ++report.cases;
            report.fail(std::string("error: ") + e.what());
        }
        report.max_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
};

double timed(const std::function<void()>& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<SuiteReport> worked_examples_suite(const std::string& data_dir) {
    std::vector<SuiteReport> out;
    auto add = [&](const std::string& name, const std::function<void(Scenario&)>& body) {
        Scenario s(name);
        s.run(body);
        out.push_back(std::move(s.report));
    };
    auto hgr = [&](const std::string& name) { return parse_hgr(slurp(data_dir, name)); };

    add("string grammar sequent is derivable", [&](Scenario& s) {
        Sequent seq = parse_sequent(slurp(data_dir, "ex1.sq"));
        Verdict v;
        double secs = timed([&] { v = prove_mill1(seq); });
        s.check(v.derivable(), "not derivable");
        s.check(v.proof && check_proof(*v.proof, seq), "proof does not check");
        s.check(secs < 1, "took " + std::to_string(secs) + " s");
        auto g = std::get<StringGrammar>(parse_gram(slurp(data_dir, "ex1.gram")));
        Membership m = accepts_string(g, word_of("aa"));
        s.check(m.outcome == Membership::Accepted && sequent_alpha_eq(m.witness->sequent, seq),
                "aa not accepted with the expected sequent");
        s.check(accepts_string(g, word_of("aaa")).outcome == Membership::Rejected, "aaa accepted");
    });

    add("hypergraph grammar memberships reproduce the worked sequents", [&](Scenario& s) {
        auto g = std::get<HypergraphGrammar>(parse_gram(slurp(data_dir, "ex2.gram")));
        auto expected = lines_of(slurp(data_dir, "ex2_expected.txt"));
        const char* graphs[] = {"ex2_graph.hgr", "ex2_string.hgr", "ex2_nodes.hgr"};
        for (int i = 0; i < 3; ++i) {
            Membership m;
            double secs = timed([&] { m = accepts_hypergraph(g, hgr(graphs[i])); });
            bool ok = m.outcome == Membership::Accepted &&
                      sequent_alpha_eq(m.witness->sequent, parse_sequent(expected.at(static_cast<std::size_t>(i)))) &&
                      check_proof(m.witness->proof, m.witness->sequent);
            s.check(ok, std::string(graphs[i]) + ": " + to_string(m.outcome));
            s.check(secs < 5, std::string(graphs[i]) + " took " + std::to_string(secs) + " s");
        }
    });

    add("without node formulas a looped graph is accepted with sg(aa)", [&](Scenario& s) {
        auto str = std::get<StringGrammar>(parse_gram(slurp(data_dir, "ex1.gram")));
        HypergraphGrammar g;
        g.terminals.add("a", {"s", "t"});
        g.ext_type = {"s", "t"};
        g.start = str.start;
        g.lexicon = str.lexicon;
        Hypergraph loop = parse_hgr("node v0 v1\nedge e1 a { s=v0, t=v0 }\nedge e2 a { s=v0, t=v1 }\n"
                                    "ext { s=v0, t=v1 }\n");
        MemberOptions no_nodes;
        no_nodes.ignore_nodes = true;
        s.check(string_language_member(g, word_of("aa"), no_nodes), "sg(aa) rejected");
        s.check(accepts_hypergraph(g, loop, no_nodes).outcome == Membership::Accepted, "loop rejected");
    });

    add("diagram of a hypergraph", [&](Scenario& s) {
        Hypergraph h = rename_nodes(hgr("fig2_right.hgr"), {{"n", "v1"}, {"m", "v2"}, {"p", "v3"}, {"q", "v4"}});
        Alphabet order;
        order.add("C", {"1", "2", "3"});
        std::vector<std::string> got;
        for (const Formula& f : diagram(h, order)) got.push_back(render(f));
        s.check(got == std::vector<std::string>{"D(v3,v4)", "C(v1,v3,v4)", "X(v4,v3)", "Y(v4)", "nu(v1)", "nu(v2)",
                                                "nu(v3)", "nu(v4)"},
                "unexpected diagram");
    });

    add("rule formula", [&](Scenario& s) {
        HtRule p = parse_htr(slurp(data_dir, "example6.htr")).at(0);
        s.check(alpha_eq(rule_formula(p).formula, parse_formula(slurp(data_dir, "example6_fm.txt"))),
                render(rule_formula(p).formula));
        // the displayed string-rule formula is the encoding of the reversed rule
        HtRule ab = parse_htr(slurp(data_dir, "string_rule.htr")).at(0);
        HtRule reversed{ab.name + "_reversed", ab.rhs, ab.lhs};
        s.check(alpha_eq(rule_formula(reversed).formula, parse_formula(slurp(data_dir, "string_rule_fm.txt"))),
                render(rule_formula(reversed).formula));
    });

    add("rule applied twice", [&](Scenario& s) {
        HtRule r = parse_htr(slurp(data_dir, "fig1_rule.htr")).at(0);
        Hypergraph g = hgr("fig1_start.hgr");
        for (const char* want : {"fig1_step1.hgr", "fig1_step2.hgr"}) {
            auto occs = applicable_matches(g, r);
            s.check(occs.size() == 1, std::string("occurrences before ") + want);
            if (occs.size() != 1) return;
            g = apply(g, r, occs[0]);
            s.check(is_isomorphic(g, hgr(want)).has_value(), want);
        }
    });

    add("replacement by a rule with a dangling-free occurrence", [&](Scenario& s) {
        HtRule r = parse_htr(slurp(data_dir, "fig2_rule.htr")).at(0);
        Hypergraph left = hgr("fig2_left.hgr");
        auto occs = applicable_matches(left, r);
        s.check(occs.size() == 1, "occurrences");
        if (occs.size() == 1) s.check(is_isomorphic(apply(left, r, occs[0]), hgr("fig2_right.hgr")).has_value(), "result");
    });

    add("parallel composition and substitution", [&](Scenario& s) {
        Hypergraph h1 = parse_hgr("node a b c\nedge e1 A { s=a, t=b }\nedge e2 B { s=b, t=c }\next { x=a, y=c }\n");
        Hypergraph h2 = parse_hgr("node d e\nedge e1 C { s=d, t=e }\next { y=d, z=e }\n");
        Hypergraph pc = parallel_composition(h1, h2);
        s.check(pc.type() == SymbolSet{"x", "y", "z"}, "type");
        s.check(pc.nodes.size() == 4 && pc.edges.size() == 3, "fusion on y");
        Hypergraph h = parse_hgr("node a b c d\nedge e1 A { s=a, t=b }\nedge e2 B { s=c, t=d }\n"
                                 "ext { x=a, y=b, z=c, t=d }\n");
        Hypergraph sub = substitute(h, {{"x", "sigma"}, {"y", "sigma"}, {"z", "tau"}});
        s.check(sub.type() == SymbolSet{"sigma", "tau"}, "type after substitution");
        s.check(sub.nodes.size() == 3, "x and y fused, t hidden");
    });

    add("string rewriting system as ht-system", [&](Scenario& s) {
        HtSystem sys = srs_to_hts({{"S", "aSb"}, {"S", "ab"}}, "S", "ab");
        auto lang = enumerate_language(sys, 17, 6);
        std::set<std::string> want;
        for (std::string w : {"ab", "aabb", "aaabbb", "aaaabbbb"}) {
            Word word = word_of(w);
            want.insert(canonical_form(string_graph(word)));
        }
        std::set<std::string> got;
        for (const auto& [k, h] : lang) got.insert(k);
        s.check(got == want, "a^n b^n up to n = 4");
    });

    out.push_back(converter_suite());

    add("exact cover system", [&](Scenario& s) {
        HtSystem sys = np_complete_system();
        Hypergraph pos = exact_cover_graph({"0", "1", "0"}, {{"1", "0", "0"}});
        Hypergraph neg = exact_cover_graph({"0", "0", "0"}, {{"1", "0", "0"}});
        std::optional<Derivation> d;
        double secs = timed([&] { d = derives(sys, pos, static_cast<int>(pos.size())); });
        s.check(d && d->replays(), "positive instance not derived");
        s.check(secs < 60, "positive took " + std::to_string(secs) + " s");
        secs = timed([&] { d = derives(sys, neg, static_cast<int>(neg.size())); });
        s.check(!d, "negative instance derived");
        s.check(secs < 60, "negative took " + std::to_string(secs) + " s");
    });

    SuiteReport batch = derivation_oracle_suite(20, 7);
    batch.name += " (20 instances, seed 7)";
    out.push_back(batch);
    return out;
}

}  // namespace hgl
