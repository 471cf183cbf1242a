#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "hgl/suites.hpp"

using namespace hgl;

namespace {

using Clock = std::chrono::steady_clock;

std::string data_dir = HGL_DATA_DIR;

std::string slurp(const std::string& name) {
    std::ifstream in(data_dir + "/" + name);
    if (!in) throw Error("cannot read " + data_dir + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Hypergraph hgr(const std::string& name) { return parse_hgr(slurp(name)); }

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g s", s);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Folds suite reports into one outcome.
Outcome from_reports(const std::vector<SuiteReport>& reports, long min_cases = 1) {
    Outcome o{true, ""};
    for (const SuiteReport& r : reports) {
        o.pass = o.pass && r.ok() && r.cases >= min_cases;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += r.summary();
        if (!r.ok() && !r.notes.empty()) o.detail += " [" + r.notes.front() + "]";
    }
    return o;
}

Outcome string_sequent() {
    Sequent s = parse_sequent(slurp("ex1.sq"));
    auto t0 = Clock::now();
    Verdict v = prove_mill1(s);
    double t = since(t0);
    bool checked = v.proof && check_proof(*v.proof, s);
    return {v.derivable() && checked && t < 1,
            std::string(to_string(v.kind)) + ", proof checked " + (checked ? "yes" : "no") + ", " + secs(t)};
}

Outcome hypergraph_memberships() {
    auto g = std::get<HypergraphGrammar>(parse_gram(slurp("ex2.gram")));
    std::vector<std::string> expected;
    std::istringstream in(slurp("ex2_expected.txt"));
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) expected.push_back(l);
    Outcome o{expected.size() == 3, ""};
    const char* graphs[] = {"ex2_graph.hgr", "ex2_string.hgr", "ex2_nodes.hgr"};
    for (std::size_t i = 0; i < 3 && i < expected.size(); ++i) {
        auto t0 = Clock::now();
        Membership m = accepts_hypergraph(g, hgr(graphs[i]));
        double t = since(t0);
        bool same = m.witness && sequent_alpha_eq(m.witness->sequent, parse_sequent(expected[i])) &&
                    check_proof(m.witness->proof, m.witness->sequent);
        o.pass = o.pass && m.outcome == Membership::Accepted && same && t < 5;
        o.detail += std::string(i ? "; " : "") + graphs[i] + " " + to_string(m.outcome) +
                    (same ? ", witness matches" : ", witness differs") + ", " + secs(t);
    }
    return o;
}

Outcome rule_formulas() {
    HtRule p = parse_htr(slurp("example6.htr")).at(0);
    bool ex6 = alpha_eq(rule_formula(p).formula, parse_formula(slurp("example6_fm.txt")));
    HtRule ab = parse_htr(slurp("string_rule.htr")).at(0);
    Formula shown = parse_formula(slurp("string_rule_fm.txt"));
    bool forward = alpha_eq(rule_formula(ab).formula, shown);
    bool reversed = alpha_eq(rule_formula(HtRule{"reversed", ab.rhs, ab.lhs}).formula, shown);
    std::string detail = std::string("two-edge rule ") + (ex6 ? "matches" : "differs") + "; AB -> BCD display " +
                         (forward ? "matches" : "differs from") + " the rule encoding";
    if (!forward && reversed) detail += " but matches the encoding of BCD -> AB (orientation conflict)";
    return {ex6 && forward, detail};
}

Outcome figure_replay() {
    bool ok = true;
    HtRule r1 = parse_htr(slurp("fig1_rule.htr")).at(0);
    Hypergraph g = hgr("fig1_start.hgr");
    for (const char* want : {"fig1_step1.hgr", "fig1_step2.hgr"}) {
        auto occs = applicable_matches(g, r1);
        if (occs.size() != 1) return {false, std::string("no unique occurrence before ") + want};
        g = apply(g, r1, occs[0]);
        ok = ok && is_isomorphic(g, hgr(want)).has_value();
    }
    HtRule r2 = parse_htr(slurp("fig2_rule.htr")).at(0);
    Hypergraph left = hgr("fig2_left.hgr");
    auto occs = applicable_matches(left, r2);
    bool second = occs.size() == 1 && is_isomorphic(apply(left, r2, occs[0]), hgr("fig2_right.hgr")).has_value();
    return {ok && second, std::string("two-step replay ") + (ok ? "isomorphic" : "differs") + ", single replacement " +
                              (second ? "isomorphic" : "differs")};
}

Outcome derivation_oracle(std::uint64_t seed, int jobs) {
    SuiteReport r = derivation_oracle_suite(200, seed, jobs);
    double rate = r.cases ? static_cast<double>(r.unknown) / static_cast<double>(r.cases) : 1.0;
    Outcome o = from_reports({r}, 200);
    o.pass = o.pass && r.max_seconds < 10 && rate < 0.05;
    o.detail += "; budget exhausted " + std::to_string(r.unknown) + "/" + std::to_string(r.cases);
    return o;
}

Outcome system_grammars(int jobs) {
    std::vector<SuiteReport> reports;
    for (const auto& [name, sys] : {std::pair{"string", toy_string_system()}, std::pair{"tree", toy_tree_system()}}) {
        reports.push_back(grammar_agreement(std::string("ill1 ") + name, sys, ill1_grammar_of(sys), 6, 6, jobs));
        reports.push_back(grammar_agreement(std::string("mill1 ") + name, sys, mill1_grammar_of(sys, 1), 6, 6, jobs));
    }
    return from_reports(reports);
}

Outcome intersection() {
    SuiteReport r = intersection_suite(1);
    return from_reports({r}, 50);
}

Outcome exact_cover() {
    HtSystem sys = np_complete_system();
    Hypergraph pos = hgr("exact_cover_pos.hgr"), neg = hgr("exact_cover_neg.hgr");
    auto t0 = Clock::now();
    auto d = derives(sys, pos, static_cast<int>(pos.size()));
    double tp = since(t0);
    t0 = Clock::now();
    auto e = derives(sys, neg, static_cast<int>(neg.size()));
    double tn = since(t0);
    bool ok = d && d->replays() && !e && tp < 60 && tn < 60;
    return {ok, std::string("positive ") + (d ? "derived in " + std::to_string(d->steps.size()) + " steps" : "not derived") +
                    ", " + secs(tp) + "; negative " + (e ? "derived" : "exhausted") + ", " + secs(tn)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria, one line each"};
    std::uint64_t seed = 7;
    int jobs = 1;
    std::vector<int> known;
    app.add_option("--seed", seed, "seed for the randomized criteria")->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads")->capture_default_str();
    app.add_option("--data", data_dir, "directory of bundled example files")->capture_default_str();
    app.add_option("--known-failure", known,
                   "criteria whose failure is documented; they still print FAIL but do not set the exit code");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"string grammar sequent derivable with a checked proof under 1 s", string_sequent},
        {"three hypergraph memberships reproduce the worked sequents, each under 5 s", hypergraph_memberships},
        {"rule formulas equal the displayed ones", rule_formulas},
        {"figure replays up to isomorphism", figure_replay},
        {"prover agrees with rule-multiset derivation search on 200 instances",
         [&] { return derivation_oracle(seed, jobs); }},
        {"grammars of two systems agree with their languages up to size 6", [&] { return system_grammars(jobs); }},
        {"intersection grammar membership equals joint membership", intersection},
        {"string/hypergraph grammar converters up to length 4, empty word rejected",
         [] { return from_reports({converter_suite()}); }},
        {"exact cover system: positive derived, negative exhausted, each under 60 s", exact_cover},
        {"hypergraph algebra laws, 1000 cases each", [&] { return from_reports(algebra_suite(1000, seed), 1000); }},
        {"logic properties, 100 cases each", [&] { return from_reports(logic_suite(100, seed), 100); }},
        {"canonical hypergraph equality and node removal, exhaustive",
         [] { return from_reports(canonical_hypergraph_suite()); }},
        {"model clauses, residuation and quantifier-free soundness on 50 valuations",
         [&] { return from_reports(semantics_suite(50, 50, seed)); }},
    };

    std::cout << "seed " << seed << "\n";
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        bool excused = std::find(known.begin(), known.end(), id) != known.end();
        if (!o.pass && !excused) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << " (" << secs(since(t0))
                  << "): " << o.detail << (!o.pass && excused ? " [documented]" : "") << std::endl;
    }
    return failed ? 1 : 0;
}
