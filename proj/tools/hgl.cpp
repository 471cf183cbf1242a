#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hgl/encoding.hpp"
#include "hgl/grammar.hpp"
#include "hgl/ht.hpp"
#include "hgl/prover.hpp"
#include "hgl/suites.hpp"

using namespace hgl;

namespace {

enum Exit { Positive = 0, Negative = 1, Unknown = 2, UsageError = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

// Errors inside a file get the path in front of the line/column message.
template <class F>
auto parsing(const std::string& path, F&& f) {
    try {
        return f(read_file(path));
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

Hypergraph load_hgr(const std::string& path) {
    return parsing(path, [](const std::string& t) { return parse_hgr(t); });
}

Grammar load_gram(const std::string& path) {
    return parsing(path, [](const std::string& t) { return parse_gram(t); });
}

Logic parse_logic(const std::string& s) {
    if (s == "mill1") return Logic::MILL1;
    if (s == "ill1") return Logic::ILL1;
    throw Error("unknown logic '" + s + "' (expected mill1 or ill1)");
}

int exit_of(Membership::Outcome o) {
    switch (o) {
        case Membership::Accepted: return Positive;
        case Membership::Rejected: return Negative;
        default: return Unknown;
    }
}

void print_witness(const MembershipWitness& w) {
    for (const auto& [pos, f] : w.edge_choice) std::cout << "  " << pos << " : " << render(f) << "\n";
    for (const auto& [pos, f] : w.node_choice) std::cout << "  node " << pos << " : " << render(f) << "\n";
    std::cout << "sequent: " << render(w.sequent) << "\n";
    std::cout << "proof:\n" << serialize(w.proof);
}

int report_suites(const std::string& suite, std::uint64_t seed, const std::vector<SuiteReport>& reports) {
    std::cout << "corpus " << suite << " seed " << seed << "\n";
    bool ok = true, unknown = false;
    for (const SuiteReport& r : reports) {
        std::cout << (r.ok() ? "PASS " : "FAIL ") << r.summary() << "\n";
        for (const std::string& n : r.notes) std::cout << "     " << n << "\n";
        ok = ok && r.ok();
        unknown = unknown || r.unknown > 0;
    }
    if (!ok) return Negative;
    return unknown ? Unknown : Positive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypergraph grammars over first-order linear logic"};
    app.require_subcommand(1);
    int code = Positive;

    // prove
    auto* prove_cmd = app.add_subcommand("prove", "Decide a sequent");
    std::string sq_path, logic_name = "mill1", proof_path;
    long budget = 10000;
    prove_cmd->add_option("sequent", sq_path, ".sq file")->required();
    prove_cmd->add_option("--logic", logic_name, "mill1 or ill1")->capture_default_str();
    prove_cmd->add_option("--budget", budget, "focusing decisions (ill1 only)")->capture_default_str();
    prove_cmd->add_option("--proof", proof_path, "write the proof tree here");
    prove_cmd->callback([&] {
        Sequent s = parsing(sq_path, [](const std::string& t) { return parse_sequent(t); });
        Verdict v = prove(s, parse_logic(logic_name), budget);
        std::cout << to_string(v.kind) << ": " << render(s) << "\n";
        if (v.proof) {
            std::cout << "proof size " << v.proof->size() << ", checked "
                      << (check_proof(*v.proof, s) ? "yes" : "no") << "\n";
            if (!proof_path.empty()) write_file(proof_path, serialize(*v.proof));
        }
        code = v.kind == Verdict::Derivable ? Positive : v.kind == Verdict::NotDerivable ? Negative : Unknown;
    });

    // member
    auto* member_cmd = app.add_subcommand("member", "Hypergraph membership");
    std::string gram_path, hgr_path;
    bool witness = false;
    long member_budget = MemberOptions{}.budget;
    member_cmd->add_option("grammar", gram_path, ".gram file")->required();
    member_cmd->add_option("graph", hgr_path, ".hgr file")->required();
    member_cmd->add_flag("--witness", witness, "print the lexicon choice, sequent and proof");
    member_cmd->add_option("--budget", member_budget, "focusing decisions per ill1 call")->capture_default_str();
    member_cmd->callback([&] {
        Grammar g = load_gram(gram_path);
        Hypergraph h = load_hgr(hgr_path);
        HypergraphGrammar hg = std::holds_alternative<HypergraphGrammar>(g)
                                   ? std::get<HypergraphGrammar>(g)
                                   : string_to_hyper_grammar(std::get<StringGrammar>(g));
        MemberOptions opts;
        opts.budget = member_budget;
        Membership m = accepts_hypergraph(hg, h, opts);
        std::cout << to_string(m.outcome) << " (" << m.candidates << " candidates)\n";
        if (witness && m.witness) print_witness(*m.witness);
        code = exit_of(m.outcome);
    });

    // member-str
    auto* member_str_cmd = app.add_subcommand("member-str", "String membership");
    std::string word_text;
    member_str_cmd->add_option("grammar", gram_path, ".gram file")->required();
    member_str_cmd->add_option("word", word_text, "letters, or space-separated symbols")->required();
    member_str_cmd->add_flag("--witness", witness, "print the lexicon choice, sequent and proof");
    member_str_cmd->callback([&] {
        Grammar g = load_gram(gram_path);
        Word w = split_word(word_text);
        if (auto* sg = std::get_if<StringGrammar>(&g)) {
            Membership m = accepts_string(*sg, w);
            std::cout << to_string(m.outcome) << " (" << m.candidates << " candidates)\n";
            if (witness && m.witness) print_witness(*m.witness);
            code = exit_of(m.outcome);
        } else {
            Membership m = accepts_hypergraph(std::get<HypergraphGrammar>(g), string_graph(w));
            std::cout << to_string(m.outcome) << " (" << m.candidates << " candidates)\n";
            if (witness && m.witness) print_witness(*m.witness);
            code = exit_of(m.outcome);
        }
    });

    // derive
    auto* derive_cmd = app.add_subcommand("derive", "Search a derivation of a graph");
    std::string hts_path, trace_path;
    int max_steps = 0;
    derive_cmd->add_option("system", hts_path, ".hts file")->required();
    derive_cmd->add_option("graph", hgr_path, ".hgr file")->required();
    derive_cmd->add_option("--max-steps", max_steps, "step bound")->required();
    derive_cmd->add_option("--trace", trace_path, "write every intermediate graph here");
    derive_cmd->callback([&] {
        std::string dir = std::filesystem::path(hts_path).parent_path().string();
        HtSystem sys = parsing(hts_path, [&](const std::string& t) { return parse_hts(t, dir.empty() ? "." : dir); });
        Hypergraph target = load_hgr(hgr_path);
        auto d = derives(sys, target, max_steps);
        if (!d) {
            std::cout << "not found within " << max_steps << " steps\n";
            code = Negative;
            return;
        }
        std::cout << "found in " << d->steps.size() << " steps\n";
        for (const DerivationStep& s : d->steps) std::cout << "  " << s.rule.name << " at " << s.occ.str() << "\n";
        if (!trace_path.empty()) {
            std::ostringstream os;
            os << "# start\n" << render_hgr(d->start);
            for (std::size_t i = 0; i < d->steps.size(); ++i)
                os << "\n# step " << i + 1 << ": " << d->steps[i].rule.name << " at " << d->steps[i].occ.str() << "\n"
                   << render_hgr(d->steps[i].result);
            write_file(trace_path, os.str());
        }
    });

    // encode-rule
    auto* encode_rule_cmd = app.add_subcommand("encode-rule", "Formula of each rule");
    std::string htr_path;
    encode_rule_cmd->add_option("rules", htr_path, ".htr file")->required();
    encode_rule_cmd->callback([&] {
        auto rules = parsing(htr_path, [](const std::string& t) { return parse_htr(t); });
        for (const HtRule& r : rules) std::cout << r.name << " : " << render(rule_formula(r).formula) << "\n";
    });

    // encode-graph
    auto* encode_graph_cmd = app.add_subcommand("encode-graph", "Diagram of a hypergraph");
    bool as_formula = false;
    encode_graph_cmd->add_option("graph", hgr_path, ".hgr file")->required();
    encode_graph_cmd->add_flag("--formula", as_formula, "print the single existential formula");
    encode_graph_cmd->callback([&] {
        Hypergraph h = load_hgr(hgr_path);
        if (as_formula) {
            std::cout << render(diagram_formula(h)) << "\n";
            return;
        }
        auto d = diagram(h);
        for (std::size_t i = 0; i < d.size(); ++i) std::cout << (i ? ", " : "") << render(d[i]);
        std::cout << "\n";
    });

    // translate
    auto* translate_cmd = app.add_subcommand("translate", "Grammar of an ht-system");
    std::string mode, out_path;
    int time_const = 1;
    translate_cmd->add_option("system", hts_path, ".hts file")->required();
    translate_cmd->add_option("--mode", mode, "ill1 or mill1")->required();
    translate_cmd->add_option("--time-const", time_const, "c for linear-time systems (mill1)")->capture_default_str();
    translate_cmd->add_option("-o", out_path, "output .gram")->required();
    translate_cmd->callback([&] {
        std::string dir = std::filesystem::path(hts_path).parent_path().string();
        HtSystem sys = parsing(hts_path, [&](const std::string& t) { return parse_hts(t, dir.empty() ? "." : dir); });
        Logic l = parse_logic(mode);
        HypergraphGrammar g = l == Logic::ILL1 ? ill1_grammar_of(sys) : mill1_grammar_of(sys, time_const);
        write_file(out_path, render_gram(g));
        std::cout << "wrote " << out_path << "\n";
    });

    // intersect
    auto* intersect_cmd = app.add_subcommand("intersect", "Grammar of the intersection");
    std::vector<std::string> gram_pair;
    intersect_cmd->add_option("grammars", gram_pair, "two .gram files")->required()->expected(2);
    intersect_cmd->add_option("-o", out_path, "output .gram")->required();
    intersect_cmd->callback([&] {
        Grammar a = load_gram(gram_pair[0]), b = load_gram(gram_pair[1]);
        if (a.index() != b.index()) throw Error("cannot intersect a string grammar with a hypergraph grammar");
        Grammar g = std::holds_alternative<StringGrammar>(a)
                        ? Grammar(intersection_grammar(std::get<StringGrammar>(a), std::get<StringGrammar>(b)))
                        : Grammar(intersection_grammar(std::get<HypergraphGrammar>(a), std::get<HypergraphGrammar>(b)));
        write_file(out_path, render_gram(g));
        std::cout << "wrote " << out_path << "\n";
    });

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Compare the prover with rule-multiset derivation search");
    std::vector<std::string> reusable_paths, once_paths;
    std::string from_path, to_path;
    int oracle_steps = 8;
    long oracle_budget = 200000;
    oracle_cmd->add_option("--rules", reusable_paths, "reusable rules (.htr)");
    oracle_cmd->add_option("--once", once_paths, "rules used exactly once (.htr)");
    oracle_cmd->add_option("--from", from_path, "source .hgr")->required();
    oracle_cmd->add_option("--to", to_path, "target .hgr")->required();
    oracle_cmd->add_option("--max-steps", oracle_steps, "step bound for the search")->capture_default_str();
    oracle_cmd->add_option("--budget", oracle_budget, "focusing decisions for the prover")->capture_default_str();
    oracle_cmd->callback([&] {
        std::vector<HtRule> reusable, once;
        for (const auto& p : reusable_paths)
            for (HtRule& r : parsing(p, [](const std::string& t) { return parse_htr(t); })) reusable.push_back(r);
        for (const auto& p : once_paths)
            for (HtRule& r : parsing(p, [](const std::string& t) { return parse_htr(t); })) once.push_back(r);
        Hypergraph from = load_hgr(from_path), to = load_hgr(to_path);
        Sequent s = derivation_sequent(from, to, reusable, once);
        Verdict v = prove_ill1(s, oracle_budget, {false});
        auto d = derives_with_rule_multiset(from, to, reusable, once, oracle_steps);
        std::cout << "sequent: " << render(s) << "\n";
        std::cout << "prover: " << to_string(v.kind) << "\n";
        std::cout << "search: " << (d ? "found in " + std::to_string(d->steps.size()) + " steps" : "not found") << "\n";
        if (v.kind == Verdict::BudgetExhausted) {
            code = Unknown;
        } else if (v.derivable() != d.has_value()) {
            std::cout << "disagreement\n";
            code = Unknown;
        } else {
            std::cout << "agree\n";
            code = d ? Positive : Negative;
        }
    });

    // iso
    auto* iso_cmd = app.add_subcommand("iso", "Isomorphism test");
    std::vector<std::string> hgr_pair;
    iso_cmd->add_option("graphs", hgr_pair, "two .hgr files")->required()->expected(2);
    iso_cmd->callback([&] {
        auto m = is_isomorphic(load_hgr(hgr_pair[0]), load_hgr(hgr_pair[1]));
        if (!m) {
            std::cout << "not isomorphic\n";
            code = Negative;
            return;
        }
        std::cout << "isomorphic\n";
        for (const auto& [a, b] : m->nodes) std::cout << "  " << a << " -> " << b << "\n";
        for (const auto& [a, b] : m->edges) std::cout << "  " << a << " -> " << b << "\n";
    });

    // dot
    auto* dot_cmd = app.add_subcommand("dot", "Graphviz export");
    dot_cmd->add_option("graph", hgr_path, ".hgr file")->required();
    dot_cmd->add_option("-o", out_path, "output .dot")->required();
    dot_cmd->callback([&] {
        Hypergraph h = load_hgr(hgr_path);
        write_file(out_path, to_dot(h, std::filesystem::path(hgr_path).stem().string()));
        std::cout << "wrote " << out_path << "\n";
    });

    // corpus
    auto* corpus_cmd = app.add_subcommand("corpus", "Run a bundled suite");
    std::string suite;
    long n = 0;
    std::uint64_t seed = 7;
    int jobs = 1;
    std::string data_dir = HGL_DATA_DIR;
    corpus_cmd->add_option("suite", suite, "paper-examples, lemma1-oracle, algebra, logic, semantics, canonical")
        ->required();
    corpus_cmd->add_option("--n", n, "number of instances (suite default when 0)");
    corpus_cmd->add_option("--seed", seed, "seed")->capture_default_str();
    corpus_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    corpus_cmd->add_option("--data", data_dir, "directory of bundled example files")->capture_default_str();
    corpus_cmd->callback([&] {
        std::vector<SuiteReport> reports;
        if (suite == "paper-examples") {
            reports = worked_examples_suite(data_dir);
        } else if (suite == "lemma1-oracle") {
            reports.push_back(derivation_oracle_suite(n ? n : 200, seed, jobs));
        } else if (suite == "algebra") {
            reports = algebra_suite(n ? n : 1000, seed);
        } else if (suite == "logic") {
            reports = logic_suite(n ? n : 100, seed);
        } else if (suite == "semantics") {
            reports = semantics_suite(n ? n : 50, n ? n : 50, seed);
        } else if (suite == "canonical") {
            reports = canonical_hypergraph_suite();
        } else {
            throw Error("unknown suite '" + suite + "'");
        }
        code = report_suites(suite, seed, reports);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return UsageError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UsageError;
    }
    return code;
}
