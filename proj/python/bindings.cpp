#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hgl/encoding.hpp"
#include "hgl/grammar.hpp"
#include "hgl/ht.hpp"
#include "hgl/prover.hpp"
#include "hgl/suites.hpp"

namespace py = pybind11;
using namespace hgl;

namespace {

std::map<std::string, std::string> symbol_map(const SymbolMap& m) {
    std::map<std::string, std::string> out;
    for (const auto& [a, b] : m) out[a.str()] = b.str();
    return out;
}

SymbolMap to_symbol_map(const std::map<std::string, std::string>& m) {
    SymbolMap out;
    for (const auto& [a, b] : m) out[Symbol(a)] = Symbol(b);
    return out;
}

Logic logic_of(const std::string& s) {
    if (s == "mill1") return Logic::MILL1;
    if (s == "ill1") return Logic::ILL1;
    throw Error("unknown logic '" + s + "'");
}

py::dict membership_dict(const Membership& m) {
    py::dict d;
    d["outcome"] = to_string(m.outcome);
    d["candidates"] = m.candidates;
    if (m.witness) {
        d["sequent"] = render(m.witness->sequent);
        d["proof"] = serialize(m.witness->proof);
        std::map<std::string, std::string> choice;
        for (const auto& [k, f] : m.witness->edge_choice) choice[k.str()] = render(f);
        for (const auto& [k, f] : m.witness->node_choice) choice["node " + k.str()] = render(f);
        d["choice"] = choice;
    } else {
        d["sequent"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hypergraph grammars over first-order linear logic";
    py::register_exception<Error>(m, "HglError", PyExc_ValueError);

    py::class_<Hypergraph>(m, "Hypergraph")
        .def_static("parse", [](const std::string& text) { return parse_hgr(text); })
        .def_static("string_graph",
                    [](const std::string& word) {
                        Word w = split_word(word);
                        return string_graph(w);
                    })
        .def_static("empty", &empty_hypergraph)
        .def("render", &render_hgr)
        .def("dot", [](const Hypergraph& h, const std::string& name) { return to_dot(h, name); }, py::arg("name") = "H")
        .def_property_readonly("nodes",
                               [](const Hypergraph& h) {
                                   std::vector<std::string> out;
                                   for (Symbol v : h.nodes) out.push_back(v.str());
                                   return out;
                               })
        .def_property_readonly("edges",
                               [](const Hypergraph& h) {
                                   std::map<std::string, std::pair<std::string, std::map<std::string, std::string>>> out;
                                   for (const auto& [id, e] : h.edges) out[id.str()] = {e.label.str(), symbol_map(e.att)};
                                   return out;
                               })
        .def_property_readonly("ext", [](const Hypergraph& h) { return symbol_map(h.ext); })
        .def_property_readonly("type",
                               [](const Hypergraph& h) {
                                   std::vector<std::string> out;
                                   for (Symbol s : h.type()) out.push_back(s.str());
                                   return out;
                               })
        .def("size", [](const Hypergraph& h) { return h.size(); })
        .def("canonical_form", &canonical_form)
        .def("isomorphic", [](const Hypergraph& a, const Hypergraph& b) { return is_isomorphic(a, b).has_value(); })
        .def("parallel", &parallel_composition)
        .def("substitute", [](const Hypergraph& h, const std::map<std::string, std::string>& sub) {
            return substitute(h, to_symbol_map(sub));
        })
        .def("diagram", [](const Hypergraph& h) {
            std::vector<std::string> out;
            for (const Formula& f : diagram(h)) out.push_back(render(f));
            return out;
        })
        .def("diagram_formula", [](const Hypergraph& h) { return render(diagram_formula(h)); })
        .def("__eq__", [](const Hypergraph& a, const Hypergraph& b) { return a == b; })
        .def("__repr__", [](const Hypergraph& h) {
            return "<Hypergraph " + std::to_string(h.nodes.size()) + " nodes, " + std::to_string(h.edges.size()) +
                   " edges>";
        });

    m.def(
        "prove",
        [](const std::string& sequent, const std::string& logic, long budget) {
            Sequent s = parse_sequent(sequent);
            Verdict v = prove(s, logic_of(logic), budget);
            py::dict d;
            d["verdict"] = to_string(v.kind);
            d["proof"] = v.proof ? py::cast(serialize(*v.proof)) : py::none();
            d["checked"] = v.proof && check_proof(*v.proof, s);
            return d;
        },
        py::arg("sequent"), py::arg("logic") = "mill1", py::arg("budget") = 10000);

    m.def("alpha_eq", [](const std::string& a, const std::string& b) {
        return alpha_eq(parse_formula(a), parse_formula(b));
    });
    m.def("sequent_alpha_eq", [](const std::string& a, const std::string& b) {
        return sequent_alpha_eq(parse_sequent(a), parse_sequent(b));
    });

    m.def("encode_rules", [](const std::string& htr) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const HtRule& r : parse_htr(htr)) out.emplace_back(r.name, render(rule_formula(r).formula));
        return out;
    });

    m.def(
        "member",
        [](const std::string& gram, const Hypergraph& h) {
            Grammar g = parse_gram(gram);
            HypergraphGrammar hg = std::holds_alternative<HypergraphGrammar>(g)
                                       ? std::get<HypergraphGrammar>(g)
                                       : string_to_hyper_grammar(std::get<StringGrammar>(g));
            return membership_dict(accepts_hypergraph(hg, h));
        },
        py::arg("grammar"), py::arg("graph"));

    m.def(
        "member_str",
        [](const std::string& gram, const std::string& word) {
            Grammar g = parse_gram(gram);
            Word w = split_word(word);
            if (auto* sg = std::get_if<StringGrammar>(&g)) return membership_dict(accepts_string(*sg, w));
            return membership_dict(accepts_hypergraph(std::get<HypergraphGrammar>(g), string_graph(w)));
        },
        py::arg("grammar"), py::arg("word"));

    m.def(
        "derive",
        [](const std::string& hts, const Hypergraph& target, int max_steps) -> py::object {
            auto d = derives(parse_hts(hts), target, max_steps);
            if (!d) return py::none();
            std::vector<std::string> names;
            for (const DerivationStep& s : d->steps) names.push_back(s.rule.name);
            return py::cast(names);
        },
        py::arg("system"), py::arg("target"), py::arg("max_steps"));

    m.def(
        "translate",
        [](const std::string& hts, const std::string& mode, int time_const) {
            HtSystem sys = parse_hts(hts);
            return render_gram(logic_of(mode) == Logic::ILL1 ? ill1_grammar_of(sys) : mill1_grammar_of(sys, time_const));
        },
        py::arg("system"), py::arg("mode"), py::arg("time_const") = 1);

    m.def(
        "corpus",
        [](const std::string& suite, long n, std::uint64_t seed) {
            std::vector<SuiteReport> reports;
            if (suite == "lemma1-oracle") reports.push_back(derivation_oracle_suite(n ? n : 200, seed));
            else if (suite == "algebra") reports = algebra_suite(n ? n : 1000, seed);
            else if (suite == "logic") reports = logic_suite(n ? n : 100, seed);
            else if (suite == "semantics") reports = semantics_suite(n ? n : 50, n ? n : 50, seed);
            else if (suite == "canonical") reports = canonical_hypergraph_suite();
            else throw Error("unknown suite '" + suite + "'");
            py::list out;
            for (const SuiteReport& r : reports) {
                py::dict d;
                d["name"] = r.name;
                d["cases"] = r.cases;
                d["failures"] = r.failures;
                d["unknown"] = r.unknown;
                d["seed"] = seed;
                d["notes"] = r.notes;
                out.append(d);
            }
            return out;
        },
        py::arg("suite"), py::arg("n") = 0, py::arg("seed") = 7);
}
