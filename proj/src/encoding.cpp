#include "hgl/encoding.hpp"

#include <algorithm>
#include <functional>

namespace hgl {

std::vector<Formula> diagram(const Hypergraph& h, const Alphabet& order) {
    std::vector<Formula> out;
    for (const auto& [id, e] : h.edges) {
        std::vector<Symbol> args;
        for (Symbol sel : order.selectors_of(e)) args.push_back(e.att.at(sel));
        out.push_back(atom(e.label, std::move(args)));
    }
    for (Symbol v : h.nodes) out.push_back(atom(nu_pred(), {v}));
    return out;
}

Formula diagram_formula(const Hypergraph& h, const Alphabet& order) {
    if (h.nodes.empty() && h.edges.empty()) throw Error("the empty hypergraph has no diagram formula");
    SymbolSet ext;
    for (const auto& [s, n] : h.ext) ext.insert(n);
    std::vector<Symbol> internal;
    for (Symbol v : h.nodes)
        if (!ext.count(v)) internal.push_back(v);
    return exists_all(internal, tensor_all(diagram(h, order)));
}

EncodedRule rule_formula(const HtRule& p, const Alphabet& order) {
    p.validate();
    EncodedRule r;
    r.rule = p;
    for (const auto& [s, n] : p.lhs.ext) r.chi[n] = p.rhs.ext.at(s);
    std::vector<Symbol> us;
    SymbolSet rext;
    for (const auto& [s, n] : p.rhs.ext) rext.insert(n);
    for (Symbol v : p.rhs.nodes)
        if (rext.count(v)) us.push_back(v);
    r.formula = forall_all(us, lolli(diagram_formula(p.rhs, order), apply_subst(diagram_formula(p.lhs, order), r.chi)));
    return r;
}

Sequent derivation_sequent(const Hypergraph& source, const Hypergraph& target,
                           const std::vector<HtRule>& reusable, const std::vector<HtRule>& once,
                           const Alphabet& order) {
    if (source.type() != target.type()) throw Error("source and target types differ");
    Sequent s;
    for (const auto& r : reusable) s.ante.push_back(bang(rule_formula(r, order).formula));
    for (const auto& r : once) s.ante.push_back(rule_formula(r, order).formula);
    for (const Formula& f : diagram(target, order)) s.ante.push_back(f);
    SymbolMap chi;
    for (const auto& [sel, n] : source.ext) chi[n] = target.ext.at(sel);
    s.succ = apply_subst(diagram_formula(source, order), chi);
    return s;
}

namespace {

Formula start_formula(const HtSystem& sys, const Alphabet& order) {
    SymbolMap h;
    for (const auto& [s, n] : sys.start.ext) h[n] = s;
    return apply_subst(diagram_formula(sys.start, order), h);
}

void plain_lexicon(const HtSystem& sys, HypergraphGrammar& g) {
    g.terminals = sys.terminals;
    g.ext_type = sys.start.type();
    for (const auto& [a, sels] : sys.terminals.types) g.lexicon[a].push_back(atom(a, sels));
    g.node_lexicon.push_back(atom(nu_pred(), {x_dot()}));
}

std::vector<Formula> sorted_rule_formulas(const HtSystem& sys, const Alphabet& order) {
    std::vector<Formula> fms;
    for (const auto& r : sys.rules) fms.push_back(rule_formula(r, order).formula);
    std::stable_sort(fms.begin(), fms.end(), formula_less);
    return fms;
}

}  // namespace

HypergraphGrammar ill1_grammar_of(const HtSystem& sys) {
    sys.validate();
    Alphabet order = sys.alphabet();
    HypergraphGrammar g;
    g.logic = Logic::ILL1;
    plain_lexicon(sys, g);
    Formula goal = start_formula(sys, order);
    std::vector<Formula> banged;
    for (const Formula& f : sorted_rule_formulas(sys, order)) banged.push_back(bang(f));
    g.start = banged.empty() ? goal : lolli(tensor_all(banged), goal);
    g.validate();
    return g;
}

HypergraphGrammar mill1_grammar_of(const HtSystem& sys, int c) {
    if (c < 0) throw Error("time constant must be nonnegative");
    sys.validate();
    Alphabet order = sys.alphabet();
    HypergraphGrammar g;
    g.logic = Logic::MILL1;
    plain_lexicon(sys, g);
    g.start = start_formula(sys, order);
    if (c > 0) {
        g.pool = sorted_rule_formulas(sys, order);
        g.pool_slots = g.pool.empty() ? 0 : c;
    }
    g.validate();
    return g;
}

namespace {

Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
    switch (f->op) {
        case Op::Atom: return fn(f);
        case Op::Tensor: return tensor(map_atoms(f->a, fn), map_atoms(f->b, fn));
        case Op::Lolli: return lolli(map_atoms(f->a, fn), map_atoms(f->b, fn));
        case Op::Exists: return exists(f->sym, map_atoms(f->a, fn));
        case Op::Forall: return forall(f->sym, map_atoms(f->a, fn));
        case Op::Bang: return bang(map_atoms(f->a, fn));
    }
    return f;
}

Formula suffix_predicates(const Formula& f, const std::string& suffix) {
    return map_atoms(f, [&](const Formula& a) { return atom(Symbol(a->sym.str() + suffix), a->args); });
}

std::vector<Formula> suffix_all(const std::vector<Formula>& fs, const std::string& suffix) {
    std::vector<Formula> out;
    for (const Formula& f : fs) out.push_back(suffix_predicates(f, suffix));
    return out;
}

std::vector<Formula> pairwise(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    std::vector<Formula> out;
    for (const Formula& x : a)
        for (const Formula& y : b) out.push_back(tensor(x, y));
    return out;
}

void predicates_of(const Formula& f, SymbolSet& out) {
    map_atoms(f, [&](const Formula& a) {
        out.insert(a->sym);
        return a;
    });
}

Symbol fresh_predicate(const std::string& base, const SymbolSet& used) {
    std::string name = base;
    while (used.count(Symbol(name))) name += "'";
    return Symbol(name);
}

}  // namespace

HypergraphGrammar intersection_grammar(const HypergraphGrammar& g1, const HypergraphGrammar& g2) {
    if (!g1.pool.empty() && !g2.pool.empty()) throw Error("cannot intersect two pooled grammars");
    HypergraphGrammar g;
    g.logic = (g1.logic == Logic::ILL1 || g2.logic == Logic::ILL1) ? Logic::ILL1 : Logic::MILL1;
    g.ext_type = g1.ext_type;
    for (const auto& [a, sels] : g1.terminals.types) g.terminals.add(a, sels);
    for (const auto& [a, sels] : g2.terminals.types) {
        if (g.terminals.contains(a) && g.terminals.type_of(a) != sels) {
            SymbolSet x(sels.begin(), sels.end()), y(g.terminals.type_of(a).begin(), g.terminals.type_of(a).end());
            if (x != y) throw Error("label " + a.str() + " has different types in the two grammars");
            continue;
        }
        g.terminals.add(a, sels);
    }
    g.start = tensor(suffix_predicates(g1.start, "@1"), suffix_predicates(g2.start, "@2"));
    if (g1.ext_type != g2.ext_type) return g;  // empty language
    for (const auto& [a, f1] : g1.lexicon) {
        auto it = g2.lexicon.find(a);
        if (it == g2.lexicon.end()) continue;
        g.lexicon[a] = pairwise(suffix_all(f1, "@1"), suffix_all(it->second, "@2"));
    }
    g.node_lexicon = pairwise(suffix_all(g1.node_lexicon, "@1"), suffix_all(g2.node_lexicon, "@2"));
    if (!g1.pool.empty()) {
        g.pool = suffix_all(g1.pool, "@1");
        g.pool_slots = g1.pool_slots;
    } else if (!g2.pool.empty()) {
        g.pool = suffix_all(g2.pool, "@2");
        g.pool_slots = g2.pool_slots;
    }
    g.validate();
    return g;
}

StringGrammar intersection_grammar(const StringGrammar& g1, const StringGrammar& g2) {
    StringGrammar g;
    g.logic = (g1.logic == Logic::ILL1 || g2.logic == Logic::ILL1) ? Logic::ILL1 : Logic::MILL1;
    g.alphabet = g1.alphabet;
    g.alphabet.insert(g2.alphabet.begin(), g2.alphabet.end());
    g.start = tensor(suffix_predicates(g1.start, "@1"), suffix_predicates(g2.start, "@2"));
    for (const auto& [a, f1] : g1.lexicon) {
        auto it = g2.lexicon.find(a);
        if (it == g2.lexicon.end()) continue;
        g.lexicon[a] = pairwise(suffix_all(f1, "@1"), suffix_all(it->second, "@2"));
    }
    g.validate();
    return g;
}

HypergraphGrammar string_to_hyper_grammar(const StringGrammar& g) {
    SymbolSet used;
    predicates_of(g.start, used);
    for (const auto& [a, fs] : g.lexicon)
        for (const Formula& f : fs) predicates_of(f, used);
    Formula qq = [&] {
        Symbol q = fresh_predicate("q", used);
        return lolli(atom(q), atom(q));
    }();
    HypergraphGrammar h;
    h.logic = g.logic;
    const std::vector<Symbol> st{Symbol("s"), Symbol("t")};
    for (Symbol a : g.alphabet) h.terminals.add(a, st);
    h.ext_type = SymbolSet(st.begin(), st.end());
    h.start = tensor(g.start, qq);
    h.lexicon = g.lexicon;
    h.node_lexicon = {qq};
    h.validate();
    return h;
}

Symbol border_predicate(const HypergraphGrammar& g) {
    SymbolSet used;
    predicates_of(g.start, used);
    for (const auto& [a, fs] : g.lexicon)
        for (const Formula& f : fs) predicates_of(f, used);
    for (const Formula& f : g.node_lexicon) predicates_of(f, used);
    return fresh_predicate("mu", used);
}

StringGrammar hyper_to_string_grammar(const HypergraphGrammar& g) {
    const Symbol s("s"), t("t");
    if (g.ext_type != SymbolSet{s, t}) throw Error("string conversion needs external type {s, t}");
    if (!g.pool.empty()) throw Error("string conversion of pooled grammars is not supported");
    Symbol mu = border_predicate(g);
    StringGrammar out;
    out.logic = g.logic;
    out.start = tensor(atom(mu, {s}), g.start);
    for (const auto& [a, sels] : g.terminals.types) {
        if (SymbolSet(sels.begin(), sels.end()) != SymbolSet{s, t}) continue;
        out.alphabet.insert(a);
        auto it = g.lexicon.find(a);
        if (it == g.lexicon.end()) continue;
        auto& entries = out.lexicon[a];
        for (const Formula& b : it->second) {
            for (const Formula& c : g.node_lexicon) entries.push_back(tensor(b, apply_subst(c, {{x_dot(), t}})));
            for (const Formula& c1 : g.node_lexicon)
                for (const Formula& c2 : g.node_lexicon)
                    entries.push_back(tensor_all({b, atom(mu, {s}), apply_subst(c1, {{x_dot(), s}}),
                                                  apply_subst(c2, {{x_dot(), t}})}));
        }
    }
    out.validate();
    return out;
}

HtSystem srs_to_hts(const std::vector<std::pair<std::string, std::string>>& rules, const std::string& start,
                    const std::string& terminals) {
    HtSystem sys;
    const std::vector<Symbol> st{Symbol("s"), Symbol("t")};
    auto declare = [&](const std::string& w) {
        for (char c : w) {
            Symbol l(std::string(1, c));
            Alphabet& a = terminals.find(c) != std::string::npos ? sys.terminals : sys.nonterminals;
            if (!a.contains(l)) a.add(l, st);
        }
    };
    for (char c : terminals) declare(std::string(1, c));
    if (start.empty()) throw Error("the start string must be nonempty");
    declare(start);
    sys.start = string_graph(word_of(start));
    int k = 0;
    for (const auto& [alpha, beta] : rules) {
        ++k;
        if (alpha.empty() || beta.empty()) throw Error("string rewriting rules need nonempty sides");
        declare(alpha);
        declare(beta);
        sys.rules.push_back({alpha + "_" + beta, string_graph(word_of(alpha)), string_graph(word_of(beta))});
    }
    sys.validate();
    return sys;
}

namespace {

void ac_key(const Formula& f, std::vector<Symbol>& bound, std::string& out) {
    switch (f->op) {
        case Op::Atom:
            out += f->sym.str() + "(";
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) out += ',';
                auto it = std::find(bound.rbegin(), bound.rend(), f->args[i]);
                out += it != bound.rend() ? "%" + std::to_string(it - bound.rbegin()) : f->args[i].str();
            }
            out += ')';
            return;
        case Op::Tensor: {
            std::vector<Formula> parts;
            std::function<void(const Formula&)> flat = [&](const Formula& g) {
                if (g->op == Op::Tensor) {
                    flat(g->a);
                    flat(g->b);
                } else {
                    parts.push_back(g);
                }
            };
            flat(f);
            std::vector<std::string> keys;
            for (const Formula& p : parts) {
                std::string k;
                ac_key(p, bound, k);
                keys.push_back(std::move(k));
            }
            std::sort(keys.begin(), keys.end());
            out += "*(";
            for (const auto& k : keys) out += k + ";";
            out += ')';
            return;
        }
        case Op::Lolli:
            out += ">(";
            ac_key(f->a, bound, out);
            out += ',';
            ac_key(f->b, bound, out);
            out += ')';
            return;
        case Op::Bang:
            out += "!(";
            ac_key(f->a, bound, out);
            out += ')';
            return;
        case Op::Exists:
        case Op::Forall:
            out += f->op == Op::Exists ? "E." : "A.";
            bound.push_back(f->sym);
            ac_key(f->a, bound, out);
            bound.pop_back();
            return;
    }
}

}  // namespace

bool alpha_eq_ac(const Formula& a, const Formula& b) {
    std::string ka, kb;
    std::vector<Symbol> bound;
    ac_key(a, bound, ka);
    ac_key(b, bound, kb);
    return ka == kb;
}

}  // namespace hgl
