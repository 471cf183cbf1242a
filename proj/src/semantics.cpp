#include "hgl/semantics.hpp"

#include <functional>
#include <sstream>

#include "hgl/lexer.hpp"

namespace hgl {

std::size_t BoundedUniverse::measure(const Hypergraph& h) {
    SymbolSet ext;
    for (const auto& [s, v] : h.ext) ext.insert(v);
    return h.edges.size() + (h.nodes.size() - ext.size());
}

bool BoundedUniverse::contains(const Hypergraph& h) const {
    for (const auto& [s, v] : h.ext)
        if (std::find(window.begin(), window.end(), s) == window.end()) return false;
    for (const auto& [id, e] : h.edges) {
        if (!alphabet.contains(e.label)) return false;
        SymbolSet sels;
        for (const auto& [s, v] : e.att) sels.insert(s);
        const auto& want = alphabet.type_of(e.label);
        if (sels != SymbolSet(want.begin(), want.end())) return false;
    }
    return measure(h) <= cap;
}

std::vector<Hypergraph> BoundedUniverse::members() const {
    std::vector<Hypergraph> out;
    std::size_t n = window.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Symbol> type;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) type.push_back(window[i]);
        for (Hypergraph& h : enumerate_hypergraphs(alphabet, type, type.size() + cap, false))
            if (measure(h) <= cap) out.push_back(std::move(h));
    }
    return out;
}

Valuation::Valuation(BoundedUniverse u) : u_(std::move(u)) {}

Valuation::Valuation(const Valuation& other)
    : u_(other.u_), atoms_(other.atoms_), atom_formulas_(other.atom_formulas_) {
    std::lock_guard lock(other.mu_);
    graphs_ = other.graphs_;
    members_ = other.members_;
    have_members_ = other.have_members_;
}

std::string Valuation::intern(const Hypergraph& h) const {
    std::string key = canonical_form(h);
    std::lock_guard lock(mu_);
    graphs_.emplace(key, h);
    return key;
}

const Hypergraph& Valuation::graph(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = graphs_.find(key);
    if (it == graphs_.end()) throw Error("unknown hypergraph key");
    return it->second;
}

const std::vector<std::string>& Valuation::member_keys() const {
    {
        std::lock_guard lock(mu_);
        if (have_members_) return members_;
    }
    std::vector<std::string> keys;
    for (const Hypergraph& h : u_.members()) keys.push_back(intern(h));
    std::lock_guard lock(mu_);
    if (!have_members_) {
        members_ = std::move(keys);
        have_members_ = true;
    }
    return members_;
}

void Valuation::set_atom(const Formula& a, const std::vector<Hypergraph>& graphs) {
    if (!is_atom(a)) throw Error("not an atomic formula: " + render(a));
    for (Symbol x : a->args)
        if (std::find(u_.window.begin(), u_.window.end(), x) == u_.window.end())
            throw Error("atom " + render(a) + " leaves the window");
    std::string k = alpha_key(a);
    atoms_[k].clear();
    atom_formulas_[k] = a;
    for (const Hypergraph& h : graphs) add_to_atom(a, h);
}

void Valuation::add_to_atom(const Formula& a, const Hypergraph& h) {
    if (!is_atom(a)) throw Error("not an atomic formula: " + render(a));
    for (Symbol v : a->args)
        if (std::find(u_.window.begin(), u_.window.end(), v) == u_.window.end())
            throw Error("atom " + render(a) + " leaves the window");
    if (!u_.contains(h)) throw Error("hypergraph outside the universe in the value of " + render(a));
    std::string k = alpha_key(a);
    atom_formulas_[k] = a;
    atoms_[k].insert(intern(h));
    std::lock_guard lock(mu_);
    memo_.clear();
}

std::vector<Formula> Valuation::atoms() const {
    std::vector<Formula> out;
    for (const auto& [k, f] : atom_formulas_) out.push_back(f);
    return out;
}

std::vector<SymbolMap> total_maps(const std::vector<Symbol>& window) {
    std::vector<SymbolMap> out;
    std::size_t n = window.size();
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
        SymbolMap h;
        for (std::size_t i = 0; i < n; ++i) h[window[i]] = window[pick[i]];
        out.push_back(std::move(h));
        std::size_t k = 0;
        while (k < n && ++pick[k] == n) pick[k++] = 0;
        if (k == n) break;
    }
    return out;
}

void Valuation::close_under_substitution() {
    std::vector<SymbolMap> maps = total_maps(u_.window);
    for (bool changed = true; changed;) {
        changed = false;
        for (const Formula& a : atoms()) {
            HypergraphLanguage from = atoms_[alpha_key(a)];
            for (const SymbolMap& h : maps) {
                Formula b = apply_subst(a, h);
                std::string kb = alpha_key(b);
                atom_formulas_.emplace(kb, b);
                for (const std::string& key : from)
                    changed |= atoms_[kb].insert(intern(substitute(graph(key), h))).second;
            }
        }
    }
    std::lock_guard lock(mu_);
    memo_.clear();
}

const HypergraphLanguage& Valuation::eval(const Formula& f) const {
    std::string k = alpha_key(f);
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
    }
    for (Symbol v : free_vars(f))
        if (std::find(u_.window.begin(), u_.window.end(), v) == u_.window.end())
            throw Error("free variable " + v.str() + " of " + render(f) + " is outside the window");
    HypergraphLanguage value = compute(f);
    std::lock_guard lock(mu_);
    return memo_.emplace(k, std::move(value)).first->second;
}

HypergraphLanguage compose(const Valuation& v, const HypergraphLanguage& a, const HypergraphLanguage& b) {
    HypergraphLanguage out;
    std::size_t cap = v.universe().cap;
    for (const std::string& ka : a) {
        const Hypergraph& ha = v.graph(ka);
        std::size_t ma = BoundedUniverse::measure(ha);
        for (const std::string& kb : b) {
            const Hypergraph& hb = v.graph(kb);
            if (ma + BoundedUniverse::measure(hb) > cap) continue;
            out.insert(v.intern(parallel_composition(ha, hb)));
        }
    }
    return out;
}

HypergraphLanguage Valuation::compute(const Formula& f) const {
    switch (f->op) {
        case Op::Atom: {
            auto it = atoms_.find(alpha_key(f));
            return it == atoms_.end() ? HypergraphLanguage{} : it->second;
        }
        case Op::Tensor: return compose(*this, eval(f->a), eval(f->b));
        case Op::Lolli: {
            const HypergraphLanguage& la = eval(f->a);
            const HypergraphLanguage& lb = eval(f->b);
            HypergraphLanguage out;
            for (const std::string& k : member_keys()) {
                const Hypergraph& h = graph(k);
                std::size_t m = BoundedUniverse::measure(h);
                bool ok = true;
                for (const std::string& ka : la) {
                    const Hypergraph& ha = graph(ka);
                    if (m + BoundedUniverse::measure(ha) > u_.cap) continue;
                    if (!lb.count(intern(parallel_composition(h, ha)))) {
                        ok = false;
                        break;
                    }
                }
                if (ok) out.insert(k);
            }
            return out;
        }
        case Op::Exists:
        case Op::Forall: {
            HypergraphLanguage out;
            bool first = true;
            for (Symbol y : u_.window) {
                const HypergraphLanguage& l = eval(apply_subst(f->a, {{f->sym, y}}));
                if (f->op == Op::Exists) {
                    out.insert(l.begin(), l.end());
                } else if (first) {
                    out = l;
                } else {
                    HypergraphLanguage keep;
                    for (const std::string& k : out)
                        if (l.count(k)) keep.insert(k);
                    out = std::move(keep);
                }
                first = false;
            }
            return out;
        }
        case Op::Bang: throw Error("`!` has no hypergraph language value");
    }
    return {};
}

bool sequent_true(const Valuation& v, const Sequent& s) {
    HypergraphLanguage cur{v.intern(empty_hypergraph())};
    for (const Formula& a : s.ante) cur = compose(v, cur, v.eval(a));
    const HypergraphLanguage& goal = v.eval(s.succ);
    for (const std::string& k : cur)
        if (!goal.count(k)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// clause checks

namespace {

void check_clause1(const Valuation& v, const Formula& a, const std::vector<SymbolMap>& maps, ModelReport& rep) {
    const HypergraphLanguage& from = v.eval(a);
    for (const SymbolMap& h : maps) {
        ++rep.checks;
        Formula ah = apply_subst(a, h);
        const HypergraphLanguage& to = v.eval(ah);
        for (const std::string& k : from) {
            if (!to.count(canonical_form(substitute(v.graph(k), h)))) {
                std::string hs;
                for (const auto& [x, y] : h) hs += (hs.empty() ? "" : ",") + x.str() + "->" + y.str();
                rep.violations.push_back("clause 1: " + render(a) + " under {" + hs + "}");
                break;
            }
        }
    }
}

// Clauses 2-5 for f itself, with the operand values recomputed directly.
void check_structure(const Valuation& v, const Formula& f, ModelReport& rep) {
    const BoundedUniverse& u = v.universe();
    auto fresh_key = [](const Hypergraph& h) { return canonical_form(h); };
    switch (f->op) {
        case Op::Atom:
        case Op::Bang: return;
        case Op::Tensor: {
            ++rep.checks;
            HypergraphLanguage want;
            for (const std::string& ka : v.eval(f->a))
                for (const std::string& kb : v.eval(f->b)) {
                    Hypergraph c = parallel_composition(v.graph(ka), v.graph(kb));
                    if (BoundedUniverse::measure(c) <= u.cap) want.insert(fresh_key(c));
                }
            if (want != v.eval(f)) rep.violations.push_back("clause 2: " + render(f));
            break;
        }
        case Op::Lolli: {
            ++rep.checks;
            HypergraphLanguage want;
            for (const Hypergraph& h : u.members()) {
                bool ok = true;
                for (const std::string& ka : v.eval(f->a)) {
                    Hypergraph c = parallel_composition(h, v.graph(ka));
                    if (BoundedUniverse::measure(c) <= u.cap && !v.eval(f->b).count(fresh_key(c))) ok = false;
                }
                if (ok) want.insert(fresh_key(h));
            }
            if (want != v.eval(f)) rep.violations.push_back("clause 3: " + render(f));
            break;
        }
        case Op::Exists:
        case Op::Forall: {
            ++rep.checks;
            // membership test per stored graph rather than set algebra
            HypergraphLanguage want;
            for (const Hypergraph& h : u.members()) {
                std::string k = fresh_key(h);
                bool any = false, all = true;
                for (Symbol y : u.window) {
                    bool in = v.eval(apply_subst(f->a, {{f->sym, y}})).count(k) != 0;
                    any = any || in;
                    all = all && in;
                }
                if (f->op == Op::Exists ? any : all) want.insert(k);
            }
            if (want != v.eval(f))
                rep.violations.push_back(std::string(f->op == Op::Exists ? "clause 4: " : "clause 5: ") + render(f));
            for (Symbol y : u.window) check_structure(v, apply_subst(f->a, {{f->sym, y}}), rep);
            return;
        }
    }
    check_structure(v, f->a, rep);
    check_structure(v, f->b, rep);
}

}  // namespace

ModelReport check_substitution_clause(const Valuation& v, const std::vector<Formula>& samples) {
    ModelReport rep;
    std::vector<SymbolMap> maps = total_maps(v.universe().window);
    for (const Formula& a : samples) check_clause1(v, a, maps, rep);
    return rep;
}

ModelReport check_connective_clauses(const Valuation& v, const std::vector<Formula>& samples) {
    ModelReport rep;
    for (const Formula& a : samples) check_structure(v, a, rep);
    return rep;
}

ModelReport check_model_axioms(const Valuation& v, const std::vector<Formula>& samples) {
    ModelReport rep = check_substitution_clause(v, samples);
    for (const Formula& a : samples) check_structure(v, a, rep);
    return rep;
}

// ---------------------------------------------------------------------------
// canonical hypergraphs

Symbol circ_label(const Formula& f) { return Symbol(alpha_key(circ(f))); }

Hypergraph canonical_hypergraph(const std::vector<Formula>& gamma, const Formula& a, const SymbolSet& x,
                                const SymbolSet& y) {
    Hypergraph h;
    for (const Formula& g : gamma)
        for (Symbol v : free_vars(g)) h.nodes.insert(v);
    h.nodes.insert(x.begin(), x.end());
    for (Symbol v : y)
        if (!h.nodes.count(v)) throw Error("Y must lie within FVar(Γ) ∪ X, " + v.str() + " does not");
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        Edge e{circ_label(gamma[i]), {}};
        std::vector<Symbol> occ = free_occurrences(gamma[i]);
        for (std::size_t j = 0; j < occ.size(); ++j) e.att[xi(static_cast<int>(j) + 1)] = occ[j];
        h.edges[Symbol("e" + std::to_string(i + 1))] = std::move(e);
    }
    for (Symbol v : free_vars(a))
        if (h.nodes.count(v)) h.ext[v] = v;
    for (Symbol v : y) h.ext[v] = v;
    return h;
}

// ---------------------------------------------------------------------------
// files

Valuation parse_valuation(const std::string& text) {
    Lexer lx(text);
    lx.skip_newlines();
    BoundedUniverse u;
    bool have_window = false;
    std::vector<std::pair<Formula, std::vector<Hypergraph>>> entries;
    while (!lx.at_end()) {
        Token kw = lx.expect_ident("declaration");
        if (kw.text == "window") {
            lx.expect("{");
            while (!lx.at("}")) {
                u.window.emplace_back(lx.expect_ident("variable").text);
                if (!lx.accept(",")) break;
            }
            lx.expect("}");
            have_window = true;
        } else if (kw.text == "cap") {
            Token n = lx.expect_ident("number");
            try {
                u.cap = static_cast<std::size_t>(std::stoul(n.text));
            } catch (const std::exception&) {
                Lexer::fail("expected a number", n);
            }
        } else if (kw.text == "type") {
            Token l = lx.expect_ident("label");
            std::vector<Symbol> sels;
            lx.expect("{");
            while (!lx.at("}")) {
                sels.emplace_back(lx.expect_ident("selector").text);
                if (!lx.accept(",")) break;
            }
            lx.expect("}");
            u.alphabet.add(Symbol(l.text), sels);
        } else if (kw.text == "atom") {
            Token at = lx.peek();
            Formula a = parse_formula(lx);
            if (!is_atom(a)) Lexer::fail("expected an atomic formula", at);
            lx.expect(":");
            lx.expect("{");
            lx.skip_newlines();
            std::vector<Hypergraph> graphs;
            while (!lx.at("}")) {
                lx.expect("{");
                graphs.push_back(parse_hgr_statements(lx));
                lx.expect("}");
                lx.skip_newlines();
                if (!lx.accept(",")) break;
                lx.skip_newlines();
            }
            lx.expect("}");
            entries.emplace_back(a, std::move(graphs));
        } else {
            Lexer::fail("unknown declaration '" + kw.text + "'", kw);
        }
        lx.end_statement();
    }
    if (!have_window) throw Error("valuation file has no window");
    Valuation v(u);
    for (const auto& [a, gs] : entries) {
        for (const Hypergraph& g : gs) g.validate();
        v.set_atom(a, gs);
    }
    return v;
}

std::string render_valuation(const Valuation& v) {
    std::ostringstream os;
    const BoundedUniverse& u = v.universe();
    os << "window {";
    for (std::size_t i = 0; i < u.window.size(); ++i) os << (i ? ", " : " ") << u.window[i];
    os << " }\ncap " << u.cap << "\n";
    for (const auto& [l, sels] : u.alphabet.types) {
        os << "type " << l << " {";
        for (std::size_t i = 0; i < sels.size(); ++i) os << (i ? ", " : " ") << sels[i];
        os << " }\n";
    }
    for (const Formula& a : v.atoms()) {
        os << "atom " << render(a) << " : {";
        bool first = true;
        for (const std::string& k : v.eval(a)) {
            os << (first ? "\n" : ",\n") << "  {\n";
            std::istringstream body(render_hgr(v.graph(k)));
            for (std::string line; std::getline(body, line);)
                if (!line.empty()) os << "    " << line << "\n";
            os << "  }";
            first = false;
        }
        os << "\n}\n";
    }
    return os.str();
}

}  // namespace hgl
