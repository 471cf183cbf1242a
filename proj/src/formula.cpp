#include "hgl/formula.hpp"

#include <algorithm>
#include <functional>

#include "hgl/lexer.hpp"

namespace hgl {

Symbol nu_pred() {
    static const Symbol s("ν");
    return s;
}

Symbol x_dot() {
    static const Symbol s("x•");
    return s;
}

Symbol xi(int i) { return Symbol("ξ" + std::to_string(i)); }

bool is_reserved_variable(Symbol v) {
    const std::string& n = v.str();
    if (v == Symbol("s") || v == Symbol("t") || v == x_dot() || v == nu_pred()) return true;
    return n.starts_with("ξ");
}

namespace {

Formula make(Op op, Symbol sym, std::vector<Symbol> args, Formula a, Formula b) {
    return std::make_shared<const FNode>(FNode{op, sym, std::move(args), std::move(a), std::move(b)});
}

}  // namespace

Formula atom(Symbol pred, std::vector<Symbol> args) { return make(Op::Atom, pred, std::move(args), {}, {}); }
Formula tensor(Formula a, Formula b) { return make(Op::Tensor, {}, {}, std::move(a), std::move(b)); }
Formula lolli(Formula a, Formula b) { return make(Op::Lolli, {}, {}, std::move(a), std::move(b)); }
Formula exists(Symbol v, Formula body) { return make(Op::Exists, v, {}, std::move(body), {}); }
Formula forall(Symbol v, Formula body) { return make(Op::Forall, v, {}, std::move(body), {}); }
Formula bang(Formula a) { return make(Op::Bang, {}, {}, std::move(a), {}); }

Formula exists_all(const std::vector<Symbol>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, body);
    return body;
}

Formula forall_all(const std::vector<Symbol>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, body);
    return body;
}

Formula tensor_all(const std::vector<Formula>& fs) {
    if (fs.empty()) throw Error("empty tensor product");
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = tensor(acc, fs[i]);
    return acc;
}

bool has_bang(const Formula& f) {
    switch (f->op) {
        case Op::Atom: return false;
        case Op::Bang: return true;
        case Op::Tensor:
        case Op::Lolli: return has_bang(f->a) || has_bang(f->b);
        default: return has_bang(f->a);
    }
}

bool has_quantifier(const Formula& f) {
    switch (f->op) {
        case Op::Atom: return false;
        case Op::Exists:
        case Op::Forall: return true;
        case Op::Tensor:
        case Op::Lolli: return has_quantifier(f->a) || has_quantifier(f->b);
        default: return has_quantifier(f->a);
    }
}

void collect_predicates(const Formula& f, std::map<Symbol, std::size_t>& arity) {
    if (f->op == Op::Atom) {
        auto [it, inserted] = arity.emplace(f->sym, f->args.size());
        if (!inserted && it->second != f->args.size())
            throw Error("predicate " + f->sym.str() + " used with arities " + std::to_string(it->second) +
                        " and " + std::to_string(f->args.size()));
        return;
    }
    if (f->a) collect_predicates(f->a, arity);
    if (f->b) collect_predicates(f->b, arity);
}

void check_arities(const std::vector<Formula>& fs) {
    std::map<Symbol, std::size_t> arity;
    for (const Formula& f : fs) collect_predicates(f, arity);
}

namespace {

void occurrences(const Formula& f, std::vector<Symbol>& bound, std::vector<Symbol>& out) {
    switch (f->op) {
        case Op::Atom:
            for (Symbol x : f->args)
                if (std::find(bound.begin(), bound.end(), x) == bound.end()) out.push_back(x);
            return;
        case Op::Exists:
        case Op::Forall:
            bound.push_back(f->sym);
            occurrences(f->a, bound, out);
            bound.pop_back();
            return;
        case Op::Bang: occurrences(f->a, bound, out); return;
        default:
            occurrences(f->a, bound, out);
            occurrences(f->b, bound, out);
    }
}

}  // namespace

std::vector<Symbol> free_occurrences(const Formula& f) {
    std::vector<Symbol> bound, out;
    occurrences(f, bound, out);
    return out;
}

SymbolSet free_vars(const Formula& f) {
    std::vector<Symbol> occ = free_occurrences(f);
    return SymbolSet(occ.begin(), occ.end());
}

Formula apply_subst(const Formula& f, const SymbolMap& h) {
    if (h.empty()) return f;
    switch (f->op) {
        case Op::Atom: {
            std::vector<Symbol> args = f->args;
            bool changed = false;
            for (Symbol& x : args) {
                auto it = h.find(x);
                if (it != h.end() && it->second != x) {
                    x = it->second;
                    changed = true;
                }
            }
            return changed ? atom(f->sym, std::move(args)) : f;
        }
        case Op::Tensor:
        case Op::Lolli: {
            Formula a = apply_subst(f->a, h), b = apply_subst(f->b, h);
            if (a == f->a && b == f->b) return f;
            return f->op == Op::Tensor ? tensor(a, b) : lolli(a, b);
        }
        case Op::Bang: {
            Formula a = apply_subst(f->a, h);
            return a == f->a ? f : bang(a);
        }
        case Op::Exists:
        case Op::Forall: {
            SymbolSet fv = free_vars(f->a);
            SymbolMap inner;
            for (const auto& [k, v] : h)
                if (k != f->sym && fv.count(k) && k != v) inner[k] = v;
            if (inner.empty()) return f;
            Symbol x = f->sym;
            bool clash = std::any_of(inner.begin(), inner.end(), [&](const auto& kv) { return kv.second == x; });
            if (clash) {
                SymbolSet avoid = fv;
                for (const auto& [k, v] : inner) avoid.insert(v);
                std::string name = x.str();
                do name += "'";
                while (avoid.count(Symbol(name)));
                inner[x] = Symbol(name);
                x = Symbol(name);
            }
            Formula body = apply_subst(f->a, inner);
            return f->op == Op::Exists ? exists(x, body) : forall(x, body);
        }
    }
    return f;
}

Formula circ(const Formula& f) {
    int counter = 0;
    std::vector<Symbol> bound;
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        switch (g->op) {
            case Op::Atom: {
                std::vector<Symbol> args = g->args;
                for (Symbol& x : args)
                    if (std::find(bound.begin(), bound.end(), x) == bound.end()) x = xi(++counter);
                return atom(g->sym, std::move(args));
            }
            case Op::Exists:
            case Op::Forall: {
                bound.push_back(g->sym);
                Formula body = go(g->a);
                bound.pop_back();
                return g->op == Op::Exists ? exists(g->sym, body) : forall(g->sym, body);
            }
            case Op::Bang: return bang(go(g->a));
            case Op::Tensor: {
                Formula a = go(g->a);
                return tensor(a, go(g->b));
            }
            case Op::Lolli: {
                Formula a = go(g->a);
                return lolli(a, go(g->b));
            }
        }
        return g;
    };
    return go(f);
}

namespace {

void key_rec(const Formula& f, std::vector<Symbol>& bound, std::string& out) {
    switch (f->op) {
        case Op::Atom:
            out += f->sym.str();
            out += '(';
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) out += ',';
                auto it = std::find(bound.rbegin(), bound.rend(), f->args[i]);
                if (it != bound.rend())
                    out += '%' + std::to_string(it - bound.rbegin());
                else
                    out += f->args[i].str();
            }
            out += ')';
            return;
        case Op::Tensor:
        case Op::Lolli:
            out += f->op == Op::Tensor ? "*(" : ">(";
            key_rec(f->a, bound, out);
            out += ',';
            key_rec(f->b, bound, out);
            out += ')';
            return;
        case Op::Bang:
            out += "!(";
            key_rec(f->a, bound, out);
            out += ')';
            return;
        case Op::Exists:
        case Op::Forall:
            out += f->op == Op::Exists ? "E." : "A.";
            bound.push_back(f->sym);
            key_rec(f->a, bound, out);
            bound.pop_back();
            return;
    }
}

}  // namespace

std::string alpha_key(const Formula& f) {
    std::string out;
    std::vector<Symbol> bound;
    key_rec(f, bound, out);
    return out;
}

bool alpha_eq(const Formula& a, const Formula& b) { return a == b || alpha_key(a) == alpha_key(b); }

bool formula_less(const Formula& a, const Formula& b) { return alpha_key(a) < alpha_key(b); }

namespace {

// ctx 0: top or right of -o; 1: left of -o or tensor operand (binders and
// -o need parens); 2: right operand of a tensor (tensors need parens too).
void render_rec(const Formula& f, int ctx, bool uni, std::string& out) {
    auto var = [&](Symbol v) -> std::string { return v.str(); };
    switch (f->op) {
        case Op::Atom: {
            out += (!uni && f->sym == nu_pred()) ? "nu" : f->sym.str();
            if (!f->args.empty()) {
                out += '(';
                for (std::size_t i = 0; i < f->args.size(); ++i) {
                    if (i) out += ',';
                    out += var(f->args[i]);
                }
                out += ')';
            }
            return;
        }
        case Op::Tensor: {
            bool paren = ctx == 2;
            if (paren) out += '(';
            render_rec(f->a, 1, uni, out);
            out += uni ? " ⊗ " : " * ";
            render_rec(f->b, 2, uni, out);
            if (paren) out += ')';
            return;
        }
        case Op::Lolli: {
            bool paren = ctx != 0;
            if (paren) out += '(';
            render_rec(f->a, 1, uni, out);
            out += uni ? " ⊸ " : " -o ";
            render_rec(f->b, 0, uni, out);
            if (paren) out += ')';
            return;
        }
        case Op::Exists:
        case Op::Forall: {
            bool paren = ctx != 0;
            if (paren) out += '(';
            if (uni)
                out += (f->op == Op::Exists ? "∃" : "∀") + var(f->sym) + ". ";
            else
                out += (f->op == Op::Exists ? "ex " : "fa ") + var(f->sym) + ". ";
            render_rec(f->a, 0, uni, out);
            if (paren) out += ')';
            return;
        }
        case Op::Bang: {
            out += '!';
            bool simple = f->a->op == Op::Atom || f->a->op == Op::Bang;
            if (!simple) out += '(';
            render_rec(f->a, simple ? 1 : 0, uni, out);
            if (!simple) out += ')';
            return;
        }
    }
}

}  // namespace

std::string render(const Formula& f, bool unicode) {
    std::string out;
    render_rec(f, 0, unicode, out);
    return out;
}

Sequent::Sequent(std::vector<Formula> a, Formula s) : ante(std::move(a)), succ(std::move(s)) {}

void Sequent::normalize() {
    std::vector<std::pair<std::string, Formula>> keyed;
    for (const Formula& f : ante) keyed.emplace_back(alpha_key(f), f);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < keyed.size(); ++i) ante[i] = keyed[i].second;
}

bool sequent_alpha_eq(const Sequent& a, const Sequent& b) {
    if (a.ante.size() != b.ante.size() || !alpha_eq(a.succ, b.succ)) return false;
    std::vector<std::string> ka, kb;
    for (const Formula& f : a.ante) ka.push_back(alpha_key(f));
    for (const Formula& f : b.ante) kb.push_back(alpha_key(f));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
}

std::string render(const Sequent& s, bool unicode) {
    std::string out;
    for (std::size_t i = 0; i < s.ante.size(); ++i) {
        if (i) out += ", ";
        out += render(s.ante[i], unicode);
    }
    if (!s.ante.empty()) out += ' ';
    out += unicode ? "⊢ " : "|- ";
    out += render(s.succ, unicode);
    return out;
}

SymbolSet free_vars(const Sequent& s) {
    SymbolSet out = free_vars(s.succ);
    for (const Formula& f : s.ante) {
        SymbolSet fv = free_vars(f);
        out.insert(fv.begin(), fv.end());
    }
    return out;
}

Sequent apply_subst(const Sequent& s, const SymbolMap& h) {
    Sequent out;
    for (const Formula& f : s.ante) out.ante.push_back(apply_subst(f, h));
    out.succ = apply_subst(s.succ, h);
    return out;
}

namespace {

Symbol alias(const std::string& name) {
    if (name == "nu") return nu_pred();
    if (name == "xdot") return x_dot();
    return Symbol(name);
}

class FormulaParser {
public:
    FormulaParser(Lexer& lx, ParseOptions opts) : lx_(lx), opts_(opts) {}

    Formula formula() {
        Formula left = product();
        if (at("-o")) {
            next();
            return lolli(left, formula());
        }
        return left;
    }

private:
    bool at(std::string_view t) {
        if (depth_ > 0) lx_.skip_newlines();
        return lx_.at(t);
    }
    Token next() {
        if (depth_ > 0) lx_.skip_newlines();
        return lx_.next();
    }
    Token expect(std::string_view t) {
        if (depth_ > 0) lx_.skip_newlines();
        return lx_.expect(t);
    }

    Formula product() {
        Formula acc = factor();
        while (at("*")) {
            next();
            acc = tensor(acc, factor());
        }
        return acc;
    }

    Formula factor() {
        if (depth_ > 0) lx_.skip_newlines();
        if (at("!")) {
            next();
            return bang(factor());
        }
        if (at("ex") || at("fa")) {
            bool ex = next().text == "ex";
            Token v = lx_.expect_ident("bound variable");
            Symbol var = alias(v.text);
            if (!opts_.allow_reserved_binders && is_reserved_variable(var))
                Lexer::fail("reserved variable '" + v.text + "' cannot be bound", v);
            expect(".");
            Formula body = formula();
            return ex ? exists(var, body) : forall(var, body);
        }
        if (at("(")) {
            next();
            ++depth_;
            Formula f = formula();
            expect(")");
            --depth_;
            return f;
        }
        Token p = lx_.expect_ident("formula");
        std::vector<Symbol> args;
        if (lx_.at("(")) {
            lx_.next();
            lx_.skip_newlines();
            if (!lx_.at(")")) {
                for (;;) {
                    lx_.skip_newlines();
                    args.push_back(alias(lx_.expect_ident("variable").text));
                    lx_.skip_newlines();
                    if (!lx_.accept(",")) break;
                }
            }
            lx_.expect(")");
        }
        return atom(alias(p.text), std::move(args));
    }

    Lexer& lx_;
    ParseOptions opts_;
    int depth_ = 0;
};

}  // namespace

Formula parse_formula(Lexer& lx, ParseOptions opts) {
    FormulaParser p(lx, opts);
    return p.formula();
}

Formula parse_formula(const std::string& text, ParseOptions opts) {
    Lexer lx(text, 1, false);
    Formula f = parse_formula(lx, opts);
    if (!lx.at_end()) lx.fail("unexpected " + describe(lx.peek()));
    check_arities({f});
    return f;
}

Sequent parse_sequent(const std::string& text, ParseOptions opts) {
    Lexer lx(text, 1, false);
    Sequent s;
    if (!lx.at("|-")) {
        for (;;) {
            s.ante.push_back(parse_formula(lx, opts));
            if (!lx.accept(",")) break;
        }
    }
    lx.expect("|-");
    s.succ = parse_formula(lx, opts);
    if (!lx.at_end()) lx.fail("unexpected " + describe(lx.peek()));
    std::vector<Formula> all = s.ante;
    all.push_back(s.succ);
    try {
        check_arities(all);
    } catch (const Error& e) {
        throw ParseError(e.what(), 1, 1);
    }
    return s;
}

}  // namespace hgl
