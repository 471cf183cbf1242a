#include <sstream>

#include "hgl/grammar.hpp"
#include "hgl/lexer.hpp"

namespace hgl {

namespace {

std::vector<Symbol> selector_list(Lexer& lx) {
    std::vector<Symbol> out;
    lx.expect("{");
    while (!lx.at("}")) {
        out.emplace_back(lx.expect_ident("selector").text);
        if (!lx.accept(",")) break;
    }
    lx.expect("}");
    return out;
}

Formula formula_after_colon(Lexer& lx) {
    lx.expect(":");
    return parse_formula(lx);
}

}  // namespace

Grammar parse_gram(const std::string& text) {
    Lexer lx(text);
    lx.skip_newlines();
    bool is_string = false;
    Logic logic = Logic::MILL1;
    Alphabet types;
    SymbolSet letters;
    std::optional<SymbolSet> ext;
    Formula start;
    std::vector<std::pair<Symbol, Formula>> lex;
    std::vector<Formula> node_lex, pool;
    int slots = 0;
    bool saw_kind = false;
    while (!lx.at_end()) {
        Token kw = lx.expect_ident("declaration");
        const std::string& k = kw.text;
        if (k == "grammar") {
            Token kind = lx.expect_ident("string or hypergraph");
            if (kind.text != "string" && kind.text != "hypergraph")
                Lexer::fail("expected string or hypergraph", kind);
            if (saw_kind) Lexer::fail("grammar kind given twice", kind);
            saw_kind = true;
            is_string = kind.text == "string";
        } else if (k == "logic") {
            Token l = lx.expect_ident("mill1 or ill1");
            if (l.text == "mill1") logic = Logic::MILL1;
            else if (l.text == "ill1") logic = Logic::ILL1;
            else Lexer::fail("unknown logic '" + l.text + "'", l);
        } else if (k == "type") {
            Token l = lx.expect_ident("label");
            if (types.contains(Symbol(l.text))) Lexer::fail("type of '" + l.text + "' given twice", l);
            types.add(Symbol(l.text), selector_list(lx));
        } else if (k == "letters") {
            while (lx.at_ident()) letters.insert(Symbol(lx.next().text));
        } else if (k == "ext") {
            auto sels = selector_list(lx);
            ext = SymbolSet(sels.begin(), sels.end());
        } else if (k == "start") {
            if (start) Lexer::fail("second start formula", kw);
            start = formula_after_colon(lx);
        } else if (k == "lex") {
            Token l = lx.expect_ident("label or node");
            Formula f = formula_after_colon(lx);
            if (l.text == "node") node_lex.push_back(f);
            else lex.emplace_back(Symbol(l.text), f);
        } else if (k == "pool") {
            if (lx.accept("slots")) {
                Token n = lx.expect_ident("slot count");
                try {
                    slots = std::stoi(n.text);
                } catch (const std::exception&) {
                    Lexer::fail("bad slot count '" + n.text + "'", n);
                }
            } else {
                pool.push_back(formula_after_colon(lx));
            }
        } else {
            Lexer::fail("unknown declaration '" + k + "'", kw);
        }
        lx.end_statement();
    }
    if (!start) throw Error("grammar has no start formula");
    if (is_string) {
        if (!types.types.empty() || ext || !node_lex.empty() || !pool.empty())
            throw Error("string grammars take only letters, logic, start and lex lines");
        StringGrammar g;
        g.logic = logic;
        g.start = start;
        g.alphabet = letters;
        for (auto& [a, f] : lex) {
            g.alphabet.insert(a);
            g.lexicon[a].push_back(f);
        }
        g.validate();
        return g;
    }
    if (!letters.empty()) throw Error("`letters` is only for string grammars");
    HypergraphGrammar g;
    g.logic = logic;
    g.terminals = types;
    g.start = start;
    g.ext_type = ext ? *ext : SymbolSet{Symbol("s"), Symbol("t")};
    for (auto& [a, f] : lex) {
        if (!types.contains(a)) throw Error("lexicon entry for undeclared label " + a.str());
        g.lexicon[a].push_back(f);
    }
    g.node_lexicon = node_lex;
    g.pool = pool;
    g.pool_slots = slots;
    g.validate();
    return g;
}

std::string render_gram(const Grammar& gr) {
    std::ostringstream os;
    auto logic = [](Logic l) { return l == Logic::MILL1 ? "mill1" : "ill1"; };
    if (const auto* g = std::get_if<StringGrammar>(&gr)) {
        os << "grammar string\nlogic " << logic(g->logic) << "\nletters";
        for (Symbol a : g->alphabet) os << ' ' << a;
        os << "\nstart : " << render(g->start) << '\n';
        for (const auto& [a, fs] : g->lexicon)
            for (const Formula& f : fs) os << "lex " << a << " : " << render(f) << '\n';
        return os.str();
    }
    const auto& g = std::get<HypergraphGrammar>(gr);
    os << "grammar hypergraph\nlogic " << logic(g.logic) << '\n';
    for (const auto& [l, sels] : g.terminals.types) {
        os << "type " << l << " {";
        for (std::size_t i = 0; i < sels.size(); ++i) os << (i ? ", " : " ") << sels[i];
        os << (sels.empty() ? "}" : " }") << '\n';
    }
    os << "ext {";
    bool first = true;
    for (Symbol s : g.ext_type) {
        os << (first ? " " : ", ") << s;
        first = false;
    }
    os << (g.ext_type.empty() ? "}" : " }") << '\n';
    os << "start : " << render(g.start) << '\n';
    for (const auto& [a, fs] : g.lexicon)
        for (const Formula& f : fs) os << "lex " << a << " : " << render(f) << '\n';
    for (const Formula& f : g.node_lexicon) os << "lex node : " << render(f) << '\n';
    if (!g.pool.empty() || g.pool_slots) os << "pool slots " << g.pool_slots << '\n';
    for (const Formula& f : g.pool) os << "pool : " << render(f) << '\n';
    return os.str();
}

}  // namespace hgl
