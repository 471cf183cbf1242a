#include <sstream>

#include "hgl/hypergraph.hpp"
#include "hgl/lexer.hpp"

namespace hgl {

namespace {

SymbolMap parse_assignments(Lexer& lx, const Hypergraph& h, const char* what) {
    SymbolMap out;
    lx.expect("{");
    lx.skip_newlines();
    while (!lx.at("}")) {
        Token sel = lx.expect_ident("selector");
        lx.expect("=");
        Token node = lx.expect_ident("node");
        if (!h.nodes.count(Symbol(node.text))) Lexer::fail("undeclared node '" + node.text + "'", node);
        if (!out.emplace(Symbol(sel.text), Symbol(node.text)).second)
            Lexer::fail(std::string("selector '") + sel.text + "' repeated in " + what, sel);
        lx.skip_newlines();
        if (!lx.accept(",")) break;
        lx.skip_newlines();
    }
    lx.expect("}");
    return out;
}

}  // namespace

Hypergraph parse_hgr_statements(Lexer& lx) {
    Hypergraph h;
    lx.skip_newlines();
    for (;;) {
        if (lx.accept("node")) {
            while (lx.at_ident()) h.nodes.insert(Symbol(lx.next().text));
        } else if (lx.at("edge")) {
            lx.next();
            Token id = lx.expect_ident("edge id");
            Token label = lx.expect_ident("edge label");
            if (h.edges.count(Symbol(id.text))) Lexer::fail("duplicate edge '" + id.text + "'", id);
            Edge e{Symbol(label.text), parse_assignments(lx, h, "edge")};
            h.edges.emplace(Symbol(id.text), std::move(e));
        } else if (lx.at("ext")) {
            lx.next();
            for (const auto& [s, n] : parse_assignments(lx, h, "ext")) h.ext[s] = n;
        } else {
            break;
        }
        lx.end_statement();
    }
    return h;
}

Hypergraph parse_hgr(const std::string& text, int first_line) {
    Lexer lx(text, first_line);
    Hypergraph h = parse_hgr_statements(lx);
    if (!lx.at_end()) lx.fail("expected node, edge or ext, found " + describe(lx.peek()));
    return h;
}

std::string render_hgr(const Hypergraph& h) {
    std::ostringstream os;
    os << "node";
    for (Symbol n : h.nodes) os << ' ' << n;
    os << '\n';
    auto assignments = [&](const SymbolMap& m) {
        os << "{ ";
        bool first = true;
        for (const auto& [s, n] : m) {
            if (!first) os << ", ";
            first = false;
            os << s << '=' << n;
        }
        os << (m.empty() ? "}" : " }");
    };
    for (const auto& [id, e] : h.edges) {
        os << "edge " << id << ' ' << e.label << ' ';
        assignments(e.att);
        os << '\n';
    }
    os << "ext ";
    assignments(h.ext);
    os << '\n';
    return os.str();
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_dot(const Hypergraph& h, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << quoted(name) << " {\n";
    os << "  node [shape=circle];\n";
    std::map<Symbol, std::vector<Symbol>> ext_of;
    for (const auto& [s, n] : h.ext) ext_of[n].push_back(s);
    for (Symbol n : h.nodes) {
        std::string label = n.str();
        auto it = ext_of.find(n);
        if (it != ext_of.end())
            for (Symbol s : it->second) label += " (" + s.str() + ")";
        os << "  " << quoted("n:" + n.str()) << " [label=" << quoted(label) << "];\n";
    }
    Symbol s("s"), t("t");
    for (const auto& [id, e] : h.edges) {
        if (e.att.size() == 2 && e.att.count(s) && e.att.count(t)) {
            os << "  " << quoted("n:" + e.att.at(s).str()) << " -> " << quoted("n:" + e.att.at(t).str())
               << " [label=" << quoted(e.label.str()) << "];\n";
            continue;
        }
        std::string box = "e:" + id.str();
        os << "  " << quoted(box) << " [shape=box, label=" << quoted(e.label.str()) << "];\n";
        for (const auto& [sel, n] : e.att)
            os << "  " << quoted(box) << " -> " << quoted("n:" + n.str())
               << " [arrowhead=none, label=" << quoted(sel.str()) << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::vector<Hypergraph> enumerate_hypergraphs(const Alphabet& alphabet,
                                              const std::vector<Symbol>& ext_type,
                                              std::size_t size_bound, bool injective_ext) {
    std::vector<Hypergraph> out;
    std::set<std::string> seen;
    for (std::size_t n = 0; n <= size_bound; ++n) {
        if (n == 0 && !ext_type.empty()) continue;
        std::vector<Symbol> nodes;
        for (std::size_t i = 0; i < n; ++i) nodes.emplace_back("v" + std::to_string(i + 1));
        // every possible edge over these nodes, in a fixed order
        std::vector<Edge> slots;
        for (const auto& [label, sels] : alphabet.types) {
            std::vector<std::size_t> pick(sels.size(), 0);
            if (n == 0 && !sels.empty()) continue;
            for (;;) {
                Edge e{label, {}};
                for (std::size_t k = 0; k < sels.size(); ++k) e.att[sels[k]] = nodes[pick[k]];
                slots.push_back(std::move(e));
                std::size_t k = 0;
                while (k < pick.size() && ++pick[k] == n) pick[k++] = 0;
                if (k == pick.size()) break;
            }
        }
        std::size_t max_edges = size_bound - n;
        std::vector<std::size_t> ext_pick(ext_type.size(), 0);
        for (;;) {
            bool ok = true;
            if (injective_ext) {
                std::set<std::size_t> used(ext_pick.begin(), ext_pick.end());
                ok = used.size() == ext_pick.size();
            }
            if (ok) {
                Hypergraph base;
                base.nodes.insert(nodes.begin(), nodes.end());
                for (std::size_t k = 0; k < ext_type.size(); ++k) base.ext[ext_type[k]] = nodes[ext_pick[k]];
                // multisets of slots of size <= max_edges via nondecreasing indices
                std::vector<std::size_t> chosen;
                auto emit = [&]() {
                    Hypergraph h = base;
                    for (std::size_t i = 0; i < chosen.size(); ++i)
                        h.edges[Symbol("e" + std::to_string(i + 1))] = slots[chosen[i]];
                    if (seen.insert(canonical_form(h)).second) out.push_back(std::move(h));
                };
                auto rec = [&](auto&& self, std::size_t from) -> void {
                    emit();
                    if (chosen.size() == max_edges) return;
                    for (std::size_t i = from; i < slots.size(); ++i) {
                        chosen.push_back(i);
                        self(self, i);
                        chosen.pop_back();
                    }
                };
                rec(rec, 0);
            }
            std::size_t k = 0;
            while (k < ext_pick.size() && ++ext_pick[k] == n) ext_pick[k++] = 0;
            if (k == ext_pick.size()) break;
        }
    }
    return out;
}

}  // namespace hgl
