#include "hgl/hypergraph.hpp"

#include <algorithm>
#include <functional>

namespace hgl {

SymbolSet Hypergraph::type() const {
    SymbolSet t;
    for (const auto& [sel, node] : ext) t.insert(sel);
    return t;
}

bool Hypergraph::ext_injective() const {
    SymbolSet seen;
    for (const auto& [sel, node] : ext)
        if (!seen.insert(node).second) return false;
    return true;
}

void Hypergraph::validate() const {
    for (const auto& [id, e] : edges)
        for (const auto& [sel, node] : e.att)
            if (!nodes.count(node))
                throw Error("edge " + id.str() + " attaches to unknown node " + node.str());
    for (const auto& [sel, node] : ext)
        if (!nodes.count(node))
            throw Error("ext(" + sel.str() + ") is unknown node " + node.str());
}

const std::vector<Symbol>& Alphabet::type_of(Symbol label) const {
    auto it = types.find(label);
    if (it == types.end()) throw Error("unknown label " + label.str());
    return it->second;
}

void Alphabet::add(Symbol label, std::vector<Symbol> selectors) {
    auto [it, inserted] = types.emplace(label, selectors);
    if (!inserted && it->second != selectors) {
        SymbolSet a(it->second.begin(), it->second.end());
        SymbolSet b(selectors.begin(), selectors.end());
        if (a != b) throw Error("conflicting types for label " + label.str());
    }
}

std::vector<Symbol> Alphabet::selectors_of(const Edge& e) const {
    auto it = types.find(e.label);
    if (it != types.end() && it->second.size() == e.att.size()) {
        bool ok = std::all_of(it->second.begin(), it->second.end(),
                              [&](Symbol s) { return e.att.count(s) != 0; });
        if (ok) return it->second;
    }
    std::vector<Symbol> out;
    for (const auto& [sel, node] : e.att) out.push_back(sel);
    return out;
}

Symbol fresh_symbol(const std::string& prefix, const SymbolSet& used, int start) {
    for (int n = start;; ++n) {
        Symbol s(prefix + std::to_string(n));
        if (!used.count(s)) return s;
    }
}

Hypergraph empty_hypergraph() { return {}; }

Hypergraph string_graph(const std::vector<Symbol>& word) {
    Hypergraph h;
    std::vector<Symbol> v;
    for (std::size_t i = 0; i <= word.size(); ++i) {
        v.emplace_back("v" + std::to_string(i));
        h.nodes.insert(v.back());
    }
    for (std::size_t i = 0; i < word.size(); ++i)
        h.edges[Symbol("e" + std::to_string(i + 1))] =
            Edge{word[i], {{Symbol("s"), v[i]}, {Symbol("t"), v[i + 1]}}};
    h.ext[Symbol("s")] = v.front();
    h.ext[Symbol("t")] = v.back();
    return h;
}

Hypergraph handle(Symbol label, const std::vector<Symbol>& type) {
    Hypergraph h;
    Edge e{label, {}};
    for (Symbol sel : type) {
        h.nodes.insert(sel);
        e.att[sel] = sel;
        h.ext[sel] = sel;
    }
    h.edges[Symbol("e")] = e;
    return h;
}

namespace {

// Copy of `k` whose node and edge ids avoid those of `h`. Returns the node
// renaming applied.
Hypergraph fresh_copy(const Hypergraph& h, const Hypergraph& k, SymbolMap& node_map) {
    SymbolSet used_nodes = h.nodes;
    for (Symbol n : k.nodes)
        if (!h.nodes.count(n)) used_nodes.insert(n);
    SymbolSet used_edges;
    for (const auto& [id, e] : h.edges) used_edges.insert(id);
    for (const auto& [id, e] : k.edges) used_edges.insert(id);

    node_map.clear();
    int next = 1;
    for (Symbol n : k.nodes) {
        if (h.nodes.count(n)) {
            Symbol f = fresh_symbol("n", used_nodes, next);
            next = f.str().size() > 1 ? std::stoi(f.str().substr(1)) + 1 : next;
            used_nodes.insert(f);
            node_map[n] = f;
        } else {
            node_map[n] = n;
        }
    }
    Hypergraph out;
    for (Symbol n : k.nodes) out.nodes.insert(node_map[n]);
    int next_edge = 1;
    for (const auto& [id, e] : k.edges) {
        Symbol nid = id;
        if (h.edges.count(id)) {
            nid = fresh_symbol("e", used_edges, next_edge);
            next_edge = std::stoi(nid.str().substr(1)) + 1;
            used_edges.insert(nid);
        }
        Edge ne{e.label, {}};
        for (const auto& [sel, node] : e.att) ne.att[sel] = node_map[node];
        out.edges[nid] = ne;
    }
    for (const auto& [sel, node] : k.ext) out.ext[sel] = node_map[node];
    return out;
}

// Union-find over node symbols; representative chosen by `better`.
struct Classes {
    std::map<Symbol, Symbol> parent;
    std::function<bool(Symbol, Symbol)> better;

    Symbol find(Symbol x) {
        Symbol r = x;
        while (parent.at(r) != r) r = parent.at(r);
        while (parent.at(x) != r) {
            Symbol n = parent.at(x);
            parent[x] = r;
            x = n;
        }
        return r;
    }
    void unite(Symbol a, Symbol b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (better(b, a)) std::swap(a, b);
        parent[b] = a;
    }
};

Hypergraph quotient_by(const Hypergraph& h, const std::vector<std::pair<Symbol, Symbol>>& rel,
                       std::function<bool(Symbol, Symbol)> better) {
    Classes c{{}, std::move(better)};
    for (Symbol n : h.nodes) c.parent[n] = n;
    for (const auto& [a, b] : rel) {
        if (!h.nodes.count(a) || !h.nodes.count(b))
            throw Error("quotient relation mentions a node outside the hypergraph");
        c.unite(a, b);
    }
    Hypergraph out;
    for (Symbol n : h.nodes) out.nodes.insert(c.find(n));
    for (const auto& [id, e] : h.edges) {
        Edge ne{e.label, {}};
        for (const auto& [sel, node] : e.att) ne.att[sel] = c.find(node);
        out.edges[id] = ne;
    }
    for (const auto& [sel, node] : h.ext) out.ext[sel] = c.find(node);
    return out;
}

bool natural_better(Symbol a, Symbol b) { return a < b; }

}  // namespace

Hypergraph disjoint_union(const Hypergraph& h1, const Hypergraph& h2) {
    for (const auto& [sel, node] : h2.ext)
        if (h1.ext.count(sel))
            throw Error("disjoint union of hypergraphs with overlapping types (selector " +
                        sel.str() + ")");
    SymbolMap m;
    Hypergraph k = fresh_copy(h1, h2, m);
    Hypergraph out = h1;
    out.nodes.insert(k.nodes.begin(), k.nodes.end());
    for (auto& [id, e] : k.edges) out.edges[id] = e;
    for (auto& [sel, node] : k.ext) out.ext[sel] = node;
    return out;
}

Hypergraph quotient(const Hypergraph& h, const std::vector<std::pair<Symbol, Symbol>>& rel) {
    return quotient_by(h, rel, natural_better);
}

Hypergraph replace(const Hypergraph& h, Symbol edge, const Hypergraph& k) {
    auto it = h.edges.find(edge);
    if (it == h.edges.end()) throw Error("replace: edge " + edge.str() + " is absent");
    const Edge& e = it->second;
    SymbolSet te;
    for (const auto& [sel, node] : e.att) te.insert(sel);
    if (te != k.type()) throw Error("replace: type of edge " + edge.str() + " differs from type(K)");

    Hypergraph base = h;
    base.edges.erase(edge);
    SymbolMap m;
    Hypergraph kc = fresh_copy(base, k, m);
    Hypergraph joined = base;
    joined.nodes.insert(kc.nodes.begin(), kc.nodes.end());
    for (auto& [id, ke] : kc.edges) joined.edges[id] = ke;
    std::vector<std::pair<Symbol, Symbol>> rel;
    for (const auto& [sel, node] : e.att) rel.emplace_back(node, kc.ext.at(sel));
    const SymbolSet& original = h.nodes;
    return quotient_by(joined, rel, [&](Symbol a, Symbol b) {
        bool oa = original.count(a) != 0, ob = original.count(b) != 0;
        if (oa != ob) return oa;
        return a < b;
    });
}

Hypergraph parallel_composition(const Hypergraph& h1, const Hypergraph& h2) {
    SymbolMap m;
    Hypergraph k = fresh_copy(h1, h2, m);
    Hypergraph joined = h1;
    joined.nodes.insert(k.nodes.begin(), k.nodes.end());
    for (auto& [id, e] : k.edges) joined.edges[id] = e;
    std::vector<std::pair<Symbol, Symbol>> rel;
    for (const auto& [sel, node] : k.ext) {
        auto f = h1.ext.find(sel);
        if (f != h1.ext.end())
            rel.emplace_back(f->second, node);
        else
            joined.ext[sel] = node;
    }
    const SymbolSet& original = h1.nodes;
    return quotient_by(joined, rel, [&](Symbol a, Symbol b) {
        bool oa = original.count(a) != 0, ob = original.count(b) != 0;
        if (oa != ob) return oa;
        return a < b;
    });
}

Hypergraph substitute(const Hypergraph& h, const SymbolMap& sub) {
    std::map<Symbol, Symbol> first;  // image selector -> first ext node with that image
    std::vector<std::pair<Symbol, Symbol>> rel;
    for (const auto& [sel, node] : h.ext) {
        auto it = sub.find(sel);
        if (it == sub.end()) continue;
        auto [f, inserted] = first.emplace(it->second, node);
        if (!inserted) rel.emplace_back(f->second, node);
    }
    Hypergraph stripped = h;
    stripped.ext.clear();
    Hypergraph out = quotient(stripped, rel);
    Classes c{{}, natural_better};
    for (Symbol n : h.nodes) c.parent[n] = n;
    for (const auto& [a, b] : rel) c.unite(a, b);
    for (const auto& [sel, node] : h.ext) {
        auto it = sub.find(sel);
        if (it != sub.end()) out.ext[it->second] = c.find(node);
    }
    return out;
}

Hypergraph rename_nodes(const Hypergraph& h, const SymbolMap& renaming) {
    auto r = [&](Symbol n) {
        auto it = renaming.find(n);
        return it == renaming.end() ? n : it->second;
    };
    Hypergraph out;
    for (Symbol n : h.nodes) out.nodes.insert(r(n));
    if (out.nodes.size() != h.nodes.size()) throw Error("rename_nodes: renaming is not injective");
    for (const auto& [id, e] : h.edges) {
        Edge ne{e.label, {}};
        for (const auto& [sel, node] : e.att) ne.att[sel] = r(node);
        out.edges[id] = ne;
    }
    for (const auto& [sel, node] : h.ext) out.ext[sel] = r(node);
    return out;
}

Hypergraph remove_node(const Hypergraph& h, Symbol node) {
    for (const auto& [id, e] : h.edges)
        for (const auto& [sel, n] : e.att)
            if (n == node) throw Error("remove_node: node " + node.str() + " is not isolated");
    Hypergraph out = h;
    out.nodes.erase(node);
    for (auto it = out.ext.begin(); it != out.ext.end();)
        it = it->second == node ? out.ext.erase(it) : std::next(it);
    return out;
}

}  // namespace hgl
