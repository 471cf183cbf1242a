#include <algorithm>
#include <map>
#include <unordered_map>

#include "hgl/hypergraph.hpp"

namespace hgl {

namespace {

struct FlatEdge {
    int label;
    std::vector<std::pair<int, int>> att;  // (selector rank, node index), selector-sorted
    Symbol id;
};

// One or more hypergraphs laid out on a shared node index space.
struct Flat {
    std::vector<Symbol> node_name;
    std::vector<int> owner;  // which input graph a node belongs to
    std::vector<FlatEdge> edges;
    std::vector<std::vector<std::pair<int, int>>> ext_at;  // node -> (graph, selector rank)
    std::vector<std::vector<std::pair<int, int>>> inc;     // node -> (edge, position)
    std::vector<int> edge_owner;
    std::vector<std::string> label_name, sel_name;
};

Flat flatten(const std::vector<const Hypergraph*>& gs) {
    Flat f;
    std::set<std::string> labels, sels;
    for (const Hypergraph* g : gs) {
        for (const auto& [id, e] : g->edges) {
            labels.insert(e.label.str());
            for (const auto& [s, n] : e.att) sels.insert(s.str());
        }
        for (const auto& [s, n] : g->ext) sels.insert(s.str());
    }
    std::map<std::string, int> lrank, srank;
    for (const auto& l : labels) {
        lrank[l] = static_cast<int>(f.label_name.size());
        f.label_name.push_back(l);
    }
    for (const auto& s : sels) {
        srank[s] = static_cast<int>(f.sel_name.size());
        f.sel_name.push_back(s);
    }
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        const Hypergraph& g = *gs[gi];
        std::map<Symbol, int> idx;
        for (Symbol n : g.nodes) {
            idx[n] = static_cast<int>(f.node_name.size());
            f.node_name.push_back(n);
            f.owner.push_back(static_cast<int>(gi));
        }
        for (const auto& [id, e] : g.edges) {
            FlatEdge fe{lrank.at(e.label.str()), {}, id};
            for (const auto& [s, n] : e.att) fe.att.emplace_back(srank.at(s.str()), idx.at(n));
            std::sort(fe.att.begin(), fe.att.end());
            f.edges.push_back(std::move(fe));
            f.edge_owner.push_back(static_cast<int>(gi));
        }
        f.ext_at.resize(f.node_name.size());
        for (const auto& [s, n] : g.ext) f.ext_at[idx.at(n)].emplace_back(0, srank.at(s.str()));
    }
    f.ext_at.resize(f.node_name.size());
    f.inc.assign(f.node_name.size(), {});
    for (std::size_t ei = 0; ei < f.edges.size(); ++ei)
        for (std::size_t p = 0; p < f.edges[ei].att.size(); ++p)
            f.inc[f.edges[ei].att[p].second].emplace_back(static_cast<int>(ei), static_cast<int>(p));
    for (auto& v : f.ext_at) std::sort(v.begin(), v.end());
    return f;
}

using Colors = std::vector<int>;

int count_colors(const Colors& c) {
    std::vector<int> u(c);
    std::sort(u.begin(), u.end());
    return static_cast<int>(std::unique(u.begin(), u.end()) - u.begin());
}

Colors rank_signatures(const std::vector<std::vector<int>>& sig) {
    std::vector<int> order(sig.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    Colors c(sig.size());
    int r = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k == 0 || sig[order[k]] != sig[order[k - 1]]) ++r;
        c[order[k]] = r;
    }
    return c;
}

Colors initial_colors(const Flat& f) {
    std::vector<std::vector<int>> sig(f.node_name.size());
    for (std::size_t v = 0; v < sig.size(); ++v) {
        for (const auto& [g, s] : f.ext_at[v]) sig[v].push_back(s);
        sig[v].push_back(-1);
        sig[v].push_back(static_cast<int>(f.inc[v].size()));
    }
    return rank_signatures(sig);
}

void refine(const Flat& f, Colors& c) {
    int k = count_colors(c);
    for (;;) {
        std::vector<std::vector<int>> sig(c.size());
        for (std::size_t v = 0; v < c.size(); ++v) {
            std::vector<std::vector<int>> items;
            for (const auto& [ei, pos] : f.inc[v]) {
                const FlatEdge& e = f.edges[ei];
                std::vector<int> it{e.label, e.att[pos].first};
                for (const auto& [s, n] : e.att) {
                    it.push_back(s);
                    it.push_back(c[n]);
                }
                items.push_back(std::move(it));
            }
            std::sort(items.begin(), items.end());
            sig[v].push_back(c[v]);
            for (auto& it : items) {
                sig[v].push_back(static_cast<int>(it.size()));
                sig[v].insert(sig[v].end(), it.begin(), it.end());
            }
        }
        Colors next = rank_signatures(sig);
        int nk = count_colors(next);
        c = std::move(next);
        if (nk == k) return;
        k = nk;
    }
}

Colors individualize(const Colors& c, const std::vector<int>& chosen) {
    std::vector<std::vector<int>> sig(c.size());
    for (std::size_t v = 0; v < c.size(); ++v) {
        bool picked = std::find(chosen.begin(), chosen.end(), static_cast<int>(v)) != chosen.end();
        sig[v] = {c[v], picked ? 0 : 1};
    }
    return rank_signatures(sig);
}

bool isolated_internal(const Flat& f, int v) { return f.inc[v].empty() && f.ext_at[v].empty(); }

std::string encode(const Flat& f, const Colors& c) {
    std::string out = "n" + std::to_string(c.size()) + "|x";
    std::vector<std::string> ext;
    for (std::size_t v = 0; v < c.size(); ++v)
        for (const auto& [g, s] : f.ext_at[v]) ext.push_back(f.sel_name[s] + "=" + std::to_string(c[v]));
    std::sort(ext.begin(), ext.end());
    for (auto& x : ext) out += x + ",";
    std::vector<std::string> es;
    for (const FlatEdge& e : f.edges) {
        std::string s = f.label_name[e.label] + "(";
        for (const auto& [sel, n] : e.att) s += f.sel_name[sel] + "=" + std::to_string(c[n]) + ",";
        es.push_back(s + ")");
    }
    std::sort(es.begin(), es.end());
    out += "|e";
    for (auto& e : es) out += e + ";";
    return out;
}

void canon_search(const Flat& f, Colors c, std::string& best) {
    refine(f, c);
    std::map<int, std::vector<int>> cells;
    for (std::size_t v = 0; v < c.size(); ++v) cells[c[v]].push_back(static_cast<int>(v));
    const std::vector<int>* target = nullptr;
    for (const auto& [col, members] : cells)
        if (members.size() > 1) {
            target = &members;
            break;
        }
    if (!target) {
        std::string e = encode(f, c);
        if (best.empty() || e < best) best = std::move(e);
        return;
    }
    bool isolated_done = false;
    for (int v : *target) {
        if (isolated_internal(f, v)) {
            if (isolated_done) continue;
            isolated_done = true;
        }
        canon_search(f, individualize(c, {v}), best);
    }
}

bool histograms_match(const Flat& f, const Colors& c) {
    std::map<int, int> h;
    for (std::size_t v = 0; v < c.size(); ++v) h[c[v]] += f.owner[v] == 0 ? 1 : -1;
    return std::all_of(h.begin(), h.end(), [](const auto& kv) { return kv.second == 0; });
}

std::optional<Isomorphism> leaf_iso(const Flat& f, const Colors& c, const Hypergraph& h1,
                                    const Hypergraph& h2) {
    std::map<int, int> in1, in2;
    for (std::size_t v = 0; v < c.size(); ++v) (f.owner[v] == 0 ? in1 : in2)[c[v]] = static_cast<int>(v);
    Isomorphism iso;
    for (const auto& [col, v] : in1) iso.nodes[f.node_name[v]] = f.node_name[in2.at(col)];
    std::map<std::pair<Symbol, SymbolMap>, std::vector<Symbol>> pool;
    for (const auto& [id, e] : h2.edges) pool[{e.label, e.att}].push_back(id);
    for (const auto& [id, e] : h1.edges) {
        SymbolMap att;
        for (const auto& [s, n] : e.att) att[s] = iso.nodes.at(n);
        auto it = pool.find({e.label, att});
        if (it == pool.end() || it->second.empty()) return std::nullopt;
        iso.edges[id] = it->second.back();
        it->second.pop_back();
    }
    if (!check_isomorphism(h1, h2, iso)) return std::nullopt;
    return iso;
}

std::optional<Isomorphism> iso_search(const Flat& f, Colors c, const Hypergraph& h1,
                                      const Hypergraph& h2) {
    refine(f, c);
    if (!histograms_match(f, c)) return std::nullopt;
    std::map<int, std::vector<int>> cells;
    for (std::size_t v = 0; v < c.size(); ++v) cells[c[v]].push_back(static_cast<int>(v));
    const std::vector<int>* target = nullptr;
    for (const auto& [col, members] : cells)
        if (members.size() > 2) {
            target = &members;
            break;
        }
    if (!target) return leaf_iso(f, c, h1, h2);
    int v = -1;
    for (int m : *target)
        if (f.owner[m] == 0) {
            v = m;
            break;
        }
    bool isolated_done = false;
    for (int w : *target) {
        if (f.owner[w] != 1) continue;
        if (isolated_internal(f, w)) {
            if (isolated_done) continue;
            isolated_done = true;
        }
        if (auto r = iso_search(f, individualize(c, {v, w}), h1, h2)) return r;
    }
    return std::nullopt;
}

}  // namespace

std::string canonical_form(const Hypergraph& h) {
    Flat f = flatten({&h});
    std::string best;
    canon_search(f, initial_colors(f), best);
    if (best.empty()) best = encode(f, Colors{});
    return best;
}

std::optional<Isomorphism> is_isomorphic(const Hypergraph& h1, const Hypergraph& h2) {
    if (h1.nodes.size() != h2.nodes.size() || h1.edges.size() != h2.edges.size() ||
        h1.type() != h2.type())
        return std::nullopt;
    Flat f = flatten({&h1, &h2});
    return iso_search(f, initial_colors(f), h1, h2);
}

bool check_isomorphism(const Hypergraph& h1, const Hypergraph& h2, const Isomorphism& iso) {
    if (iso.nodes.size() != h1.nodes.size() || h1.nodes.size() != h2.nodes.size()) return false;
    if (iso.edges.size() != h1.edges.size() || h1.edges.size() != h2.edges.size()) return false;
    SymbolSet img;
    for (Symbol n : h1.nodes) {
        auto it = iso.nodes.find(n);
        if (it == iso.nodes.end() || !h2.nodes.count(it->second)) return false;
        img.insert(it->second);
    }
    if (img.size() != h2.nodes.size()) return false;
    SymbolSet eimg;
    for (const auto& [id, e] : h1.edges) {
        auto it = iso.edges.find(id);
        if (it == iso.edges.end()) return false;
        auto e2 = h2.edges.find(it->second);
        if (e2 == h2.edges.end() || e2->second.label != e.label) return false;
        if (e2->second.att.size() != e.att.size()) return false;
        for (const auto& [s, n] : e.att) {
            auto a = e2->second.att.find(s);
            if (a == e2->second.att.end() || a->second != iso.nodes.at(n)) return false;
        }
        eimg.insert(it->second);
    }
    if (eimg.size() != h2.edges.size()) return false;
    if (h1.ext.size() != h2.ext.size()) return false;
    for (const auto& [s, n] : h1.ext) {
        auto it = h2.ext.find(s);
        if (it == h2.ext.end() || it->second != iso.nodes.at(n)) return false;
    }
    return true;
}

}  // namespace hgl
