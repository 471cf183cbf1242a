#include "hgl/ht.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hgl {

void HtRule::validate() const {
    lhs.validate();
    rhs.validate();
    if (!lhs.ext_injective() || !rhs.ext_injective())
        throw Error("rule " + name + ": external nodes must be distinct");
    if (lhs.type() != rhs.type()) throw Error("rule " + name + ": lhs and rhs types differ");
}

Alphabet HtSystem::alphabet() const {
    Alphabet a = terminals;
    for (const auto& [l, sels] : nonterminals.types) a.add(l, sels);
    return a;
}

bool HtSystem::is_terminal_graph(const Hypergraph& h) const {
    for (const auto& [id, e] : h.edges)
        if (!terminals.contains(e.label)) return false;
    return true;
}

void HtSystem::validate() const {
    for (const auto& [l, sels] : nonterminals.types)
        if (terminals.contains(l)) throw Error("label " + l.str() + " is both terminal and nonterminal");
    Alphabet a = alphabet();
    auto check = [&](const Hypergraph& h, const std::string& where) {
        h.validate();
        for (const auto& [id, e] : h.edges) {
            if (!a.contains(e.label)) throw Error(where + ": unknown label " + e.label.str());
            SymbolSet want(a.type_of(e.label).begin(), a.type_of(e.label).end());
            SymbolSet got;
            for (const auto& [s, n] : e.att) got.insert(s);
            if (want != got) throw Error(where + ": edge " + id.str() + " has the wrong type");
        }
    };
    check(start, "start graph");
    for (const HtRule& r : rules) {
        r.validate();
        check(r.lhs, "rule " + r.name);
        check(r.rhs, "rule " + r.name);
    }
}

std::string Occurrence::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, b] : nodes) {
        os << (first ? "" : ", ") << a << "->" << b;
        first = false;
    }
    os << " |";
    for (const auto& [a, b] : edges) os << ' ' << a << "->" << b;
    return os.str();
}

namespace {

std::map<Symbol, int> degrees(const Hypergraph& h) {
    std::map<Symbol, int> deg;
    for (Symbol n : h.nodes) deg[n] = 0;
    for (const auto& [id, e] : h.edges) {
        SymbolSet seen;
        for (const auto& [s, n] : e.att)
            if (seen.insert(n).second) ++deg[n];
    }
    return deg;
}

SymbolSet ext_nodes(const Hypergraph& h) {
    SymbolSet out;
    for (const auto& [s, n] : h.ext) out.insert(n);
    return out;
}

}  // namespace

bool is_occurrence(const Hypergraph& g, const HtRule& r, const Occurrence& occ) {
    if (occ.nodes.size() != r.lhs.nodes.size() || occ.edges.size() != r.lhs.edges.size()) return false;
    SymbolSet img;
    for (Symbol u : r.lhs.nodes) {
        auto it = occ.nodes.find(u);
        if (it == occ.nodes.end() || !g.nodes.count(it->second) || !img.insert(it->second).second)
            return false;
    }
    SymbolSet eimg;
    for (const auto& [id, e] : r.lhs.edges) {
        auto it = occ.edges.find(id);
        if (it == occ.edges.end() || !eimg.insert(it->second).second) return false;
        auto ge = g.edges.find(it->second);
        if (ge == g.edges.end() || ge->second.label != e.label || ge->second.att.size() != e.att.size())
            return false;
        for (const auto& [s, n] : e.att) {
            auto a = ge->second.att.find(s);
            if (a == ge->second.att.end() || a->second != occ.nodes.at(n)) return false;
        }
    }
    SymbolSet lext = ext_nodes(r.lhs), gext = ext_nodes(g);
    for (Symbol u : r.lhs.nodes) {
        if (lext.count(u)) continue;
        Symbol w = occ.nodes.at(u);
        if (gext.count(w)) return false;
        for (const auto& [id, e] : g.edges)
            for (const auto& [s, n] : e.att)
                if (n == w && !eimg.count(id)) return false;
    }
    return true;
}

std::vector<Occurrence> applicable_matches(const Hypergraph& g, const HtRule& r) {
    std::vector<Occurrence> out;
    std::vector<Symbol> ledges;
    for (const auto& [id, e] : r.lhs.edges) ledges.push_back(id);
    // Rarest label first.
    std::map<Symbol, int> freq;
    for (const auto& [id, e] : g.edges) ++freq[e.label];
    std::stable_sort(ledges.begin(), ledges.end(), [&](Symbol a, Symbol b) {
        return freq[r.lhs.edges.at(a).label] < freq[r.lhs.edges.at(b).label];
    });
    std::vector<Symbol> isolated;
    {
        SymbolSet touched;
        for (const auto& [id, e] : r.lhs.edges)
            for (const auto& [s, n] : e.att) touched.insert(n);
        for (Symbol n : r.lhs.nodes)
            if (!touched.count(n)) isolated.push_back(n);
    }
    const SymbolSet lext = ext_nodes(r.lhs), gext = ext_nodes(g);
    const auto ldeg = degrees(r.lhs), gdeg = degrees(g);
    std::vector<Symbol> gnodes(g.nodes.begin(), g.nodes.end());

    Occurrence occ;
    SymbolSet used_nodes, used_edges;
    auto node_ok = [&](Symbol u, Symbol w) {
        if (used_nodes.count(w)) return false;
        if (!lext.count(u) && (gext.count(w) || gdeg.at(w) != ldeg.at(u))) return false;
        return true;
    };

    std::function<void(std::size_t)> iso_nodes = [&](std::size_t i) {
        if (i == isolated.size()) {
            if (is_occurrence(g, r, occ)) out.push_back(occ);
            return;
        }
        Symbol u = isolated[i];
        for (Symbol w : gnodes) {
            if (!node_ok(u, w)) continue;
            occ.nodes[u] = w;
            used_nodes.insert(w);
            iso_nodes(i + 1);
            used_nodes.erase(w);
            occ.nodes.erase(u);
        }
    };

    std::function<void(std::size_t)> match_edges = [&](std::size_t i) {
        if (i == ledges.size()) return iso_nodes(0);
        const Edge& le = r.lhs.edges.at(ledges[i]);
        for (const auto& [gid, ge] : g.edges) {
            if (ge.label != le.label || used_edges.count(gid) || ge.att.size() != le.att.size()) continue;
            std::vector<Symbol> bound;
            bool ok = true;
            for (const auto& [s, u] : le.att) {
                auto a = ge.att.find(s);
                if (a == ge.att.end()) { ok = false; break; }
                auto m = occ.nodes.find(u);
                if (m != occ.nodes.end()) {
                    if (m->second != a->second) { ok = false; break; }
                } else if (node_ok(u, a->second)) {
                    occ.nodes[u] = a->second;
                    used_nodes.insert(a->second);
                    bound.push_back(u);
                } else {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                occ.edges[ledges[i]] = gid;
                used_edges.insert(gid);
                match_edges(i + 1);
                used_edges.erase(gid);
                occ.edges.erase(ledges[i]);
            }
            for (Symbol u : bound) {
                used_nodes.erase(occ.nodes.at(u));
                occ.nodes.erase(u);
            }
        }
    };
    match_edges(0);
    return out;
}

Hypergraph apply(const Hypergraph& g, const HtRule& r, const Occurrence& occ) {
    if (!is_occurrence(g, r, occ)) throw Error("rule " + r.name + ": not an occurrence in the graph");
    Hypergraph out = g;
    SymbolSet lext = ext_nodes(r.lhs);
    for (const auto& [l, gid] : occ.edges) out.edges.erase(gid);
    for (const auto& [u, w] : occ.nodes)
        if (!lext.count(u)) out.nodes.erase(w);

    SymbolMap place;
    for (const auto& [s, n] : r.rhs.ext) place[n] = occ.nodes.at(r.lhs.ext.at(s));
    SymbolSet used = out.nodes;
    for (Symbol n : g.nodes) used.insert(n);
    for (Symbol n : r.rhs.nodes) {
        if (place.count(n)) continue;
        Symbol f = fresh_symbol("n", used);
        used.insert(f);
        out.nodes.insert(f);
        place[n] = f;
    }
    SymbolSet used_edges;
    for (const auto& [id, e] : g.edges) used_edges.insert(id);
    for (const auto& [id, e] : r.rhs.edges) {
        Symbol f = fresh_symbol("e", used_edges);
        used_edges.insert(f);
        Edge ne{e.label, {}};
        for (const auto& [s, n] : e.att) ne.att[s] = place.at(n);
        out.edges[f] = ne;
    }
    return out;
}

bool Derivation::replays() const {
    Hypergraph cur = start;
    for (const auto& st : steps) {
        try {
            cur = apply(cur, st.rule, st.occ);
        } catch (const Error&) {
            return false;
        }
        if (!(cur == st.result)) return false;
    }
    return true;
}

namespace {

// Per-quantity change caused by one rule application.
struct Delta {
    std::map<Symbol, long> labels;
    long nodes = 0, edges = 0;
};

Delta delta_of(const HtRule& r) {
    Delta d;
    for (const auto& [id, e] : r.rhs.edges) ++d.labels[e.label];
    for (const auto& [id, e] : r.lhs.edges) --d.labels[e.label];
    d.nodes = long(r.rhs.nodes.size()) - long(r.lhs.nodes.size());
    d.edges = long(r.rhs.edges.size()) - long(r.lhs.edges.size());
    return d;
}

struct Counts {
    std::map<Symbol, long> labels;
    long nodes = 0, edges = 0;
};

Counts counts_of(const Hypergraph& h) {
    Counts c;
    for (const auto& [id, e] : h.edges) ++c.labels[e.label];
    c.nodes = long(h.nodes.size());
    c.edges = long(h.edges.size());
    return c;
}

// Prunes states that cannot reach the target: every quantity the reusable
// rules never decrease (or never increase) gives a one-sided bound, after the
// remaining mandatory rule applications are accounted for exactly.
class Pruner {
public:
    Pruner(const std::vector<HtRule>& reusable, const std::vector<HtRule>& once, const Hypergraph& target)
        : target_(counts_of(target)) {
        for (const auto& r : reusable) free_.push_back(delta_of(r));
        for (const auto& r : once) once_.push_back(delta_of(r));
        auto collect = [&](const Delta& d) {
            for (const auto& [l, v] : d.labels) labels_.insert(l);
        };
        for (const auto& d : free_) collect(d);
        for (const auto& d : once_) collect(d);
        for (const auto& [l, v] : target_.labels) labels_.insert(l);
        for (Symbol l : labels_) {
            sign_[l] = signs([&](const Delta& d) { return d.labels.count(l) ? d.labels.at(l) : 0L; });
        }
        node_sign_ = signs([](const Delta& d) { return d.nodes; });
        edge_sign_ = signs([](const Delta& d) { return d.edges; });
    }

    bool viable(const Hypergraph& h, const std::vector<int>& residual) const {
        Counts c = counts_of(h);
        for (std::size_t i = 0; i < once_.size(); ++i) {
            for (const auto& [l, v] : once_[i].labels) c.labels[l] += v * residual[i];
            c.nodes += once_[i].nodes * residual[i];
            c.edges += once_[i].edges * residual[i];
        }
        for (const auto& [l, v] : c.labels) {
            if (!labels_.count(l)) {
                // No rule touches it: must already match.
                long t = target_.labels.count(l) ? target_.labels.at(l) : 0;
                if (v != t) return false;
                continue;
            }
        }
        for (Symbol l : labels_) {
            long v = c.labels.count(l) ? c.labels.at(l) : 0;
            long t = target_.labels.count(l) ? target_.labels.at(l) : 0;
            if (!ok(sign_.at(l), v, t)) return false;
        }
        return ok(node_sign_, c.nodes, target_.nodes) && ok(edge_sign_, c.edges, target_.edges);
    }

private:
    // bit 1: some reusable rule increases, bit 2: some decreases.
    template <class F>
    int signs(F f) const {
        int s = 0;
        for (const auto& d : free_) {
            long v = f(d);
            if (v > 0) s |= 1;
            if (v < 0) s |= 2;
        }
        return s;
    }
    static bool ok(int sign, long v, long t) {
        if (!(sign & 2) && v > t) return false;
        if (!(sign & 1) && v < t) return false;
        return true;
    }

    Counts target_;
    std::vector<Delta> free_, once_;
    SymbolSet labels_;
    std::map<Symbol, int> sign_;
    int node_sign_ = 0, edge_sign_ = 0;
};

struct SearchNode {
    Hypergraph graph;
    std::vector<int> residual;
    int parent;
    int rule;  // index into the combined rule list
    Occurrence occ;
};

std::string state_key(const Hypergraph& h, const std::vector<int>& residual) {
    std::string k = canonical_form(h);
    for (int r : residual) k += "|" + std::to_string(r);
    return k;
}

std::string rule_key(const HtRule& r) { return render_hgr(r.lhs) + "=>" + render_hgr(r.rhs); }

std::optional<Derivation> bfs(const Hypergraph& g, const Hypergraph& target, const std::vector<HtRule>& reusable,
                              const std::vector<HtRule>& once_in, int max_steps) {
    // Group identical mandatory rules so permutations are not explored twice.
    std::vector<HtRule> once;
    std::vector<int> need;
    {
        std::map<std::string, std::size_t> seen;
        for (const auto& r : once_in) {
            auto [it, fresh] = seen.emplace(rule_key(r), once.size());
            if (fresh) {
                once.push_back(r);
                need.push_back(1);
            } else {
                ++need[it->second];
            }
        }
    }
    std::vector<const HtRule*> all;
    for (const auto& r : reusable) all.push_back(&r);
    for (const auto& r : once) all.push_back(&r);

    const std::string goal = canonical_form(target);
    Pruner pruner(reusable, once, target);
    std::vector<SearchNode> nodes;
    std::unordered_set<std::string> seen;
    auto finish = [&](int idx) {
        Derivation d;
        d.start = g;
        std::vector<int> chain;
        for (int i = idx; nodes[i].parent >= 0; i = nodes[i].parent) chain.push_back(i);
        std::reverse(chain.begin(), chain.end());
        for (int i : chain) d.steps.push_back({*all[nodes[i].rule], nodes[i].occ, nodes[i].graph});
        return d;
    };
    auto is_goal = [&](const SearchNode& n) {
        return std::all_of(n.residual.begin(), n.residual.end(), [](int r) { return r == 0; }) &&
               n.graph.size() == target.size() && canonical_form(n.graph) == goal;
    };

    if (!pruner.viable(g, need)) return std::nullopt;
    nodes.push_back({g, need, -1, -1, {}});
    seen.insert(state_key(g, need));
    if (is_goal(nodes[0])) return finish(0);

    std::size_t level_begin = 0;
    for (int step = 0; step < max_steps; ++step) {
        std::size_t level_end = nodes.size();
        if (level_begin == level_end) break;
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (std::size_t ri = 0; ri < all.size(); ++ri) {
                std::size_t oi = ri >= reusable.size() ? ri - reusable.size() : std::size_t(-1);
                if (oi != std::size_t(-1) && nodes[i].residual[oi] == 0) continue;
                for (auto& occ : applicable_matches(nodes[i].graph, *all[ri])) {
                    SearchNode n{apply(nodes[i].graph, *all[ri], occ), nodes[i].residual, int(i), int(ri), occ};
                    if (oi != std::size_t(-1)) --n.residual[oi];
                    if (!pruner.viable(n.graph, n.residual)) continue;
                    if (!seen.insert(state_key(n.graph, n.residual)).second) continue;
                    nodes.push_back(std::move(n));
                    if (is_goal(nodes.back())) return finish(int(nodes.size()) - 1);
                }
            }
        }
        level_begin = level_end;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Derivation> derives(const HtSystem& sys, const Hypergraph& target, int max_steps) {
    return bfs(sys.start, target, sys.rules, {}, max_steps);
}

std::optional<Derivation> derives_with_rule_multiset(const Hypergraph& g, const Hypergraph& target,
                                                     const std::vector<HtRule>& reusable,
                                                     const std::vector<HtRule>& once, int max_steps) {
    return bfs(g, target, reusable, once, max_steps);
}

std::map<std::string, Hypergraph> enumerate_language(const HtSystem& sys, std::size_t size_bound,
                                                     int step_bound) {
    // Quantities no rule decreases give a lower bound on the size of any
    // terminal graph still reachable.
    std::vector<Delta> deltas;
    for (const auto& r : sys.rules) deltas.push_back(delta_of(r));
    SymbolSet shrinking;
    for (const auto& d : deltas)
        for (const auto& [l, v] : d.labels)
            if (v < 0) shrinking.insert(l);
    bool nodes_grow = std::all_of(deltas.begin(), deltas.end(), [](const Delta& d) { return d.nodes >= 0; });
    auto lower_bound = [&](const Hypergraph& h) {
        std::size_t n = nodes_grow ? h.nodes.size() : 0;
        for (const auto& [id, e] : h.edges) n += !shrinking.count(e.label);
        return n;
    };

    std::map<std::string, Hypergraph> lang;
    std::unordered_set<std::string> seen;
    std::vector<Hypergraph> frontier{sys.start};
    seen.insert(canonical_form(sys.start));
    auto record = [&](const Hypergraph& h) {
        if (h.size() <= size_bound && sys.is_terminal_graph(h)) lang.emplace(canonical_form(h), h);
    };
    record(sys.start);
    for (int step = 0; step < step_bound && !frontier.empty(); ++step) {
        std::vector<Hypergraph> next;
        for (const auto& h : frontier)
            for (const auto& r : sys.rules)
                for (const auto& occ : applicable_matches(h, r)) {
                    Hypergraph k = apply(h, r, occ);
                    if (lower_bound(k) > size_bound) continue;
                    if (!seen.insert(canonical_form(k)).second) continue;
                    record(k);
                    next.push_back(std::move(k));
                }
        frontier = std::move(next);
    }
    return lang;
}

namespace {

// Small builder for hand-written graphs.
struct G {
    Hypergraph h;
    int edge_no = 0;
    G& nodes(std::initializer_list<const char*> ns) {
        for (const char* n : ns) h.nodes.insert(Symbol(n));
        return *this;
    }
    G& edge(const char* label, std::initializer_list<std::pair<const char*, const char*>> att) {
        Edge e{Symbol(label), {}};
        for (const auto& [s, n] : att) e.att[Symbol(s)] = Symbol(n);
        h.edges[Symbol("e" + std::to_string(++edge_no))] = e;
        return *this;
    }
    G& st(const char* label, const char* from, const char* to) { return edge(label, {{"s", from}, {"t", to}}); }
    G& ext(std::initializer_list<std::pair<const char*, const char*>> m) {
        for (const auto& [s, n] : m) h.ext[Symbol(s)] = Symbol(n);
        return *this;
    }
};

Hypergraph with_flag(Hypergraph h, const char* flag) {
    SymbolSet used;
    for (const auto& [id, e] : h.edges) used.insert(id);
    h.edges[fresh_symbol("e", used)] = Edge{Symbol(flag), {}};
    return h;
}

Hypergraph string_of(const std::vector<const char*>& word) {
    std::vector<Symbol> w;
    for (const char* x : word) w.emplace_back(x);
    return string_graph(w);
}

Hypergraph handle_st(const char* label) { return handle(Symbol(label), {Symbol("s"), Symbol("t")}); }

}  // namespace

HtSystem np_complete_system() {
    HtSystem sys;
    const std::vector<Symbol> st{Symbol("s"), Symbol("t")};
    const std::vector<Symbol> four{Symbol("1"), Symbol("2"), Symbol("3"), Symbol("4")};
    for (const char* l : {"P", "S", "T1", "U"}) sys.nonterminals.add(Symbol(l), st);
    sys.nonterminals.add(Symbol("Q1"), {});
    sys.nonterminals.add(Symbol("Q2"), {});
    sys.nonterminals.add(Symbol("T2"), four);
    for (const char* l : {"0", "1", "a", "b", "c"}) sys.terminals.add(Symbol(l), st);
    sys.start = with_flag(handle_st("S"), "Q1");

    auto rule = [&](std::string name, Hypergraph lhs, Hypergraph rhs) {
        sys.rules.push_back({std::move(name), std::move(lhs), std::move(rhs)});
    };
    const Hypergraph s_q1 = with_flag(handle_st("S"), "Q1");
    const Hypergraph t1_q1 = with_flag(handle_st("T1"), "Q1");
    const Hypergraph t2_q1 = with_flag(handle(Symbol("T2"), four), "Q1");

    // Triples left out of the cover.
    rule("skip", s_q1, with_flag(string_of({"S", "a", "T1", "a", "T1", "a", "T1"}), "Q1"));
    for (const char* k : {"0", "1"}) {
        rule(std::string("word_") + k, t1_q1, with_flag(string_of({k, "T1"}), "Q1"));
        rule(std::string("letter_") + k, t1_q1, with_flag(string_of({k}), "Q1"));
    }
    // Triples in the cover: each word is generated twice, once on the string
    // and once on a parallel track above it guarded by a P edge.
    {
        G g;
        g.nodes({"b0", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "u2", "u3", "u4", "u5", "u6", "u7"});
        g.st("S", "b0", "b1");
        g.st("a", "b1", "b2").st("a", "b3", "b4").st("a", "b5", "b6");
        const char* bot[] = {"b0", "b1", "b2", "b3", "b4", "b5", "b6", "b7"};
        const char* top[] = {"", "", "u2", "u3", "u4", "u5", "u6", "u7"};
        for (int k = 1; k <= 3; ++k) {
            g.st("P", top[2 * k], top[2 * k + 1]);
            g.edge("T2", {{"1", top[2 * k]}, {"2", top[2 * k + 1]}, {"3", bot[2 * k]}, {"4", bot[2 * k + 1]}});
        }
        g.ext({{"s", "b0"}, {"t", "b7"}});
        rule("choose", s_q1, with_flag(g.h, "Q1"));
    }
    for (const char* k : {"0", "1"}) {
        G g;
        g.nodes({"1", "2", "3", "4", "m1", "m3"});
        g.st(k, "1", "m1").st(k, "3", "m3");
        g.edge("T2", {{"1", "m1"}, {"2", "2"}, {"3", "m3"}, {"4", "4"}});
        g.ext({{"1", "1"}, {"2", "2"}, {"3", "3"}, {"4", "4"}});
        rule(std::string("copy_word_") + k, t2_q1, with_flag(g.h, "Q1"));
        G h;
        h.nodes({"1", "2", "3", "4"});
        h.st(k, "1", "2").st(k, "3", "4");
        h.ext({{"1", "1"}, {"2", "2"}, {"3", "3"}, {"4", "4"}});
        rule(std::string("copy_letter_") + k, t2_q1, with_flag(h.h, "Q1"));
    }
    rule("switch", s_q1, with_flag(handle_st("U"), "Q2"));
    {
        G lhs;
        lhs.nodes({"1", "2", "3", "4"});
        lhs.st("P", "1", "2").st("U", "3", "4");
        lhs.ext({{"1", "1"}, {"2", "2"}, {"3", "3"}, {"4", "4"}});
        G rhs;
        rhs.nodes({"1", "2", "3", "4", "x"});
        rhs.st("b", "3", "1").st("b", "2", "x").st("U", "x", "4");
        rhs.ext({{"1", "1"}, {"2", "2"}, {"3", "3"}, {"4", "4"}});
        rule("splice", with_flag(lhs.h, "Q2"), with_flag(rhs.h, "Q2"));
    }
    rule("close", with_flag(handle_st("U"), "Q2"), handle_st("c"));
    return sys;
}

Hypergraph exact_cover_graph(const std::vector<std::string>& universe,
                             const std::vector<std::vector<std::string>>& triples) {
    std::vector<Symbol> word;
    auto letters = [&](const std::string& w) {
        if (w.empty()) throw Error("exact cover words must be nonempty");
        for (char ch : w) {
            if (ch != '0' && ch != '1') throw Error("exact cover words are over {0,1}");
            word.emplace_back(std::string(1, ch));
        }
    };
    for (const auto& w : universe) {
        word.emplace_back("b");
        letters(w);
        word.emplace_back("b");
    }
    word.emplace_back("c");
    for (const auto& t : triples) {
        if (t.size() != 3) throw Error("exact cover sets must have three elements");
        for (const auto& w : t) {
            word.emplace_back("a");
            letters(w);
        }
    }
    return string_graph(word);
}

}  // namespace hgl
