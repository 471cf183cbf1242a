#include "hgl/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace hgl {

Word word_of(const std::string& letters) {
    Word w;
    for (char c : letters) w.emplace_back(std::string(1, c));
    return w;
}

Word split_word(const std::string& text) {
    if (text.find_first_of(" \t") == std::string::npos) return word_of(text);
    Word w;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) w.emplace_back(tok);
    return w;
}

const char* to_string(Membership::Outcome o) {
    switch (o) {
        case Membership::Accepted: return "accepted";
        case Membership::Rejected: return "rejected";
        case Membership::Unknown: return "unknown";
    }
    return "?";
}

namespace {

void require_vars(const Formula& f, const SymbolSet& allowed, const std::string& where) {
    for (Symbol v : free_vars(f))
        if (!allowed.count(v)) throw Error(where + ": free variable " + v.str() + " not allowed");
}

void require_logic(Logic logic, const Formula& f, const std::string& where) {
    if (logic == Logic::MILL1 && has_bang(f)) throw Error(where + ": `!` in a mill1 grammar");
}

}  // namespace

void StringGrammar::validate() const {
    if (!start) throw Error("grammar has no start formula");
    const SymbolSet st{Symbol("s"), Symbol("t")};
    std::vector<Formula> all{start};
    require_vars(start, st, "start");
    require_logic(logic, start, "start");
    for (const auto& [a, fs] : lexicon) {
        if (!alphabet.count(a)) throw Error("lexicon entry for unknown letter " + a.str());
        for (const Formula& f : fs) {
            require_vars(f, st, "lexicon entry for " + a.str());
            require_logic(logic, f, "lexicon entry for " + a.str());
            all.push_back(f);
        }
    }
    check_arities(all);
}

void HypergraphGrammar::validate() const {
    if (!start) throw Error("grammar has no start formula");
    std::vector<Formula> all{start};
    require_vars(start, ext_type, "start");
    require_logic(logic, start, "start");
    for (const auto& [a, fs] : lexicon) {
        if (!terminals.contains(a)) throw Error("lexicon entry for undeclared label " + a.str());
        const auto& sels = terminals.type_of(a);
        SymbolSet allowed(sels.begin(), sels.end());
        for (const Formula& f : fs) {
            require_vars(f, allowed, "lexicon entry for " + a.str());
            require_logic(logic, f, "lexicon entry for " + a.str());
            all.push_back(f);
        }
    }
    for (const Formula& f : node_lexicon) {
        require_vars(f, {x_dot()}, "node lexicon entry");
        require_logic(logic, f, "node lexicon entry");
        all.push_back(f);
    }
    if (!pool.empty() && logic != Logic::MILL1) throw Error("pooled lexicons need logic mill1");
    if (pool_slots < 0) throw Error("negative pool slot count");
    for (const Formula& f : pool) {
        require_vars(f, {}, "pool formula");
        require_logic(logic, f, "pool formula");
        all.push_back(f);
    }
    check_arities(all);
}

namespace {

using Counts = std::map<Symbol, long>;

void count_atoms(const Formula& f, int sign, Counts& c, SymbolSet& untracked, bool under_bang) {
    switch (f->op) {
        case Op::Atom:
            if (under_bang) untracked.insert(f->sym);
            else c[f->sym] += sign;
            return;
        case Op::Tensor:
            count_atoms(f->a, sign, c, untracked, under_bang);
            count_atoms(f->b, sign, c, untracked, under_bang);
            return;
        case Op::Lolli:
            count_atoms(f->a, -sign, c, untracked, under_bang);
            count_atoms(f->b, sign, c, untracked, under_bang);
            return;
        case Op::Exists:
        case Op::Forall:
            count_atoms(f->a, sign, c, untracked, under_bang);
            return;
        case Op::Bang:
            count_atoms(f->a, sign, c, untracked, true);
            return;
    }
}

// One position of a candidate sequent with its alternative formulas.
struct Item {
    Symbol key;
    bool is_node;
    std::vector<Formula> raw;       // lexicon entries
    std::vector<Formula> inst;      // instantiated
    std::vector<Counts> counts;
};

struct Search {
    Logic logic;
    std::vector<Item> items;
    Formula goal;
    std::vector<Formula> pool;
    int pool_cap = 0;
    int pool_slots = 0;
    MemberOptions opts;

    Membership result;
    std::vector<std::size_t> choice;
    bool unknown = false;

    Membership run() {
        // Balance pruning: for each tracked predicate the atom counts of the
        // antecedent and the goal must cancel.
        SymbolSet untracked;
        Counts goal_counts;
        count_atoms(goal, -1, goal_counts, untracked, false);
        for (auto& it : items)
            for (const Formula& f : it.inst) {
                Counts c;
                count_atoms(f, 1, c, untracked, false);
                it.counts.push_back(std::move(c));
            }
        for (const Formula& f : pool) {
            Counts c;
            count_atoms(f, 1, c, untracked, true);
        }
        SymbolSet preds;
        for (const auto& [p, v] : goal_counts) preds.insert(p);
        for (const auto& it : items)
            for (const auto& c : it.counts)
                for (const auto& [p, v] : c) preds.insert(p);
        for (Symbol p : untracked) preds.erase(p);
        tracked_.assign(preds.begin(), preds.end());
        std::size_t n = items.size(), k = tracked_.size();
        lo_.assign((n + 1) * k, 0);
        hi_.assign((n + 1) * k, 0);
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = 0; j < k; ++j) {
                long mn = 0, mx = 0;
                bool first = true;
                for (const auto& c : items[i].counts) {
                    auto it = c.find(tracked_[j]);
                    long v = it == c.end() ? 0 : it->second;
                    mn = first ? v : std::min(mn, v);
                    mx = first ? v : std::max(mx, v);
                    first = false;
                }
                lo_[i * k + j] = lo_[(i + 1) * k + j] + mn;
                hi_[i * k + j] = hi_[(i + 1) * k + j] + mx;
            }
        }
        cur_.assign(k, 0);
        for (std::size_t j = 0; j < k; ++j) {
            auto it = goal_counts.find(tracked_[j]);
            if (it != goal_counts.end()) cur_[j] = it->second;
        }
        for (const auto& it : items)
            if (it.raw.empty()) return result;
        choice.assign(n, 0);
        if (opts.split_families && pool.empty() && logic == Logic::MILL1) {
            if (auto r = split_search()) return *r;
        }
        dfs(0);
        if (result.outcome != Membership::Accepted && unknown) result.outcome = Membership::Unknown;
        return result;
    }

private:
    std::vector<Symbol> tracked_;

    static void top_factors(const Formula& f, std::vector<Formula>& out) {
        if (f->op == Op::Tensor) {
            top_factors(f->a, out);
            top_factors(f->b, out);
        } else {
            out.push_back(f);
        }
    }

    // Splits along predicate families when the lexicon is a product over
    // them; each family is then an independent membership problem. Returns
    // nullopt when the shape does not allow it.
    std::optional<Membership> split_search() {
        std::map<Symbol, Symbol> parent;
        std::function<Symbol(Symbol)> find = [&](Symbol p) {
            auto it = parent.find(p);
            if (it == parent.end()) return parent[p] = p;
            if (it->second == p) return p;
            return it->second = find(it->second);
        };
        auto link = [&](const Formula& factor) {
            std::map<Symbol, std::size_t> ar;
            collect_predicates(factor, ar);
            std::optional<Symbol> first;
            for (const auto& [p, a] : ar) {
                Symbol r = find(p);
                if (!first) first = r;
                else parent[r] = find(*first);
            }
        };
        std::vector<Formula> fs;
        top_factors(goal, fs);
        for (const auto& it : items)
            for (const Formula& f : it.inst) top_factors(f, fs);
        for (const Formula& f : fs) link(f);
        SymbolSet roots;
        for (const auto& [p, q] : parent) roots.insert(find(p));
        if (roots.size() < 2) return std::nullopt;
        std::vector<Symbol> fam(roots.begin(), roots.end());

        // parts[j] of a formula: tensor of its top factors in family j
        auto parts = [&](const Formula& f) -> std::optional<std::vector<Formula>> {
            std::vector<Formula> factors;
            top_factors(f, factors);
            std::vector<Formula> out(fam.size());
            for (const Formula& x : factors) {
                std::map<Symbol, std::size_t> ar;
                collect_predicates(x, ar);
                if (ar.empty()) return std::nullopt;
                std::size_t j = static_cast<std::size_t>(
                    std::find(fam.begin(), fam.end(), find(ar.begin()->first)) - fam.begin());
                out[j] = out[j] ? tensor(out[j], x) : x;
            }
            for (const Formula& x : out)
                if (!x) return std::nullopt;
            return out;
        };
        auto goal_parts = parts(goal);
        if (!goal_parts) return std::nullopt;

        std::vector<Search> subs(fam.size());
        // per item: alternative index -> its part index in each family
        std::vector<std::vector<std::vector<std::size_t>>> tuple_of(items.size());
        for (std::size_t j = 0; j < fam.size(); ++j) {
            subs[j].logic = logic;
            subs[j].opts = opts;
            subs[j].opts.want_witness = false;
            subs[j].goal = (*goal_parts)[j];
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::vector<std::map<std::string, std::size_t>> index(fam.size());
            std::set<std::vector<std::size_t>> tuples;
            for (std::size_t j = 0; j < fam.size(); ++j) subs[j].items.push_back(Item{items[i].key, items[i].is_node, {}, {}, {}});
            std::set<std::string> distinct;
            for (const Formula& f : items[i].inst) {
                auto ps = parts(f);
                if (!ps) return std::nullopt;
                distinct.insert(alpha_key(f));
                std::vector<std::size_t> tuple;
                for (std::size_t j = 0; j < fam.size(); ++j) {
                    auto [at, fresh] = index[j].emplace(alpha_key((*ps)[j]), index[j].size());
                    if (fresh) {
                        subs[j].items.back().raw.push_back((*ps)[j]);
                        subs[j].items.back().inst.push_back((*ps)[j]);
                    }
                    tuple.push_back(at->second);
                }
                tuples.insert(tuple);
                tuple_of[i].push_back(std::move(tuple));
            }
            std::size_t product = 1;
            for (const auto& ix : index) product *= ix.size();
            if (tuples.size() != product || distinct.size() != tuples.size()) return std::nullopt;
        }
        bool undecided = false;
        for (auto& sub : subs) {
            Membership m = sub.run();
            result.candidates += m.candidates;
            if (m.outcome == Membership::Rejected) return result;
            if (m.outcome == Membership::Unknown) undecided = true;
        }
        if (undecided) {
            result.outcome = Membership::Unknown;
            return result;
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::vector<std::size_t> want;
            for (const auto& sub : subs) want.push_back(sub.choice[i]);
            choice[i] = static_cast<std::size_t>(
                std::find(tuple_of[i].begin(), tuple_of[i].end(), want) - tuple_of[i].begin());
        }
        if (attempt()) return result;
        return std::nullopt;  // not expected; fall back to the joint search
    }

    std::vector<long> lo_, hi_, cur_;

    bool feasible(std::size_t i) const {
        std::size_t k = tracked_.size();
        for (std::size_t j = 0; j < k; ++j) {
            if (cur_[j] + lo_[i * k + j] > 0 || cur_[j] + hi_[i * k + j] < 0) return false;
        }
        return true;
    }

    bool dfs(std::size_t i) {
        if (!feasible(i)) return false;
        if (i == items.size()) return attempt();
        const Item& it = items[i];
        for (std::size_t c = 0; c < it.inst.size(); ++c) {
            choice[i] = c;
            for (std::size_t j = 0; j < tracked_.size(); ++j) {
                auto f = it.counts[c].find(tracked_[j]);
                if (f != it.counts[c].end()) cur_[j] += f->second;
            }
            bool done = dfs(i + 1);
            for (std::size_t j = 0; j < tracked_.size(); ++j) {
                auto f = it.counts[c].find(tracked_[j]);
                if (f != it.counts[c].end()) cur_[j] -= f->second;
            }
            if (done) return true;
        }
        return false;
    }

    void accept(const std::vector<Formula>& raw, Sequent seq, ProofTree proof) {
        result.outcome = Membership::Accepted;
        if (!opts.want_witness) return;
        MembershipWitness w;
        for (std::size_t i = 0; i < items.size(); ++i)
            (items[i].is_node ? w.node_choice : w.edge_choice)[items[i].key] = raw[i];
        w.sequent = std::move(seq);
        w.proof = std::move(proof);
        result.witness = std::move(w);
    }

    bool attempt() {
        ++result.candidates;
        Sequent seq;
        std::vector<Formula> raw;
        for (std::size_t i = 0; i < items.size(); ++i) {
            seq.ante.push_back(items[i].inst[choice[i]]);
            raw.push_back(items[i].raw[choice[i]]);
        }
        seq.succ = goal;
        if (pool.empty()) {
            ProveOptions po;
            po.want_proof = opts.want_witness;
            Verdict v = prove(seq, logic, opts.budget, po);
            if (v.kind == Verdict::BudgetExhausted) unknown = true;
            if (!v.derivable()) return false;
            accept(raw, std::move(seq), v.proof ? std::move(*v.proof) : ProofTree{});
            return true;
        }
        // Pooled formulas are offered as !-formulas with a cap on uses; a
        // proof fixes the multiset, which is then spread over the positions.
        Sequent banged = seq;
        for (const Formula& f : pool) banged.ante.push_back(bang(f));
        ProveOptions po;
        po.want_proof = true;
        po.max_uses = pool_cap;
        Verdict v = prove_ill1(banged, opts.budget, po);
        if (v.kind == Verdict::BudgetExhausted) unknown = true;
        if (!v.derivable()) return false;
        std::vector<Formula> used;
        std::function<void(const ProofTree&)> walk = [&](const ProofTree& t) {
            if (t.rule == "!-dereliction" && t.principal) {
                Formula f = t.principal->op == Op::Bang ? t.principal->a : t.principal;
                used.push_back(f);
            }
            for (const auto& p : t.premises) walk(p);
        };
        walk(*v.proof);
        std::size_t next = 0;
        for (std::size_t i = 0; i < items.size() && next < used.size(); ++i) {
            for (int k = 0; k < pool_slots && next < used.size(); ++k, ++next) {
                seq.ante[i] = tensor(seq.ante[i], used[next]);
                raw[i] = tensor(raw[i], used[next]);
            }
        }
        if (next < used.size()) throw Error("pooled proof used more formulas than the lexicon allows");
        Verdict m = prove_mill1(seq, {opts.want_witness});
        if (!m.derivable()) throw Error("pooled proof did not transfer to the expanded lexicon");
        accept(raw, std::move(seq), m.proof ? std::move(*m.proof) : ProofTree{});
        return true;
    }
};

}  // namespace

Sequent membership_sequent(const HypergraphGrammar& g, const Hypergraph& h,
                           const std::map<Symbol, Formula>& edge_choice,
                           const std::map<Symbol, Formula>& node_choice) {
    Sequent s;
    for (const auto& [id, e] : h.edges) s.ante.push_back(apply_subst(edge_choice.at(id), e.att));
    for (Symbol v : h.nodes)
        if (node_choice.count(v)) s.ante.push_back(apply_subst(node_choice.at(v), {{x_dot(), v}}));
    s.succ = apply_subst(g.start, h.ext);
    return s;
}

Membership accepts_hypergraph(const HypergraphGrammar& g, const Hypergraph& h, MemberOptions opts) {
    if (h.type() != g.ext_type) return {};
    Search s;
    s.logic = g.logic;
    s.opts = opts;
    s.goal = apply_subst(g.start, h.ext);
    for (const auto& [id, e] : h.edges) {
        Item it{id, false, {}, {}, {}};
        auto lx = g.lexicon.find(e.label);
        if (lx != g.lexicon.end() && g.terminals.contains(e.label)) {
            SymbolSet want(g.terminals.type_of(e.label).begin(), g.terminals.type_of(e.label).end());
            SymbolSet got;
            for (const auto& [sel, n] : e.att) got.insert(sel);
            if (want == got)
                for (const Formula& f : lx->second) {
                    it.raw.push_back(f);
                    it.inst.push_back(apply_subst(f, e.att));
                }
        }
        s.items.push_back(std::move(it));
    }
    if (!opts.ignore_nodes) {
        for (Symbol v : h.nodes) {
            Item it{v, true, {}, {}, {}};
            for (const Formula& f : g.node_lexicon) {
                it.raw.push_back(f);
                it.inst.push_back(apply_subst(f, {{x_dot(), v}}));
            }
            s.items.push_back(std::move(it));
        }
    }
    s.pool = g.pool;
    s.pool_slots = g.pool_slots;
    s.pool_cap = g.pool_slots * static_cast<int>(h.size());
    return s.run();
}

Membership accepts_string(const StringGrammar& g, const Word& w, MemberOptions opts) {
    for (Symbol a : w)
        if (!g.alphabet.count(a)) throw Error("letter " + a.str() + " is not in the alphabet");
    if (w.empty()) return {};
    Search s;
    s.logic = g.logic;
    s.opts = opts;
    auto x = [](std::size_t i) { return Symbol("x" + std::to_string(i)); };
    const Symbol sv("s"), tv("t");
    s.goal = apply_subst(g.start, {{sv, x(0)}, {tv, x(w.size())}});
    for (std::size_t i = 0; i < w.size(); ++i) {
        Item it{Symbol("e" + std::to_string(i + 1)), false, {}, {}, {}};
        auto lx = g.lexicon.find(w[i]);
        if (lx != g.lexicon.end())
            for (const Formula& f : lx->second) {
                it.raw.push_back(f);
                it.inst.push_back(apply_subst(f, {{sv, x(i)}, {tv, x(i + 1)}}));
            }
        s.items.push_back(std::move(it));
    }
    return s.run();
}

bool string_language_member(const HypergraphGrammar& g, const Word& w, MemberOptions opts) {
    return accepts_hypergraph(g, string_graph(w), opts).outcome == Membership::Accepted;
}

}  // namespace hgl
