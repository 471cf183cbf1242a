#include "hgl/prover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>

namespace hgl {

const char* to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Derivable: return "derivable";
        case Verdict::NotDerivable: return "not-derivable";
        case Verdict::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
}

std::size_t ProofTree::size() const {
    std::size_t n = 1;
    for (const ProofTree& p : premises) n += p.size();
    return n;
}

namespace {

template <class Sig>
class FnRef;

// Non-owning callable reference; continuations never outlive the call that
// creates them.
template <class R, class... A>
class FnRef<R(A...)> {
public:
    template <class F>
        requires(!std::is_same_v<std::decay_t<F>, FnRef>)
    FnRef(F&& f)
        : obj_(const_cast<void*>(static_cast<const void*>(&f))),
          call_([](void* o, A... a) -> R {
              return (*static_cast<std::remove_reference_t<F>*>(o))(std::forward<A>(a)...);
          }) {}
    R operator()(A... a) const { return call_(obj_, std::forward<A>(a)...); }

private:
    void* obj_;
    R (*call_)(void*, A...);
};

using K = FnRef<bool()>;
using KRest = FnRef<bool(std::vector<Formula>&)>;

struct BudgetExceeded {};

bool negative(const Formula& f) { return f->op == Op::Lolli || f->op == Op::Forall; }

Formula inst(const Formula& body, Symbol x, Symbol y) { return apply_subst(body, {{x, y}}); }

// Signed atom counts: antecedent occurrences +1, succedent -1, flipped left
// of ⊸. Predicates under `!` are collected separately.
void count_atoms(const Formula& f, int sign, std::map<Symbol, int>& c, std::set<Symbol>* banged) {
    switch (f->op) {
        case Op::Atom: c[f->sym] += sign; return;
        case Op::Tensor:
            count_atoms(f->a, sign, c, banged);
            count_atoms(f->b, sign, c, banged);
            return;
        case Op::Lolli:
            count_atoms(f->a, -sign, c, banged);
            count_atoms(f->b, sign, c, banged);
            return;
        case Op::Exists:
        case Op::Forall: count_atoms(f->a, sign, c, banged); return;
        case Op::Bang:
            if (banged) {
                std::map<Symbol, std::size_t> preds;
                collect_predicates(f->a, preds);
                for (const auto& [p, n] : preds) banged->insert(p);
            }
            count_atoms(f->a, sign, c, banged);
            return;
    }
}

struct LogEntry {
    const char* rule;
    std::vector<Formula> ante;
    Formula succ;
    Formula principal;
    Symbol witness;
    int arity;
};

struct Ctx {
    std::vector<Formula> theta;       // contents of stored !-formulas
    std::vector<Formula> theta_bang;  // the !-formulas themselves
    std::vector<Formula> stable;
    std::vector<Formula> todo;
    Formula goal;
};

class Engine {
public:
    Engine(Logic logic, long budget, bool record) : logic_(logic), budget_(budget), record_(record) {}

    long decides() const { return decides_; }
    bool use_blocked() const { return use_blocked_; }

    bool run(const Sequent& s, int uses) {
        uses_left_ = uses;
        use_blocked_ = false;
        root_free_ = free_vars(s);
        Ctx c;
        c.todo = s.ante;
        c.goal = s.succ;
        return prove(c, [] { return true; });
    }

    ProofTree build_tree();

private:
    // ---- metavariables -------------------------------------------------
    struct TrailEntry {
        int k;
        int parent;
        Symbol binding;
        int stamp;
    };
    struct Mark {
        std::size_t trail, log, metas, eigens;
        int clock, uses;
    };

    Mark mark() const {
        return {trail_.size(), log_.size(), parent_.size(), estamp_.size(), clock_, uses_left_};
    }
    void restore(const Mark& m) {
        while (trail_.size() > m.trail) {
            const TrailEntry& t = trail_.back();
            parent_[t.k] = t.parent;
            binding_[t.k] = t.binding;
            mstamp_[t.k] = t.stamp;
            trail_.pop_back();
        }
        log_.resize(m.log);
        parent_.resize(m.metas);
        binding_.resize(m.metas);
        mstamp_.resize(m.metas);
        estamp_.resize(m.eigens);
        clock_ = m.clock;
        uses_left_ = m.uses;
    }

    static Symbol meta_symbol(int k) { return Symbol("?" + std::to_string(k)); }
    static Symbol eigen_symbol(int k) { return Symbol("#" + std::to_string(k)); }

    Symbol new_meta() {
        int k = static_cast<int>(parent_.size());
        parent_.push_back(k);
        binding_.emplace_back();
        mstamp_.push_back(clock_++);
        return meta_symbol(k);
    }
    Symbol new_eigen() {
        int k = static_cast<int>(estamp_.size());
        estamp_.push_back(clock_++);
        return eigen_symbol(k);
    }

    int find(int k) const {
        while (parent_[k] != k) k = parent_[k];
        return k;
    }
    Symbol resolve(Symbol x) const {
        if (!x.is_meta()) return x;
        int r = find(x.index());
        return binding_[r].empty() ? meta_symbol(r) : binding_[r];
    }
    int stamp_of(Symbol concrete) const { return concrete.is_eigen() ? estamp_[concrete.index()] : 0; }
    void save(int k) { trail_.push_back({k, parent_[k], binding_[k], mstamp_[k]}); }

    bool unify(Symbol x, Symbol y) {
        Symbol rx = resolve(x), ry = resolve(y);
        if (rx == ry) return true;
        if (rx.is_meta() && ry.is_meta()) {
            int a = rx.index(), b = ry.index();
            if (a > b) std::swap(a, b);
            save(a);
            save(b);
            parent_[b] = a;
            mstamp_[a] = std::min(mstamp_[a], mstamp_[b]);
            return true;
        }
        if (ry.is_meta()) std::swap(rx, ry);
        if (rx.is_meta()) {
            int r = rx.index();
            if (stamp_of(ry) >= mstamp_[r]) return false;
            save(r);
            binding_[r] = ry;
            return true;
        }
        return false;
    }

    bool unify_atoms(const Formula& a, const Formula& b) {
        if (a->sym != b->sym || a->args.size() != b->args.size()) return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
            if (!unify(a->args[i], b->args[i])) return false;
        return true;
    }

    bool has_meta(const Formula& f) const {
        switch (f->op) {
            case Op::Atom:
                return std::any_of(f->args.begin(), f->args.end(),
                                   [&](Symbol x) { return x.is_meta() && resolve(x).is_meta(); });
            case Op::Tensor:
            case Op::Lolli: return has_meta(f->a) || has_meta(f->b);
            default: return has_meta(f->a);
        }
    }

    Formula resolved(const Formula& f) const {
        SymbolMap m;
        collect_meta_map(f, m);
        return apply_subst(f, m);
    }
    void collect_meta_map(const Formula& f, SymbolMap& m) const {
        if (f->op == Op::Atom) {
            for (Symbol x : f->args)
                if (x.is_meta()) {
                    Symbol r = resolve(x);
                    if (r != x) m[x] = r;
                }
            return;
        }
        if (f->a) collect_meta_map(f->a, m);
        if (f->b) collect_meta_map(f->b, m);
    }
    std::string rkey(const Formula& f) const { return alpha_key(resolved(f)); }

    // ---- proof log -----------------------------------------------------
    void emit(const char* rule, std::vector<Formula> ante, Formula succ, Formula principal,
              Symbol witness, int arity) {
        if (!record_) return;
        log_.push_back({rule, std::move(ante), std::move(succ), std::move(principal), witness, arity});
    }
    static std::vector<Formula> join(std::initializer_list<const std::vector<Formula>*> parts) {
        std::vector<Formula> out;
        for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
        return out;
    }
    void emit_ctx(const char* rule, const Ctx& c, Formula principal, Symbol witness, int arity) {
        if (!record_) return;
        emit(rule, join({&c.theta_bang, &c.stable, &c.todo}), c.goal, std::move(principal), witness, arity);
    }
    // Contracts every stored formula once so a binary rule can hand the
    // whole store to both premises.
    void emit_contractions(const std::vector<Formula>& theta_bang, const std::vector<Formula>& rest,
                           const Formula& goal) {
        if (!record_) return;
        for (std::size_t i = 0; i < theta_bang.size(); ++i) {
            std::vector<Formula> ante = theta_bang;
            ante.insert(ante.end(), theta_bang.begin(), theta_bang.begin() + static_cast<long>(i));
            ante.insert(ante.end(), rest.begin(), rest.end());
            emit("!-contraction", std::move(ante), goal, theta_bang[i], {}, 1);
        }
    }
    void emit_weakenings(const std::vector<Formula>& theta_bang, const std::vector<Formula>& rest,
                         const Formula& goal) {
        if (!record_) return;
        for (std::size_t i = 0; i < theta_bang.size(); ++i) {
            std::vector<Formula> ante(theta_bang.begin() + static_cast<long>(i), theta_bang.end());
            ante.insert(ante.end(), rest.begin(), rest.end());
            emit("!-weakening", std::move(ante), goal, theta_bang[i], {}, 1);
        }
    }
    // Contraction then dereliction: leaves a copy of theta[i] in the context.
    void emit_use(const Ctx& c, std::size_t i, const std::vector<Formula>& rest, const Formula& goal) {
        if (!record_) return;
        std::vector<Formula> ante = join({&c.theta_bang, &rest});
        emit("!-contraction", ante, goal, c.theta_bang[i], {}, 1);
        ante.push_back(c.theta_bang[i]);
        emit("!-dereliction", std::move(ante), goal, c.theta_bang[i], {}, 1);
    }

    // ---- search --------------------------------------------------------
    bool balanced(const Ctx& c) const {
        std::map<Symbol, int> cnt;
        std::set<Symbol> banged;
        for (const Formula& f : c.theta) {
            std::map<Symbol, std::size_t> preds;
            collect_predicates(f, preds);
            for (const auto& [p, n] : preds) banged.insert(p);
        }
        for (const Formula& f : c.stable) count_atoms(f, 1, cnt, &banged);
        for (const Formula& f : c.todo) count_atoms(f, 1, cnt, &banged);
        count_atoms(c.goal, -1, cnt, &banged);
        for (const auto& [p, n] : cnt)
            if (n != 0 && !banged.count(p)) return false;
        return true;
    }

    bool prove(Ctx c, K k) {
        for (;;) {
            const Formula g = c.goal;
            if (g->op == Op::Lolli) {
                emit_ctx("⊸R", c, g, {}, 1);
                c.todo.push_back(g->a);
                c.goal = g->b;
            } else if (g->op == Op::Forall) {
                Symbol z = new_eigen();
                emit_ctx("∀R", c, g, z, 1);
                c.goal = inst(g->a, g->sym, z);
            } else {
                break;
            }
        }
        while (!c.todo.empty()) {
            const Formula f = c.todo.front();
            switch (f->op) {
                case Op::Tensor:
                    emit_ctx("⊗L", c, f, {}, 1);
                    c.todo.erase(c.todo.begin());
                    c.todo.push_back(f->a);
                    c.todo.push_back(f->b);
                    break;
                case Op::Exists: {
                    Symbol z = new_eigen();
                    emit_ctx("∃L", c, f, z, 1);
                    c.todo.erase(c.todo.begin());
                    c.todo.push_back(inst(f->a, f->sym, z));
                    break;
                }
                case Op::Bang:
                    c.todo.erase(c.todo.begin());
                    c.theta.push_back(f->a);
                    c.theta_bang.push_back(f);
                    break;
                default:
                    c.todo.erase(c.todo.begin());
                    c.stable.push_back(f);
            }
        }
        return decide(c, k);
    }

    std::string memo_key(const Ctx& c) const {
        std::vector<std::string> ks;
        for (const Formula& f : c.stable) ks.push_back(rkey(f));
        std::sort(ks.begin(), ks.end());
        std::vector<std::string> ts;
        for (const Formula& f : c.theta) ts.push_back(rkey(f));
        std::sort(ts.begin(), ts.end());
        std::string key;
        for (auto& s : ts) key += s + "!";
        key += "|";
        for (auto& s : ks) key += s + ",";
        key += "|" + rkey(c.goal);
        return key;
    }

    bool ground(const Ctx& c) const {
        auto any = [&](const std::vector<Formula>& v) {
            return std::any_of(v.begin(), v.end(), [&](const Formula& f) { return has_meta(f); });
        };
        return !any(c.theta) && !any(c.stable) && !has_meta(c.goal);
    }

    bool decide(Ctx& c, K k) {
        ++decides_;
        if (logic_ == Logic::ILL1 && decides_ > budget_) throw BudgetExceeded{};
        if (!balanced(c)) return false;
        if (!ground(c)) return decide_options(c, k);

        std::string key = memo_key(c);
        if (logic_ == Logic::MILL1) {
            if (failed_.count(key)) return false;
            Mark m = mark();
            if (!decide_options(c, [] { return true; })) {
                failed_.insert(key);
                return false;
            }
            // A ground sequent binds nothing, so one proof of it is as good
            // as any other.
            if (k()) return true;
            restore(m);
            return false;
        }
        auto it = failed_uses_.find(key);
        if (it != failed_uses_.end() && it->second >= uses_left_) return false;
        bool reached = false;
        int uses = uses_left_;
        bool blocked_before = use_blocked_;
        use_blocked_ = false;
        bool ok = decide_options(c, [&] {
            reached = true;
            return k();
        });
        if (!ok && !reached) {
            // a bound that was never hit makes the failure hold for any bound
            int stored = use_blocked_ ? uses : 1 << 30;
            int& slot = failed_uses_[key];
            slot = std::max(slot, stored);
        }
        use_blocked_ = use_blocked_ || blocked_before;
        return ok;
    }

    static bool has_negative_leaf(const Formula& f) {
        switch (f->op) {
            case Op::Tensor: return has_negative_leaf(f->a) || has_negative_leaf(f->b);
            case Op::Exists: return has_negative_leaf(f->a);
            case Op::Lolli:
            case Op::Forall: return true;
            default: return false;
        }
    }

    bool decide_options(Ctx& c, K k) {
        const Formula goal = c.goal;
        bool stable_has_negative = std::any_of(c.stable.begin(), c.stable.end(), negative);
        // right focus
        if (!stable_has_negative || has_negative_leaf(goal)) {
            Mark m = mark();
            if (right_focus(c, goal, c.stable, false, [&](std::vector<Formula>&) { return k(); }))
                return true;
            restore(m);
        }
        // left focus on the linear context
        std::unordered_set<std::string> tried;
        for (std::size_t i = 0; i < c.stable.size(); ++i) {
            if (!negative(c.stable[i])) continue;
            if (!tried.insert(rkey(c.stable[i])).second) continue;
            Mark m = mark();
            Ctx c2 = c;
            Formula n = c2.stable[i];
            c2.stable.erase(c2.stable.begin() + static_cast<long>(i));
            if (focus_left(c2, n, k)) return true;
            restore(m);
        }
        // uses of stored formulas
        tried.clear();
        for (std::size_t i = 0; i < c.theta.size(); ++i) {
            const Formula th = c.theta[i];
            if (th->op == Op::Atom) continue;  // consumed directly by right focus
            if (!tried.insert(rkey(th)).second) continue;
            if (uses_left_ <= 0) {
                use_blocked_ = true;
                break;
            }
            Mark m = mark();
            --uses_left_;
            emit_use(c, i, c.stable, goal);
            Ctx c2 = c;
            bool ok;
            if (negative(th)) {
                ok = focus_left(c2, th, k);
            } else {
                c2.todo = {th};
                ok = prove(c2, k);
            }
            if (ok) return true;
            restore(m);
        }
        return false;
    }

    bool focus_left(Ctx c, Formula n, K k) {
        for (;;) {
            if (n->op == Op::Forall) {
                Symbol m = new_meta();
                if (record_) {
                    std::vector<Formula> ante = join({&c.theta_bang, &c.stable});
                    ante.push_back(n);
                    emit("∀L", std::move(ante), c.goal, n, m, 1);
                }
                n = inst(n->a, n->sym, m);
                continue;
            }
            if (n->op == Op::Lolli) {
                if (record_) {
                    std::vector<Formula> rest = c.stable;
                    rest.push_back(n);
                    emit_contractions(c.theta_bang, rest, c.goal);
                    std::vector<Formula> ante = join({&c.theta_bang, &c.theta_bang, &c.stable});
                    ante.push_back(n);
                    emit("⊸L", std::move(ante), c.goal, n, {}, 2);
                }
                Formula b = n->b;
                return right_focus(c, n->a, c.stable, true, [&](std::vector<Formula>& rest) {
                    Ctx c2 = c;
                    c2.stable = rest;
                    return focus_left(c2, b, k);
                });
            }
            c.todo = {n};
            return prove(c, k);
        }
    }

    // Right focus on a positive formula, decomposed into atoms, negative
    // formulas and !-formulas.
    struct PNode {
        Formula f;
        int kind;  // 0 atom, 1 negative, 2 bang, 3 tensor, 4 exists
        Symbol witness;
        int c1 = -1, c2 = -1;
        int match = -1;  // atoms: index into avail, or -2-i for theta[i]
        std::vector<int> assigned;
    };

    int flatten(const Formula& f, std::vector<PNode>& nodes) {
        int id = static_cast<int>(nodes.size());
        nodes.push_back({f, 0, {}, -1, -1, -1, {}});
        switch (f->op) {
            case Op::Atom: nodes[id].kind = 0; break;
            case Op::Bang: nodes[id].kind = 2; break;
            case Op::Lolli:
            case Op::Forall: nodes[id].kind = 1; break;
            case Op::Tensor: {
                nodes[id].kind = 3;
                int a = flatten(f->a, nodes);
                int b = flatten(f->b, nodes);
                nodes[id].c1 = a;
                nodes[id].c2 = b;
                break;
            }
            case Op::Exists: {
                nodes[id].kind = 4;
                Symbol m = new_meta();
                nodes[id].witness = m;
                int a = flatten(inst(f->a, f->sym, m), nodes);
                nodes[id].c1 = a;
                break;
            }
        }
        return id;
    }

    struct Focus {
        Ctx* c;
        std::vector<PNode> nodes;
        const std::vector<Formula>* avail;
        std::vector<char> used;
        bool partial;
        KRest* kr;
    };

    bool right_focus(Ctx& c, const Formula& p, const std::vector<Formula>& avail, bool partial, KRest kr) {
        Focus fo{&c, {}, &avail, std::vector<char>(avail.size(), 0), partial, &kr};
        flatten(p, fo.nodes);
        std::vector<int> atoms;
        for (std::size_t i = 0; i < fo.nodes.size(); ++i)
            if (fo.nodes[i].kind == 0) atoms.push_back(static_cast<int>(i));
        return match_atoms(fo, atoms);
    }

    bool candidate(const Formula& a, const Formula& g) {
        if (g->op != Op::Atom || g->sym != a->sym || g->args.size() != a->args.size()) return false;
        Mark m = mark();
        bool ok = unify_atoms(a, g);
        restore(m);
        return ok;
    }

    bool match_atoms(Focus& fo, std::vector<int> pending) {
        if (pending.empty()) return assign_rest(fo);
        const std::vector<Formula>& avail = *fo.avail;
        const Ctx& c = *fo.c;
        // most constrained atom first
        std::size_t best = 0;
        int best_count = -1;
        for (std::size_t pi = 0; pi < pending.size(); ++pi) {
            const Formula& a = fo.nodes[pending[pi]].f;
            int n = 0;
            for (std::size_t j = 0; j < avail.size(); ++j)
                if (!fo.used[j] && candidate(a, avail[j])) ++n;
            if (uses_left_ > 0)
                for (const Formula& th : c.theta)
                    if (candidate(a, th)) ++n;
            if (best_count < 0 || n < best_count) {
                best_count = n;
                best = pi;
            }
            if (n == 0) break;
        }
        if (best_count == 0) {
            if (!c.theta.empty() && uses_left_ <= 0) use_blocked_ = true;
            return false;
        }
        int leaf = pending[best];
        pending.erase(pending.begin() + static_cast<long>(best));
        const Formula a = fo.nodes[leaf].f;
        std::unordered_set<std::string> tried;
        for (std::size_t j = 0; j < avail.size(); ++j) {
            if (fo.used[j] || !candidate(a, avail[j])) continue;
            if (!tried.insert(rkey(avail[j])).second) continue;
            Mark m = mark();
            unify_atoms(a, avail[j]);
            fo.used[j] = 1;
            fo.nodes[leaf].match = static_cast<int>(j);
            if (match_atoms(fo, pending)) return true;
            fo.used[j] = 0;
            restore(m);
        }
        for (std::size_t i = 0; i < c.theta.size(); ++i) {
            if (!candidate(a, c.theta[i])) continue;
            if (uses_left_ <= 0) {
                use_blocked_ = true;
                break;
            }
            if (!tried.insert("!" + rkey(c.theta[i])).second) continue;
            Mark m = mark();
            --uses_left_;
            unify_atoms(a, c.theta[i]);
            fo.nodes[leaf].match = -2 - static_cast<int>(i);
            if (match_atoms(fo, pending)) return true;
            restore(m);
        }
        fo.nodes[leaf].match = -1;
        return false;
    }

    bool assign_rest(Focus& fo) {
        const std::vector<Formula>& avail = *fo.avail;
        std::vector<int> left;
        for (std::size_t j = 0; j < avail.size(); ++j)
            if (!fo.used[j]) left.push_back(static_cast<int>(j));
        std::vector<int> negs;
        for (std::size_t i = 0; i < fo.nodes.size(); ++i)
            if (fo.nodes[i].kind == 1) negs.push_back(static_cast<int>(i));
        if (!fo.partial && negs.empty() && !left.empty()) return false;
        int choices = static_cast<int>(negs.size()) + (fo.partial ? 1 : 0);
        // choice index negs.size() means "stays in the remaining context"
        std::vector<int> pick(left.size(), 0);
        for (;;) {
            for (int nd : negs) fo.nodes[nd].assigned.clear();
            std::vector<Formula> rest;
            for (std::size_t q = 0; q < left.size(); ++q) {
                if (pick[q] < static_cast<int>(negs.size()))
                    fo.nodes[negs[pick[q]]].assigned.push_back(left[q]);
                else
                    rest.push_back(avail[left[q]]);
            }
            Mark m = mark();
            if (walk(fo, 0, [&] { return (*fo.kr)(rest); })) return true;
            restore(m);
            std::size_t q = 0;
            while (q < pick.size() && ++pick[q] == choices) pick[q++] = 0;
            if (q == pick.size()) break;
        }
        return false;
    }

    void context_of(const Focus& fo, int id, std::vector<Formula>& out) const {
        const PNode& n = fo.nodes[id];
        switch (n.kind) {
            case 0:
                if (n.match >= 0) out.push_back((*fo.avail)[n.match]);
                break;
            case 1:
                for (int j : n.assigned) out.push_back((*fo.avail)[j]);
                break;
            case 2: break;
            case 3:
                context_of(fo, n.c1, out);
                context_of(fo, n.c2, out);
                break;
            case 4: context_of(fo, n.c1, out); break;
        }
    }

    bool walk(Focus& fo, int id, K k) {
        const PNode& n = fo.nodes[id];
        const Ctx& c = *fo.c;
        switch (n.kind) {
            case 4: {
                if (record_) {
                    std::vector<Formula> ctx;
                    context_of(fo, id, ctx);
                    emit("∃R", join({&c.theta_bang, &ctx}), n.f, n.f, n.witness, 1);
                }
                return walk(fo, n.c1, k);
            }
            case 3: {
                if (record_) {
                    std::vector<Formula> ctx;
                    context_of(fo, id, ctx);
                    emit_contractions(c.theta_bang, ctx, n.f);
                    emit("⊗R", join({&c.theta_bang, &c.theta_bang, &ctx}), n.f, n.f, {}, 2);
                }
                int second = n.c2;
                return walk(fo, n.c1, [&] { return walk(fo, second, k); });
            }
            case 0: {
                if (record_) {
                    std::vector<Formula> none;
                    Formula src;
                    if (n.match >= 0) {
                        src = (*fo.avail)[n.match];
                    } else {
                        std::size_t ti = static_cast<std::size_t>(-2 - n.match);
                        src = c.theta[ti];
                        emit_use(c, ti, none, n.f);
                    }
                    std::vector<Formula> one{src};
                    emit_weakenings(c.theta_bang, one, n.f);
                    emit("ax", one, n.f, {}, {}, 0);
                }
                return k();
            }
            case 1: {
                Ctx c2;
                c2.theta = c.theta;
                c2.theta_bang = c.theta_bang;
                for (int j : n.assigned) c2.stable.push_back((*fo.avail)[j]);
                c2.goal = n.f;
                return prove(c2, k);
            }
            case 2: {
                emit("!-promotion", c.theta_bang, n.f, n.f, {}, 1);
                Ctx c2;
                c2.theta = c.theta;
                c2.theta_bang = c.theta_bang;
                c2.goal = n.f->a;
                return prove(c2, k);
            }
        }
        return false;
    }

    Logic logic_;
    long budget_;
    bool record_;
    long decides_ = 0;
    int uses_left_ = 0;
    bool use_blocked_ = false;
    SymbolSet root_free_;

    std::vector<int> parent_;
    std::vector<Symbol> binding_;
    std::vector<int> mstamp_;
    std::vector<int> estamp_;
    int clock_ = 1;
    std::vector<TrailEntry> trail_;
    std::vector<LogEntry> log_;

    std::unordered_set<std::string> failed_;
    std::unordered_map<std::string, int> failed_uses_;
};

ProofTree Engine::build_tree() {
    // final names: unbound metavariables share one fresh variable, and
    // eigenvariables get readable fresh names
    SymbolSet used = root_free_;
    SymbolMap names;
    Symbol fresh;
    auto fresh_var = [&]() {
        if (fresh.empty()) {
            fresh = fresh_symbol("w", used);
            used.insert(fresh);
        }
        return fresh;
    };
    int next_eigen = 1;
    std::map<int, Symbol> eigen_names;
    auto eigen_name = [&](Symbol e) {
        auto it = eigen_names.find(e.index());
        if (it != eigen_names.end()) return it->second;
        Symbol z = fresh_symbol("z", used, next_eigen);
        next_eigen = std::stoi(z.str().substr(1)) + 1;
        used.insert(z);
        eigen_names[e.index()] = z;
        return z;
    };
    std::function<void(const Formula&)> scan = [&](const Formula& f) {
        if (f->op == Op::Atom) {
            for (Symbol x : f->args) {
                if (names.count(x)) continue;
                if (x.is_meta()) {
                    Symbol r = resolve(x);
                    if (r.is_meta()) r = fresh_var();
                    if (r.is_eigen()) r = eigen_name(r);
                    names[x] = r;
                } else if (x.is_eigen()) {
                    names[x] = eigen_name(x);
                }
            }
            return;
        }
        if (f->a) scan(f->a);
        if (f->b) scan(f->b);
    };
    auto name_of = [&](Symbol x) -> Symbol {
        if (x.empty()) return x;
        auto it = names.find(x);
        if (it != names.end()) return it->second;
        Symbol r = x;
        if (x.is_meta()) {
            r = resolve(x);
            if (r.is_meta()) r = fresh_var();
        }
        if (r.is_eigen()) r = eigen_name(r);
        names[x] = r;
        return r;
    };
    // eigenvariables are named in order of introduction
    for (const LogEntry& e : log_)
        if (e.witness.is_eigen()) name_of(e.witness);
    for (const LogEntry& e : log_) {
        for (const Formula& f : e.ante) scan(f);
        scan(e.succ);
        name_of(e.witness);
    }
    std::size_t pos = 0;
    std::function<ProofTree()> build = [&]() -> ProofTree {
        const LogEntry& e = log_.at(pos++);
        ProofTree t;
        t.rule = e.rule;
        for (const Formula& f : e.ante) t.conclusion.ante.push_back(apply_subst(f, names));
        t.conclusion.succ = apply_subst(e.succ, names);
        if (e.principal) t.principal = apply_subst(e.principal, names);
        t.witness = name_of(e.witness);
        for (int i = 0; i < e.arity; ++i) t.premises.push_back(build());
        return t;
    };
    return build();
}

// Upper bound on the number of uses of stored formulas, from a counting row
// in which every stored formula moves the balance the same strict way.
std::optional<int> use_bound(const Sequent& s) {
    Sequent n = invertible_normalize(s);
    std::vector<Formula> theta, linear;
    for (const Formula& f : n.ante) (f->op == Op::Bang ? theta : linear).push_back(f);
    for (const Formula& f : theta)
        if (has_bang(f->a)) return std::nullopt;
    for (const Formula& f : linear)
        if (has_bang(f)) return std::nullopt;
    if (has_bang(n.succ)) return std::nullopt;
    if (theta.empty()) return 0;
    std::map<Symbol, int> base;
    for (const Formula& f : linear) count_atoms(f, 1, base, nullptr);
    count_atoms(n.succ, -1, base, nullptr);
    std::vector<std::map<Symbol, int>> contrib;
    std::set<Symbol> rows;
    for (const auto& [p, v] : base) rows.insert(p);
    for (const Formula& f : theta) {
        std::map<Symbol, int> c;
        count_atoms(f->a, 1, c, nullptr);
        for (const auto& [p, v] : c) rows.insert(p);
        contrib.push_back(std::move(c));
    }
    std::optional<int> best;
    auto consider = [&](int b, const std::vector<int>& cs) {
        bool pos = std::all_of(cs.begin(), cs.end(), [](int x) { return x > 0; });
        bool neg = std::all_of(cs.begin(), cs.end(), [](int x) { return x < 0; });
        if (!pos && !neg) return;
        int step = std::abs(*std::min_element(cs.begin(), cs.end(), [](int x, int y) {
            return std::abs(x) < std::abs(y);
        }));
        // need b + sum(u_i c_i) = 0
        int need = pos ? -b : b;
        int bound = need < 0 ? -1 : need / step;
        if (!best || bound < *best) best = bound;
    };
    int total_base = 0;
    std::vector<int> total(theta.size(), 0);
    for (Symbol p : rows) {
        int b = base.count(p) ? base.at(p) : 0;
        total_base += b;
        std::vector<int> cs;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            int v = contrib[i].count(p) ? contrib[i].at(p) : 0;
            cs.push_back(v);
            total[i] += v;
        }
        consider(b, cs);
    }
    consider(total_base, total);
    return best;
}

}  // namespace

Sequent invertible_normalize(const Sequent& s) {
    SymbolSet used = free_vars(s);
    int next = 1;
    auto fresh = [&]() {
        Symbol z = fresh_symbol("z", used, next);
        used.insert(z);
        next = std::stoi(z.str().substr(1)) + 1;
        return z;
    };
    Sequent out;
    Formula goal = s.succ;
    std::vector<Formula> todo = s.ante;
    for (;;) {
        if (goal->op == Op::Lolli) {
            todo.push_back(goal->a);
            goal = goal->b;
        } else if (goal->op == Op::Forall) {
            goal = inst(goal->a, goal->sym, fresh());
        } else {
            break;
        }
    }
    std::size_t i = 0;
    while (i < todo.size()) {
        Formula f = todo[i];
        if (f->op == Op::Tensor) {
            todo.erase(todo.begin() + static_cast<long>(i));
            todo.insert(todo.begin() + static_cast<long>(i), {f->a, f->b});
        } else if (f->op == Op::Exists) {
            todo[i] = inst(f->a, f->sym, fresh());
        } else {
            ++i;
        }
    }
    out.ante = std::move(todo);
    out.succ = goal;
    return out;
}

Verdict prove_mill1(const Sequent& s, ProveOptions opts) {
    for (const Formula& f : s.ante)
        if (has_bang(f)) throw Error("`!` is outside the MILL1 fragment");
    if (has_bang(s.succ)) throw Error("`!` is outside the MILL1 fragment");
    Engine e(Logic::MILL1, 0, opts.want_proof);
    Verdict v;
    if (e.run(s, 0)) {
        v.kind = Verdict::Derivable;
        if (opts.want_proof) v.proof = e.build_tree();
    }
    v.stats.decides = e.decides();
    return v;
}

Verdict prove_ill1(const Sequent& s, long budget, ProveOptions opts) {
    bool bang = has_bang(s.succ) || std::any_of(s.ante.begin(), s.ante.end(), has_bang);
    if (!bang) return prove_mill1(s, opts);
    std::optional<int> bound = use_bound(s);
    Verdict v;
    long spent = 0;
    for (int d = 0;; ++d) {
        if ((bound && d > *bound) || (opts.max_uses >= 0 && d > opts.max_uses)) {
            v.kind = Verdict::NotDerivable;
            break;
        }
        Engine e(Logic::ILL1, budget - spent, opts.want_proof);
        v.stats.use_bound = d;
        try {
            bool ok = e.run(s, d);
            spent += e.decides();
            if (ok) {
                v.kind = Verdict::Derivable;
                if (opts.want_proof) v.proof = e.build_tree();
                break;
            }
            if (!e.use_blocked()) {
                v.kind = Verdict::NotDerivable;
                break;
            }
        } catch (const BudgetExceeded&) {
            spent = budget;
            v.kind = Verdict::BudgetExhausted;
            break;
        }
    }
    v.stats.decides = spent;
    return v;
}

Verdict prove(const Sequent& s, Logic logic, long budget, ProveOptions opts) {
    return logic == Logic::MILL1 ? prove_mill1(s, opts) : prove_ill1(s, budget, opts);
}

}  // namespace hgl
