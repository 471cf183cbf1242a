#include <algorithm>

#include "hgl/prover.hpp"

namespace hgl {

namespace {

using Keys = std::vector<std::string>;

Keys keys(const std::vector<Formula>& fs) {
    Keys out;
    for (const Formula& f : fs) out.push_back(alpha_key(f));
    std::sort(out.begin(), out.end());
    return out;
}

Keys plus(Keys a, const Keys& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
}

// Removes one copy of f; false if absent.
bool minus(Keys& a, const Formula& f) {
    auto it = std::find(a.begin(), a.end(), alpha_key(f));
    if (it == a.end()) return false;
    a.erase(it);
    return true;
}

Keys with(Keys a, std::initializer_list<Formula> fs) {
    for (const Formula& f : fs) a.push_back(alpha_key(f));
    std::sort(a.begin(), a.end());
    return a;
}

class Checker {
public:
    bool check(const ProofTree& t, std::string& why) {
        if (!node(t, why)) return false;
        for (const ProofTree& p : t.premises)
            if (!check(p, why)) return false;
        return true;
    }

private:
    bool fail(std::string& why, const ProofTree& t, const std::string& msg) {
        why = t.rule + " at '" + render(t.conclusion) + "': " + msg;
        return false;
    }

    bool premises(const ProofTree& t, std::size_t n, std::string& why) {
        if (t.premises.size() != n) return fail(why, t, "wrong number of premises");
        return true;
    }

    bool node(const ProofTree& t, std::string& why) {
        const Sequent& s = t.conclusion;
        if (!s.succ) return fail(why, t, "missing succedent");
        Keys ante = keys(s.ante);
        const Formula& p = t.principal;
        auto prem_ante = [&](std::size_t i) { return keys(t.premises[i].conclusion.ante); };
        auto prem_succ = [&](std::size_t i) { return t.premises[i].conclusion.succ; };
        auto principal_in_ante = [&](Op op, Keys& rest) {
            if (!p || p->op != op) return false;
            rest = ante;
            return minus(rest, p);
        };
        auto eigen_ok = [&](Symbol z) {
            if (z.empty()) return false;
            return !free_vars(s).count(z);
        };
        const std::string& r = t.rule;
        Keys rest;
        if (r == "ax") {
            if (!premises(t, 0, why)) return false;
            if (s.ante.size() != 1 || !alpha_eq(s.ante[0], s.succ)) return fail(why, t, "not an axiom");
            return true;
        }
        if (r == "⊗L") {
            if (!premises(t, 1, why)) return false;
            if (!principal_in_ante(Op::Tensor, rest)) return fail(why, t, "no principal tensor");
            if (prem_ante(0) != with(rest, {p->a, p->b}) || !alpha_eq(prem_succ(0), s.succ))
                return fail(why, t, "premise mismatch");
            return true;
        }
        if (r == "⊗R") {
            if (!premises(t, 2, why)) return false;
            if (s.succ->op != Op::Tensor) return fail(why, t, "succedent is not a tensor");
            if (!alpha_eq(prem_succ(0), s.succ->a) || !alpha_eq(prem_succ(1), s.succ->b))
                return fail(why, t, "premise succedents");
            if (plus(prem_ante(0), prem_ante(1)) != ante) return fail(why, t, "context split");
            return true;
        }
        if (r == "⊸L") {
            if (!premises(t, 2, why)) return false;
            if (!principal_in_ante(Op::Lolli, rest)) return fail(why, t, "no principal implication");
            if (!alpha_eq(prem_succ(0), p->a) || !alpha_eq(prem_succ(1), s.succ))
                return fail(why, t, "premise succedents");
            Keys right = prem_ante(1);
            if (!minus(right, p->b)) return fail(why, t, "right premise lacks B");
            if (plus(prem_ante(0), right) != rest) return fail(why, t, "context split");
            return true;
        }
        if (r == "⊸R") {
            if (!premises(t, 1, why)) return false;
            if (s.succ->op != Op::Lolli) return fail(why, t, "succedent is not an implication");
            if (prem_ante(0) != with(ante, {s.succ->a}) || !alpha_eq(prem_succ(0), s.succ->b))
                return fail(why, t, "premise mismatch");
            return true;
        }
        if (r == "∃L" || r == "∀L") {
            if (!premises(t, 1, why)) return false;
            Op op = r == "∃L" ? Op::Exists : Op::Forall;
            if (!principal_in_ante(op, rest)) return fail(why, t, "no principal quantifier");
            if (t.witness.empty()) return fail(why, t, "missing variable");
            if (op == Op::Exists && !eigen_ok(t.witness)) return fail(why, t, "eigenvariable occurs free");
            Formula a = apply_subst(p->a, {{p->sym, t.witness}});
            if (prem_ante(0) != with(rest, {a}) || !alpha_eq(prem_succ(0), s.succ))
                return fail(why, t, "premise mismatch");
            return true;
        }
        if (r == "∃R" || r == "∀R") {
            if (!premises(t, 1, why)) return false;
            Op op = r == "∃R" ? Op::Exists : Op::Forall;
            if (s.succ->op != op) return fail(why, t, "succedent has the wrong quantifier");
            if (t.witness.empty()) return fail(why, t, "missing variable");
            if (op == Op::Forall && !eigen_ok(t.witness)) return fail(why, t, "eigenvariable occurs free");
            Formula a = apply_subst(s.succ->a, {{s.succ->sym, t.witness}});
            if (prem_ante(0) != ante || !alpha_eq(prem_succ(0), a)) return fail(why, t, "premise mismatch");
            return true;
        }
        if (r == "!-dereliction" || r == "!-contraction" || r == "!-weakening") {
            if (!premises(t, 1, why)) return false;
            if (!principal_in_ante(Op::Bang, rest)) return fail(why, t, "no principal !-formula");
            Keys expect = r == "!-dereliction" ? with(rest, {p->a})
                          : r == "!-contraction" ? with(ante, {p})
                                                 : rest;
            if (prem_ante(0) != expect || !alpha_eq(prem_succ(0), s.succ))
                return fail(why, t, "premise mismatch");
            return true;
        }
        if (r == "!-promotion") {
            if (!premises(t, 1, why)) return false;
            if (s.succ->op != Op::Bang) return fail(why, t, "succedent is not a !-formula");
            for (const Formula& f : s.ante)
                if (f->op != Op::Bang) return fail(why, t, "context is not all !-formulas");
            if (prem_ante(0) != ante || !alpha_eq(prem_succ(0), s.succ->a))
                return fail(why, t, "premise mismatch");
            return true;
        }
        return fail(why, t, "unknown rule");
    }
};

}  // namespace

bool check_proof(const ProofTree& t, const Sequent& s, std::string& why) {
    if (!sequent_alpha_eq(t.conclusion, s)) {
        why = "root conclusion differs from the sequent";
        return false;
    }
    Checker c;
    return c.check(t, why);
}

bool check_proof(const ProofTree& t, const Sequent& s) {
    std::string why;
    return check_proof(t, s, why);
}

namespace {

void serialize_rec(const ProofTree& t, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "(" + t.rule + " \"" + render(t.conclusion) + "\"";
    if (!t.witness.empty()) out += " {witness=" + t.witness.str() + "}";
    for (const ProofTree& p : t.premises) {
        out += "\n";
        serialize_rec(p, depth + 1, out);
    }
    out += ")";
}

}  // namespace

std::string serialize(const ProofTree& t) {
    std::string out;
    serialize_rec(t, 0, out);
    return out + "\n";
}

}  // namespace hgl
