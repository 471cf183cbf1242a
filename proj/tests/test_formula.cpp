#include "doctest.h"
#include "hgl/formula.hpp"

using namespace hgl;

namespace {
Formula F(const std::string& s) { return parse_formula(s, {.allow_reserved_binders = true}); }
}  // namespace

TEST_CASE("free variables") {
    CHECK(free_vars(F("fa x. (p(x,s) -o q(x,t))")) == SymbolSet{"s", "t"});
    CHECK(free_vars(F("p(x,y)")) == SymbolSet{"x", "y"});
    CHECK(free_vars(F("ex x. p(x,x)")).empty());
}

TEST_CASE("substitution") {
    CHECK(alpha_eq(apply_subst(F("p(s,t)"), {{"s", "x0"}, {"t", "x1"}}), F("p(x0,x1)")));
    Formula g = apply_subst(F("fa x. p(x,s)"), {{"s", "x"}});
    CHECK(render(g) == "fa x'. p(x',x)");
    Formula a = F("ex y. p(y,z) * q(z)");
    CHECK(apply_subst(a, {{"z", "z"}}) == a);
    CHECK(alpha_eq(apply_subst(a, {{"y", "w"}}), a));
}

TEST_CASE("circ") {
    Formula f = F("ex x. (A(x,y,y) * fa z. B(z,y,t))");
    CHECK(render(circ(f), true) == "∃x. A(x,ξ1,ξ2) ⊗ (∀z. B(z,ξ3,ξ4))");
    Formula closed = F("ex x. p(x)");
    CHECK(alpha_eq(circ(closed), closed));
    CHECK(render(circ(F("p(y,y)"))) == "p(ξ1,ξ2)");
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_eq(F("fa x. p(x)"), F("fa y. p(y)")));
    CHECK_FALSE(alpha_eq(F("p(x)"), F("p(y)")));
    CHECK_FALSE(alpha_eq(F("fa x. fa y. p(x,y)"), F("fa x. fa y. p(y,x)")));
}

TEST_CASE("parsing and rendering") {
    Formula f = parse_formula("fa x. (p(x,s) -o q(x,t))");
    REQUIRE(f->op == Op::Forall);
    CHECK(f->a->op == Op::Lolli);
    Formula g = F("p * q -o r");
    CHECK(g->op == Op::Lolli);
    CHECK(g->a->op == Op::Tensor);
    CHECK(F("a -o b -o c")->b->op == Op::Lolli);
    CHECK(F("a * b * c")->a->op == Op::Tensor);
    CHECK(F("!a * b")->op == Op::Tensor);
    CHECK(F("nu(x)")->sym == nu_pred());
    CHECK(alpha_eq(F("∀x.(p(x) ⊸ q(x))"), F("fa x. p(x) -o q(x)")));
    for (const char* s : {"fa x. (p(x,s) -o q(x,t))", "(ex x. p(x)) * q -o r", "a * (b * c)",
                          "(a -o b) -o c", "!(a -o b) * !c", "ex x. fa y. p(x,y) * q(y) -o r(x)",
                          "a -o (fa x. p(x)) * b", "!!p"}) {
        Formula p = F(s);
        CHECK_MESSAGE(alpha_eq(F(render(p)), p), s);
        CHECK(alpha_eq(F(render(p, true)), p));
    }
    CHECK_THROWS_AS(parse_formula("fa s. p(s)"), ParseError);
    CHECK_THROWS_AS(parse_formula("p(x) * "), ParseError);
    CHECK_THROWS_AS(parse_formula("p(x) * p(x,y)"), Error);
}

TEST_CASE("sequents") {
    Sequent s = parse_sequent("p(x0,x1), fa x. (p(x,x1) -o q(x,x2)) |- q(x0,x2)");
    CHECK(s.ante.size() == 2);
    Sequent e = parse_sequent("|- p -o p");
    CHECK(e.ante.empty());
    Sequent t = parse_sequent("fa x. (p(x,x1) -o q(x,x2)), p(x0,x1) |- q(x0,x2)");
    CHECK(sequent_alpha_eq(s, t));
}
