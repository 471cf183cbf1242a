#include "doctest.h"
#include "hgl/prover.hpp"

using namespace hgl;

namespace {

Sequent S(const std::string& s) { return parse_sequent(s, {.allow_reserved_binders = true}); }

void expect_proof(const Verdict& v, const Sequent& s) {
    REQUIRE(v.derivable());
    REQUIRE(v.proof);
    std::string why;
    CHECK_MESSAGE(check_proof(*v.proof, s, why), why << "\n" << serialize(*v.proof));
}

}  // namespace

TEST_CASE("mill1 examples") {
    Sequent ex1 = S("p(x0,x1), fa x. (p(x,x1) -o q(x,x2)) |- q(x0,x2)");
    expect_proof(prove_mill1(ex1), ex1);

    Sequent ex2 = S("q(v3,v4), q(v3,v4) -o p(v1,v1) -o p(v3,v4), fa y. p(v1,y), r, r, r "
                    "|- p(v3,v4) * r * r * r");
    expect_proof(prove_mill1(ex2), ex2);

    CHECK(prove_mill1(S("p(x0,x1) |- q(x0,x1)")).kind == Verdict::NotDerivable);
    CHECK(prove_mill1(S("p(x0,x1) |- p(x1,x0)")).kind == Verdict::NotDerivable);

    std::string qq = "q -o q";
    for (int n = 0; n <= 3; ++n) {
        std::string ante = qq;
        for (int i = 0; i < n; ++i) ante += ", " + qq;
        ante += ", " + qq;
        Sequent s = S(ante + " |- q -o q");
        expect_proof(prove_mill1(s), s);
    }
    CHECK_THROWS_AS(prove_mill1(S("!p |- p")), Error);
}

TEST_CASE("quantifier instantiation respects eigenvariables") {
    Sequent a = S("fa x. p(x) |- fa y. p(y)");
    expect_proof(prove_mill1(a), a);
    CHECK_FALSE(prove_mill1(S("ex x. p(x) |- fa y. p(y)")).derivable());
    Sequent b = S("ex x. fa y. r(x,y) |- fa y. ex x. r(x,y)");
    expect_proof(prove_mill1(b), b);
    CHECK_FALSE(prove_mill1(S("fa y. ex x. r(x,y) |- ex x. fa y. r(x,y)")).derivable());
    Sequent c = S("fa x. p(x) |- ex y. p(y)");
    expect_proof(prove_mill1(c), c);
    Sequent d = S("p(a) * q(b) |- ex x. ex y. q(y) * p(x)");
    expect_proof(prove_mill1(d), d);
}

TEST_CASE("higher-order antecedents") {
    Sequent s = S("(p -o q) -o r, q |- r");
    CHECK_FALSE(prove_mill1(s).derivable());
    Sequent t = S("(p -o q) -o r, p -o q |- r");
    expect_proof(prove_mill1(t), t);
    Sequent u = S("(p -o p) -o r |- r");
    expect_proof(prove_mill1(u), u);
}

TEST_CASE("ill1") {
    Sequent a = S("!p |- p");
    expect_proof(prove_ill1(a), a);
    Sequent b = S("!p |- p * p");
    expect_proof(prove_ill1(b), b);
    Sequent c = S("!(p -o p * p), p |- p * p * p * p");
    expect_proof(prove_ill1(c), c);
    Sequent d = S("!(fa x. (q(x) -o r(x))), q(a), q(b) |- r(b) * r(a)");
    expect_proof(prove_ill1(d), d);
    // a counting bound settles underivable cases
    CHECK(prove_ill1(S("!(p -o p * p), p |- q")).kind == Verdict::NotDerivable);
    Sequent e = S("|- !(p -o p)");
    expect_proof(prove_ill1(e), e);
}

TEST_CASE("invertible normalization") {
    Sequent s = invertible_normalize(S("a |- b -o c"));
    CHECK(sequent_alpha_eq(s, S("a, b |- c")));
    Sequent t = invertible_normalize(S("ex x. p(x) * q |- fa y. r(y)"));
    CHECK(sequent_alpha_eq(t, S("p(z2), q |- r(z1)")));
    Sequent n = S("p, q -o r |- r");
    CHECK(sequent_alpha_eq(invertible_normalize(n), n));
}

TEST_CASE("proof checker") {
    Sequent s = S("p, p -o q |- q");
    ProofTree left{"ax", S("p |- p"), {}, nullptr, {}};
    ProofTree right{"ax", S("q |- q"), {}, nullptr, {}};
    ProofTree t{"⊸L", s, {left, right}, parse_formula("p -o q"), {}};
    CHECK(check_proof(t, s));
    // ∀R with a variable that is free below
    Sequent bad = S("p(x) |- fa y. p(y)");
    ProofTree ax{"ax", S("p(x) |- p(x)"), {}, nullptr, {}};
    ProofTree r{"∀R", bad, {ax}, nullptr, Symbol("x")};
    CHECK_FALSE(check_proof(r, bad));
}

TEST_CASE("determinism") {
    Sequent ex2 = S("q(v3,v4), q(v3,v4) -o p(v1,v1) -o p(v3,v4), fa y. p(v1,y), r, r, r "
                    "|- p(v3,v4) * r * r * r");
    CHECK(serialize(*prove_mill1(ex2).proof) == serialize(*prove_mill1(ex2).proof));
}
