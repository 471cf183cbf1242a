#include "doctest.h"
#include "hgl/suites.hpp"

using namespace hgl;

namespace {

void require_all(const std::vector<SuiteReport>& reports) {
    for (const SuiteReport& r : reports) {
        INFO(r.summary());
        for (const auto& n : r.notes) INFO(n);
        CHECK(r.cases > 0);
        CHECK(r.ok());
    }
}

}  // namespace

TEST_CASE("case generators are deterministic") {
    auto a = case_rng(5, 3), b = case_rng(5, 3), c = case_rng(5, 4);
    CHECK(a() == b());
    CHECK(case_rng(5, 3)() != c());
    auto r1 = case_rng(9, 0), r2 = case_rng(9, 0);
    CHECK(render(random_derivable_sequent(r1, 3)) == render(random_derivable_sequent(r2, 3)));
}

TEST_CASE("generated sequents are derivable") {
    for (long i = 0; i < 30; ++i) {
        auto rng = case_rng(2, i);
        Sequent s = random_derivable_sequent(rng, 3);
        INFO(render(s));
        CHECK(prove_mill1(s).derivable());
        FormulaShape qf;
        qf.quantifiers = false;
        Sequent t = random_derivable_sequent(rng, 3, qf);
        CHECK(render(t).find("fa") == std::string::npos);
        CHECK(render(t).find("ex") == std::string::npos);
        CHECK(prove_mill1(t).derivable());
    }
}

TEST_CASE("algebra laws, small run") { require_all(algebra_suite(100, 1)); }

TEST_CASE("logic properties, small run") { require_all(logic_suite(20, 1)); }

TEST_CASE("derivation oracle, small run") {
    SuiteReport r = derivation_oracle_suite(20, 7);
    INFO(r.summary());
    CHECK(r.cases == 20);
    CHECK(r.ok());
    CHECK(r.unknown == 0);
}

TEST_CASE("grammars from toy systems agree with enumeration") {
    for (const HtSystem& sys : {toy_string_system(), toy_tree_system()}) {
        for (const SuiteReport& r : {grammar_agreement("ill1", sys, ill1_grammar_of(sys), 4, 6),
                                     grammar_agreement("mill1", sys, mill1_grammar_of(sys, 1), 4, 6)}) {
            INFO(r.summary());
            CHECK(r.cases > 0);
            CHECK(r.ok());
        }
    }
}

TEST_CASE("grammar converters") {
    SuiteReport r = converter_suite();
    INFO(r.summary());
    CHECK(r.ok());
}

TEST_CASE("hypergraph language models, small run") { require_all(semantics_suite(3, 5, 4)); }
