#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "absdist/term.hpp"

using namespace absdist;

TEST_CASE("reader accepts the standard syntax") {
    Term t = parse_term("f(a, g(X), [1,2|T])");
    CHECK(t.is_compound());
    CHECK(t.name == "f");
    CHECK(t.arity() == 3);
    CHECK(t.args[0] == Term::constant("a"));
    CHECK(t.args[1] == Term::compound("g", {Term::var("X")}));
    CHECK(t.args[2] ==
          Term::cons(Term::constant("1"), Term::cons(Term::constant("2"), Term::var("T"))));
}

TEST_CASE("reader handles atoms, vars, numbers, lists") {
    CHECK(parse_term("foo") == Term::constant("foo"));
    CHECK(parse_term("X") == Term::var("X"));
    CHECK(parse_term("_G12") == Term::var("_G12"));
    CHECK(parse_term("-7") == Term::constant("-7"));
    CHECK(parse_term("[]") == Term::nil());
    CHECK(parse_term("[a]") == Term::list({Term::constant("a")}));
    CHECK(parse_term("[a,b]") == Term::list({Term::constant("a"), Term::constant("b")}));
}

TEST_CASE("reader accepts symbolic functors in functional notation") {
    Term eq = parse_term("=(X, f(Y))");
    CHECK(eq.name == "=");
    CHECK(eq.arity() == 2);
    Term cmp = parse_term("=<(X, 3)");
    CHECK(cmp.name == "=<");
    Term arith = parse_term("is(X, -(Y, 1))");
    CHECK(arith.args[1].name == "-");
    CHECK(parse_term("!") == Term::constant("!"));
}

TEST_CASE("reader rejects malformed input") {
    CHECK_THROWS(parse_term(""));
    CHECK_THROWS(parse_term("f("));
    CHECK_THROWS(parse_term("f(a))"));
    CHECK_THROWS(parse_term("[a,"));
    CHECK_THROWS(parse_term("f(a) extra"));
}

TEST_CASE("print and parse round-trip") {
    for (const char* s : {"f(a,g(X),h(Y,Z))", "[1,2,3]", "[a|T]", "[]", "x", "V",
                          "=(U,[1,2])", "is(X,+(A,1))", "node(leaf(1),node(leaf(2),leaf(3)))"}) {
        Term t = parse_term(s);
        CHECK(parse_term(print_term(t)) == t);
    }
    CHECK(print_term(parse_term("[1,2,3]")) == "[1,2,3]");
    CHECK(print_term(parse_term("[a|T]")) == "[a|T]");
}

TEST_CASE("term_vars lists first occurrences in order") {
    Term t = parse_term("f(X, g(Y, X), Z)");
    CHECK(term_vars(t) == std::vector<std::string>{"X", "Y", "Z"});
    CHECK(term_vars(parse_term("a")).empty());
}

TEST_CASE("groundness and size") {
    CHECK(parse_term("f(a,[1,2])").is_ground());
    CHECK(!parse_term("f(a,X)").is_ground());
    CHECK(term_size(parse_term("a")) == 1);
    CHECK(term_size(parse_term("X")) == 0);
    // f, a, g, b -> 4 symbols; the variable contributes nothing.
    CHECK(term_size(parse_term("f(a,g(b),X)")) == 4);
    // [1,2] = .(1,.(2,[])) -> 5 symbols
    CHECK(term_size(parse_term("[1,2]")) == 5);
}

TEST_CASE("term distance base cases") {
    CHECK(d_term(parse_term("a"), parse_term("a")) == 0.0);
    CHECK(d_term(parse_term("a"), parse_term("b")) == 1.0);
    CHECK(d_term(parse_term("f(a)"), parse_term("g(a)")) == 1.0);
    CHECK(d_term(parse_term("f(a)"), parse_term("f(a,b)")) == 1.0);  // arity mismatch
}

TEST_CASE("term distance recursion: p * mean of child distances") {
    // d(f(a,b), f(a,c)) = 0.5 * (0 + 1)/2 = 0.25
    CHECK(d_term(parse_term("f(a,b)"), parse_term("f(a,c)")) == doctest::Approx(0.25));
    // d(f(g(a)), f(g(b))) = 0.5 * 0.5 * 1 = 0.25
    CHECK(d_term(parse_term("f(g(a))"), parse_term("f(g(b))")) == doctest::Approx(0.25));
    // Deeper disagreement costs less: d at depth 3 = 0.5^3
    CHECK(d_term(parse_term("f(f(f(a)))"), parse_term("f(f(f(b)))")) == doctest::Approx(0.125));
    // Alternative contraction factor
    CHECK(d_term(parse_term("f(a)"), parse_term("f(b)"), {0.25}) == doctest::Approx(0.25));
}

TEST_CASE("term distance is a metric on a small sample") {
    std::vector<Term> sample = {parse_term("a"), parse_term("f(a)"), parse_term("f(b)"),
                                parse_term("f(a,b)"), parse_term("g(f(a),b)"),
                                parse_term("[1,2]"), parse_term("[2,1]")};
    for (const Term& x : sample)
        for (const Term& y : sample) {
            double dxy = d_term(x, y);
            CHECK(dxy == doctest::Approx(d_term(y, x)));
            CHECK((dxy == 0.0) == (x == y));
            CHECK(dxy <= 1.0);
            for (const Term& z : sample)
                CHECK(dxy <= d_term(x, z) + d_term(z, y) + 1e-12);
        }
}

TEST_CASE("term distance rejects bad input") {
    CHECK_THROWS(d_term(parse_term("X"), parse_term("a")));
    CHECK_THROWS(d_term(parse_term("f(X)"), parse_term("f(a)")));
    CHECK_THROWS(d_term(parse_term("a"), parse_term("a"), {0.0}));
    CHECK_THROWS(d_term(parse_term("a"), parse_term("a"), {1.0}));
}

TEST_CASE("hausdorff distance on term sets") {
    std::set<Term> a = {parse_term("f(a)"), parse_term("f(b)")};
    std::set<Term> b = {parse_term("f(a)")};
    // Directed a->b: f(b) must travel to f(a): 0.5. Directed b->a: 0.
    CHECK(hausdorff_terms(a, b) == doctest::Approx(0.5));
    CHECK(hausdorff_terms(b, a) == doctest::Approx(0.5));
    CHECK(hausdorff_terms(a, a) == 0.0);
    std::set<Term> c = {parse_term("g(a)")};
    CHECK(hausdorff_terms(a, c) == 1.0);
    CHECK_THROWS(hausdorff_terms({}, a));
}
