// Tests for the program frontend: directives, clause parsing, infix body
// operators, error locations, program point naming, and print round trips.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "absdist/program.hpp"
#include "absdist/term.hpp"

#include <stdexcept>

using namespace absdist;

namespace {

const char* kQuicksortSrc = R"(:- module(quicksort, [quicksort/2], [assertions]).
:- use_module(partition, [partition/4]).

:- entry quicksort(Xs, Ys) : (ground(Xs), var(Ys)).

:- trust success partition(Xs, X, L, R) : (ground(Xs), ground(X))
        => (ground(L), ground(R)).

quicksort(Xs, Ys) :-
    qsort(Xs, Ys, []).

qsort([], Ys, Ys).
qsort([X|Xs], Ys, TailYs) :-
    partition(Xs, X, L, R),
    qsort(R, R2, TailYs),
    qsort(L, Ys, [X|R2]).
)";

}  // namespace

TEST_CASE("full module source parses into the expected structure") {
    Program p = parse_program(kQuicksortSrc);
    CHECK(p.module_name == "quicksort");
    REQUIRE(p.imports.size() == 1);
    CHECK(p.imports[0] == std::pair<std::string, int>("partition", 4));

    REQUIRE(p.entries.size() == 1);
    CHECK(p.entries[0].head.name == "quicksort");
    CHECK(p.entries[0].head.arity() == 2);
    REQUIRE(p.entries[0].props.size() == 2);
    CHECK(print_term(p.entries[0].props[0]) == "ground(Xs)");
    CHECK(print_term(p.entries[0].props[1]) == "var(Ys)");

    REQUIRE(p.trusts.size() == 1);
    CHECK(p.trusts[0].head.name == "partition");
    CHECK(p.trusts[0].call_props.size() == 2);
    CHECK(p.trusts[0].success_props.size() == 2);

    REQUIRE(p.preds.size() == 2);
    CHECK(p.preds[0].name == "quicksort");
    CHECK(p.preds[0].arity == 2);
    REQUIRE(p.preds[0].clauses.size() == 1);
    CHECK(p.preds[0].clauses[0].body.size() == 1);
    CHECK(p.preds[1].name == "qsort");
    REQUIRE(p.preds[1].clauses.size() == 2);
    CHECK(p.preds[1].clauses[0].body.empty());
    CHECK(p.preds[1].clauses[1].body.size() == 3);
}

TEST_CASE("body clause indices skip facts") {
    Program p = parse_program(kQuicksortSrc);
    CHECK(p.preds[0].clauses[0].body_index == 1);
    CHECK(p.preds[1].clauses[0].body_index == 0);   // fact
    CHECK(p.preds[1].clauses[1].body_index == 1);   // first body clause

    Program q = parse_program(
        "p(a).\n"
        "p(X) :- q(X).\n"
        "p(b).\n"
        "p(X) :- r(X).\n"
        "q(a).\nr(a).\n");
    const Predicate* pp = q.find_pred("p", 1);
    REQUIRE(pp != nullptr);
    REQUIRE(pp->clauses.size() == 4);
    CHECK(pp->clauses[0].body_index == 0);
    CHECK(pp->clauses[1].body_index == 1);
    CHECK(pp->clauses[2].body_index == 0);
    CHECK(pp->clauses[3].body_index == 2);
}

TEST_CASE("predicate lookup helpers") {
    Program p = parse_program(kQuicksortSrc);
    CHECK(p.find_pred("qsort", 3) != nullptr);
    CHECK(p.find_pred("qsort", 2) == nullptr);
    CHECK(p.find_pred("partition", 4) == nullptr);   // imported, not defined
    CHECK(p.is_imported("partition", 4));
    CHECK_FALSE(p.is_imported("partition", 3));
    CHECK_FALSE(p.is_imported("qsort", 3));
    CHECK(p.find_trust("partition", 4) != nullptr);
    CHECK(p.find_trust("qsort", 3) == nullptr);
}

TEST_CASE("infix comparison and arithmetic operators in bodies") {
    Program p = parse_program(
        "f(X, Y) :- X =< 3, Y is X + 1, Y > 0, X = Y.\n");
    const Clause& cl = p.preds[0].clauses[0];
    REQUIRE(cl.body.size() == 4);
    CHECK(print_term(cl.body[0]) == "=<(X,3)");
    CHECK(print_term(cl.body[1]) == "is(Y,+(X,1))");
    CHECK(print_term(cl.body[2]) == ">(Y,0)");
    CHECK(print_term(cl.body[3]) == "=(X,Y)");
}

TEST_CASE("cut parses as a body literal") {
    Program p = parse_program("f(X) :- !, g(X).\ng(a).\n");
    REQUIRE(p.preds[0].clauses[0].body.size() == 2);
    CHECK(p.preds[0].clauses[0].body[0] == Term::constant("!"));
}

TEST_CASE("comments and whitespace are skipped") {
    Program p = parse_program(
        "% leading comment\n"
        "f(a).   % trailing comment\n"
        "\n"
        "f(b).\n");
    REQUIRE(p.preds.size() == 1);
    CHECK(p.preds[0].clauses.size() == 2);
}

TEST_CASE("parse errors carry line and column positions") {
    try {
        parse_program("f(a).\ng(X :- h(X).\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 0);
        CHECK(std::string(e.what()).rfind("line 2, column ", 0) == 0);
    }
}

TEST_CASE("clause heads must be atoms or compounds") {
    CHECK_THROWS_AS(parse_program("X :- f(X).\n"), ParseError);
    CHECK_THROWS_AS(parse_program("3 :- f(a).\n"), ParseError);
}

TEST_CASE("duplicate entry declarations are rejected") {
    CHECK_THROWS_WITH_AS(
        parse_program(":- entry f(X) : (ground(X)).\n"
                      ":- entry f(Y) : (var(Y)).\n"
                      "f(a).\n"),
        doctest::Contains("duplicate entry"), ParseError);
}

TEST_CASE("entries must reference a defined predicate") {
    CHECK_THROWS_WITH_AS(
        parse_program(":- entry f(X) : (ground(X)).\ng(a).\n"),
        doctest::Contains("undefined predicate"), ParseError);
}

TEST_CASE("program points list the entry pseudo-point first") {
    Program p = parse_program(kQuicksortSrc);
    std::vector<std::string> pts = program_points(p);
    REQUIRE(pts.size() == 5);
    CHECK(pts[0] == "quicksort/2/0");
    CHECK(pts[1] == "quicksort/2/1/1");
    CHECK(pts[2] == "qsort/3/1/1");
    CHECK(pts[3] == "qsort/3/1/2");
    CHECK(pts[4] == "qsort/3/1/3");
}

TEST_CASE("program point id helpers") {
    Program p = parse_program(kQuicksortSrc);
    CHECK(entry_point_id(p.entries[0]) == "quicksort/2/0");
    CHECK(entry_point_id("qsort", 3) == "qsort/3/0");
    CHECK(program_point_id("qsort", 3, 1, 2) == "qsort/3/1/2");
}

TEST_CASE("printing and reparsing is the identity") {
    Program p = parse_program(kQuicksortSrc);
    Program q = parse_program(print_program(p));
    CHECK(p == q);

    Program r = parse_program(
        "f(X, Y) :- X =< 3, Y is X + 1, !, g([X|Y], -2).\n"
        "g(_A, _B).\n");
    CHECK(r == parse_program(print_program(r)));
}

TEST_CASE("builtin literal table") {
    CHECK(is_builtin_literal("true", 0));
    CHECK(is_builtin_literal("!", 0));
    CHECK(is_builtin_literal("fail", 0));
    CHECK(is_builtin_literal("ground", 1));
    CHECK(is_builtin_literal("var", 1));
    CHECK(is_builtin_literal("=", 2));
    CHECK(is_builtin_literal("is", 2));
    CHECK(is_builtin_literal("=<", 2));
    CHECK(is_builtin_literal("=:=", 2));
    CHECK(is_builtin_literal("=\\=", 2));
    CHECK_FALSE(is_builtin_literal("member", 2));
    CHECK_FALSE(is_builtin_literal("ground", 2));
    CHECK_FALSE(is_builtin_literal("=", 3));
    CHECK_FALSE(is_builtin_literal("qsort", 3));
}
