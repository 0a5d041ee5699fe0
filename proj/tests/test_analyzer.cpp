// Tests for the AND-OR graph construction: golden node tables for the
// quicksort module with and without the trusted partition, multi-variant
// expansion, JSON round trips, and the depth-bounded concrete engine used to
// cross-check analysis results.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "absdist/analyzer.hpp"
#include "absdist/sld.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace absdist;

namespace {

std::string data_file(const std::string& rel) {
    const char* dir = std::getenv("ABSDIST_TEST_DATA");
    REQUIRE(dir != nullptr);
    std::ifstream in(std::string(dir) + "/" + rel);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> sorted_renderings(const AndOrGraph& g) {
    std::vector<std::string> rows;
    for (const OrNode& n : g.nodes)
        rows.push_back(canonical_node_rendering(n));
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

TEST_CASE("groundness analysis of quicksort with trusted partition") {
    Program p = parse_program(data_file("golden/quicksort.pl"));
    AndOrGraph g = analyze(p, {Domain::Gr, std::nullopt, ""});
    CHECK(g.domain == Domain::Gr);
    CHECK(g.entry_pp == "quicksort/2/0");
    CHECK(g.root_id == 1);
    CHECK(g.node(1).pp == "quicksort/2/0");
    REQUIRE(g.nodes.size() == 5);

    std::vector<std::string> expect = {
        "qsort/3/1/1 <partition(A,B,C,D), {A/g,B/g,C/ng,D/ng}, {A/g,B/g,C/g,D/g}>",
        "qsort/3/1/2 <qsort(A,B,C), {A/g,B/ng,C/g}, {A/g,B/g,C/g}>",
        "qsort/3/1/3 <qsort(A,B,[C|D]), {A/g,B/ng,C/g,D/g}, {A/g,B/g,C/g,D/g}>",
        "quicksort/2/0 <quicksort(A,B), {A/g,B/ng}, {A/g,B/g}>",
        "quicksort/2/1/1 <qsort(A,B,[]), {A/g,B/ng}, {A/g,B/g}>",
    };
    CHECK(sorted_renderings(g) == expect);
}

TEST_CASE("without the trust the analysis loses groundness and gains variants") {
    Program p = parse_program(data_file("golden/quicksort_notrust.pl"));
    AndOrGraph g = analyze(p, {Domain::Gr, std::nullopt, ""});
    REQUIRE(g.nodes.size() == 8);

    std::vector<std::string> expect = {
        "qsort/3/1/1 <partition(A,B,C,D), {A/any,B/any,C/ng,D/ng}, "
        "{A/any,B/any,C/any,D/any}>",
        "qsort/3/1/1 <partition(A,B,C,D), {A/g,B/g,C/ng,D/ng}, {A/g,B/g,C/any,D/any}>",
        "qsort/3/1/2 <qsort(A,B,C), {A/any,B/ng,C/any}, {A/any,B/any,C/any}>",
        "qsort/3/1/2 <qsort(A,B,C), {A/any,B/ng,C/g}, {A/any,B/any,C/g}>",
        "qsort/3/1/3 <qsort(A,B,[C|D]), {A/any,B/ng,C/any,D/any}, "
        "{A/any,B/any,C/any,D/any}>",
        "qsort/3/1/3 <qsort(A,B,[C|D]), {A/any,B/ng,C/g,D/any}, "
        "{A/any,B/any,C/g,D/any}>",
        "quicksort/2/0 <quicksort(A,B), {A/g,B/ng}, {A/g,B/any}>",
        "quicksort/2/1/1 <qsort(A,B,[]), {A/g,B/ng}, {A/g,B/any}>",
    };
    CHECK(sorted_renderings(g) == expect);

    // Two call variants of qsort/3 reach the same program points.
    auto count_pp = [&](const char* pp) {
        return std::count_if(g.nodes.begin(), g.nodes.end(),
                             [&](const OrNode& n) { return n.pp == pp; });
    };
    CHECK(count_pp("qsort/3/1/1") == 2);
    CHECK(count_pp("qsort/3/1/2") == 2);
    CHECK(count_pp("qsort/3/1/3") == 2);
}

TEST_CASE("sharing analysis of quicksort with trusted partition") {
    Program p = parse_program(data_file("golden/quicksort.pl"));
    AndOrGraph g = analyze(p, {Domain::Share, std::nullopt, ""});
    REQUIRE(g.nodes.size() == 5);

    std::vector<std::string> expect = {
        "qsort/3/1/1 <partition(A,B,C,D), {{C},{D}}, {}>",
        "qsort/3/1/2 <qsort(A,B,C), {{B}}, {}>",
        "qsort/3/1/3 <qsort(A,B,[C|D]), {{B}}, {}>",
        "quicksort/2/0 <quicksort(A,B), {{B}}, {}>",
        "quicksort/2/1/1 <qsort(A,B,[]), {{B}}, {}>",
    };
    CHECK(sorted_renderings(g) == expect);
}

TEST_CASE("widening records its threshold and coarsens the result") {
    Program p = parse_program(data_file("golden/quicksort_notrust.pl"));
    AndOrGraph plain = analyze(p, {Domain::Share, std::nullopt, ""});
    AndOrGraph wide = analyze(p, {Domain::Share, 1, ""});
    CHECK_FALSE(plain.widen_threshold.has_value());
    REQUIRE(wide.widen_threshold.has_value());
    CHECK(*wide.widen_threshold == 1);
    // Same shape, less precise node values somewhere.
    CHECK(plain.nodes.size() == wide.nodes.size());
    CHECK(sorted_renderings(plain) != sorted_renderings(wide));
    // Widened calls stay above the unwidened ones at the shared entry.
    CHECK(ab_leq(plain.node(1).call, wide.node(1).call));
}

TEST_CASE("trusted calls are leaves") {
    Program p = parse_program(data_file("golden/quicksort.pl"));
    AndOrGraph g = analyze(p, {Domain::Gr, std::nullopt, ""});
    for (const OrNode& n : g.nodes) {
        if (n.pp != "qsort/3/1/1") continue;
        CHECK(n.variant.empty());
        CHECK(g.children_of(n.id).empty());
    }
    // The recursive qsort nodes do expand a variant.
    bool some_variant = false;
    for (const OrNode& n : g.nodes)
        if (!n.variant.empty()) {
            some_variant = true;
            CHECK_FALSE(g.children_of(n.id).empty());
        }
    CHECK(some_variant);
}

TEST_CASE("graph JSON round trip") {
    Program p = parse_program(data_file("golden/quicksort_notrust.pl"));
    for (Domain d : {Domain::Gr, Domain::Share}) {
        AndOrGraph g = analyze(p, {d, std::nullopt, ""});
        AndOrGraph h = graph_from_json(graph_to_json(g));
        CHECK(h.domain == g.domain);
        CHECK(h.entry_pp == g.entry_pp);
        REQUIRE(h.nodes.size() == g.nodes.size());
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            CHECK(h.nodes[i].id == g.nodes[i].id);
            CHECK(h.nodes[i].pp == g.nodes[i].pp);
            CHECK(canonical_node_rendering(h.nodes[i]) ==
                  canonical_node_rendering(g.nodes[i]));
        }
        CHECK(h.children == g.children);
    }
}

TEST_CASE("unreachable literals appear as bottom nodes") {
    Program p = parse_program(
        ":- entry p(X) : (ground(X)).\n"
        "p(X) :- fail, q(X).\n"
        "q(a).\n");
    AndOrGraph g = analyze(p, {Domain::Gr, std::nullopt, ""});
    // Root, the fail literal, and the cut-off q literal.
    REQUIRE(g.nodes.size() == 3);
    CHECK(ab_is_bot(g.node(1).success));
    const OrNode* qn = nullptr;
    for (const OrNode& n : g.nodes)
        if (n.pp == "p/1/1/2") qn = &n;
    REQUIRE(qn != nullptr);
    CHECK(ab_is_bot(qn->call));
    CHECK(ab_is_bot(qn->success));
    CHECK(qn->variant.empty());
    CHECK(canonical_node_rendering(*qn) == "p/1/1/2 <q(A), bot, bot>");
}

TEST_CASE("entry selection by name and arity") {
    Program p = parse_program(
        ":- entry p(X) : (ground(X)).\n"
        ":- entry q(X) : (var(X)).\n"
        "p(a).\n"
        "q(b).\n");
    AndOrGraph g1 = analyze(p, {Domain::Gr, std::nullopt, ""});
    CHECK(g1.entry_pp == "p/1/0");
    AndOrGraph g2 = analyze(p, {Domain::Gr, std::nullopt, "q/1"});
    CHECK(g2.entry_pp == "q/1/0");
    CHECK_THROWS_WITH_AS(analyze(p, {Domain::Gr, std::nullopt, "r/1"}),
                         doctest::Contains("no entry declaration"), AnalysisError);
}

TEST_CASE("calls to undefined predicates are analysis errors") {
    Program p = parse_program(
        ":- entry p(X) : (ground(X)).\n"
        "p(X) :- q(X).\n"
        "p(a).\n");
    CHECK_THROWS_WITH_AS(analyze(p, {Domain::Gr, std::nullopt, ""}),
                         doctest::Contains("undefined predicate"), AnalysisError);
}

TEST_CASE("programs without entries cannot be analyzed") {
    Program p = parse_program("p(a).\n");
    CHECK_THROWS_AS(analyze(p, {Domain::Gr, std::nullopt, ""}), AnalysisError);
}

TEST_CASE("concrete engine finds append answers") {
    Program p = parse_program(
        "append([], Ys, Ys).\n"
        "append([X|Xs], Ys, [X|Zs]) :- append(Xs, Ys, Zs).\n");
    SldResult r = concrete_sld(p, parse_term("append([1,2], [3], Zs)"));
    CHECK_FALSE(r.truncated);
    REQUIRE(r.answers.size() == 1);
    CHECK(r.answers[0].at("Zs") == parse_term("[1,2,3]"));
}

TEST_CASE("concrete engine enumerates member answers in clause order") {
    Program p = parse_program(
        "member(X, [X|_Xs]).\n"
        "member(X, [_Y|Xs]) :- member(X, Xs).\n");
    SldResult r = concrete_sld(p, parse_term("member(X, [a,b])"));
    CHECK_FALSE(r.truncated);
    REQUIRE(r.answers.size() == 2);
    CHECK(r.answers[0].at("X") == Term::constant("a"));
    CHECK(r.answers[1].at("X") == Term::constant("b"));
}

TEST_CASE("the depth bound truncates infinite enumerations") {
    Program p = parse_program(
        "nat(z).\n"
        "nat(s(X)) :- nat(X).\n");
    SldResult r = concrete_sld(p, parse_term("nat(N)"), 3);
    CHECK(r.truncated);
    REQUIRE(!r.answers.empty());
    CHECK(r.answers[0].at("N") == Term::constant("z"));
    SldResult full = concrete_sld(p, parse_term("nat(s(z))"), 8);
    CHECK_FALSE(full.truncated);
    CHECK(full.answers.size() == 1);
}

TEST_CASE("arithmetic builtins evaluate and guard instantiation") {
    Program p = parse_program("f(X, Y) :- Y is X + 1, Y > 2.\n");
    SldResult ok = concrete_sld(p, parse_term("f(2, Y)"));
    REQUIRE(ok.answers.size() == 1);
    CHECK(ok.answers[0].at("Y") == Term::constant("3"));
    // Guard fails: 1+1 = 2 is not > 2.
    CHECK(concrete_sld(p, parse_term("f(1, Y)")).answers.empty());
    // Unbound arithmetic argument fails the branch instead of crashing.
    CHECK(concrete_sld(p, parse_term("f(A, B)")).answers.empty());
}

TEST_CASE("cut is treated as true") {
    Program p = parse_program("g(a).\ng(b).\nf(X) :- !, g(X).\n");
    SldResult r = concrete_sld(p, parse_term("f(X)"));
    CHECK(r.answers.size() == 2);
}

TEST_CASE("event recording covers the root and body points") {
    Program p = parse_program(
        "append([], Ys, Ys).\n"
        "append([X|Xs], Ys, [X|Zs]) :- append(Xs, Ys, Zs).\n");
    SldResult r = concrete_sld(p, parse_term("append([1], [2], Zs)"), 8, true);
    REQUIRE(!r.events.empty());
    // First event: the root call with the goal's own bindings.
    CHECK(r.events[0].pp == "append/3/0");
    CHECK_FALSE(r.events[0].success);
    CHECK(r.events[0].bind.at("Zs").is_var());
    // Some recursive call event and a success at the root.
    bool saw_body_call = false, saw_root_success = false;
    for (const SldEvent& e : r.events) {
        if (e.pp == "append/3/1/1" && !e.success) saw_body_call = true;
        if (e.pp == "append/3/0" && e.success) {
            saw_root_success = true;
            CHECK(e.bind.at("Zs") == parse_term("[1,2]"));
        }
    }
    CHECK(saw_body_call);
    CHECK(saw_root_success);
    // Without recording no events are produced.
    CHECK(concrete_sld(p, parse_term("append([1], [2], Zs)")).events.empty());
}
