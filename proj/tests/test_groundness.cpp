#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "absdist/groundness.hpp"

using namespace absdist;

namespace {
const std::vector<GroundVal> kVals = {GroundVal::G, GroundVal::NG, GroundVal::Any};

// All non-bottom substitutions over the given variables.
std::vector<GroundSub> all_subs(const std::vector<std::string>& vars) {
    std::vector<GroundSub> out = {GroundSub{}};
    for (const auto& v : vars) {
        std::vector<GroundSub> next;
        for (const GroundSub& s : out)
            for (GroundVal x : kVals) {
                GroundSub t = s;
                t.set(v, x);
                next.push_back(t);
            }
        out = std::move(next);
    }
    return out;
}
}  // namespace

TEST_CASE("value lattice tables") {
    CHECK(gv_join(GroundVal::G, GroundVal::G) == GroundVal::G);
    CHECK(gv_join(GroundVal::G, GroundVal::NG) == GroundVal::Any);
    CHECK(gv_join(GroundVal::NG, GroundVal::Any) == GroundVal::Any);
    CHECK(gv_meet(GroundVal::G, GroundVal::Any) == GroundVal::G);
    CHECK(gv_meet(GroundVal::NG, GroundVal::Any) == GroundVal::NG);
    CHECK(!gv_meet(GroundVal::G, GroundVal::NG).has_value());
    CHECK(gv_leq(GroundVal::G, GroundVal::Any));
    CHECK(gv_leq(GroundVal::NG, GroundVal::Any));
    CHECK(!gv_leq(GroundVal::G, GroundVal::NG));
    CHECK(!gv_leq(GroundVal::Any, GroundVal::G));
}

TEST_CASE("value metric: half per lattice step") {
    CHECK(gv_distance(GroundVal::G, GroundVal::G) == 0.0);
    CHECK(gv_distance(GroundVal::G, GroundVal::Any) == 0.5);
    CHECK(gv_distance(GroundVal::NG, GroundVal::Any) == 0.5);
    CHECK(gv_distance(GroundVal::G, GroundVal::NG) == 1.0);
}

TEST_CASE("value names round-trip") {
    for (GroundVal v : kVals) CHECK(ground_val_of_name(ground_val_name(v)) == v);
    CHECK_THROWS(ground_val_of_name("nonsense"));
}

TEST_CASE("substitution lattice over two variables is exhaustive-checkable") {
    std::vector<GroundSub> subs = all_subs({"X", "Y"});
    subs.push_back(GroundSub::bottom());
    for (const GroundSub& a : subs)
        for (const GroundSub& b : subs) {
            GroundSub j = gr_join(a, b);
            GroundSub m = gr_meet(a, b);
            CHECK(gr_leq(a, j));
            CHECK(gr_leq(b, j));
            CHECK(gr_leq(m, a));
            CHECK(gr_leq(m, b));
            CHECK(gr_join(a, b) == gr_join(b, a));
            CHECK(gr_meet(a, b) == gr_meet(b, a));
            CHECK((gr_leq(a, b) && gr_leq(b, a)) == (a == b));
            // join/meet characterize the order
            CHECK(gr_leq(a, b) == (gr_join(a, b) == b));
            CHECK(gr_leq(a, b) == (gr_meet(a, b) == a));
        }
}

TEST_CASE("meeting g with ng collapses to bottom") {
    GroundSub a = GroundSub::of({{"X", GroundVal::G}});
    GroundSub b = GroundSub::of({{"X", GroundVal::NG}});
    CHECK(gr_meet(a, b).is_bot());
}

TEST_CASE("distance is the normalized tuple 2-norm") {
    GroundSub a = GroundSub::of({{"X", GroundVal::G}, {"Y", GroundVal::G}});
    GroundSub b = GroundSub::of({{"X", GroundVal::G}, {"Y", GroundVal::Any}});
    // per-variable (0, 1/2): 2-norm = 1/2, / sqrt(2)
    CHECK(gr_distance(a, b) == doctest::Approx(0.5 / std::sqrt(2.0)));
    GroundSub c = GroundSub::of({{"X", GroundVal::NG}, {"Y", GroundVal::NG}});
    // per-variable (1, 1): 2-norm = sqrt(2), / sqrt(2) = 1
    CHECK(gr_distance(a, c) == doctest::Approx(1.0));
    CHECK(gr_distance(a, a) == 0.0);
    CHECK(gr_distance(GroundSub::bottom(), GroundSub::bottom()) == 0.0);
    CHECK(gr_distance(GroundSub::bottom(), a) == 1.0);
    CHECK(gr_distance(GroundSub::bottom(), GroundSub::top({"X"})) == 1.0);
}

TEST_CASE("distance satisfies the metric axioms exhaustively (1 variable)") {
    std::vector<GroundSub> subs = all_subs({"X"});
    subs.push_back(GroundSub::bottom());
    for (const GroundSub& a : subs)
        for (const GroundSub& b : subs) {
            CHECK(gr_distance(a, b) == doctest::Approx(gr_distance(b, a)));
            CHECK((gr_distance(a, b) == 0.0) == (a == b));
            for (const GroundSub& c : subs)
                CHECK(gr_distance(a, b) <=
                      gr_distance(a, c) + gr_distance(c, b) + 1e-12);
        }
}

TEST_CASE("order preservation: moving further up moves further away") {
    std::vector<GroundSub> subs = all_subs({"X", "Y"});
    subs.push_back(GroundSub::bottom());
    for (const GroundSub& a : subs)
        for (const GroundSub& b : subs)
            for (const GroundSub& c : subs) {
                if (gr_leq(a, b) && gr_leq(b, c)) {
                    CHECK(gr_distance(a, b) <= gr_distance(a, c) + 1e-12);
                    CHECK(gr_distance(b, c) <= gr_distance(a, c) + 1e-12);
                }
            }
}

TEST_CASE("term groundness under a substitution") {
    GroundSub s = GroundSub::of(
        {{"X", GroundVal::G}, {"Y", GroundVal::NG}, {"Z", GroundVal::Any}});
    CHECK(gr_term_val(parse_term("a"), s) == GroundVal::G);
    CHECK(gr_term_val(parse_term("X"), s) == GroundVal::G);
    CHECK(gr_term_val(parse_term("Y"), s) == GroundVal::NG);
    CHECK(gr_term_val(parse_term("Z"), s) == GroundVal::Any);
    CHECK(gr_term_val(parse_term("f(X,a)"), s) == GroundVal::G);
    // A definitely-nonground subterm makes the whole term nonground.
    CHECK(gr_term_val(parse_term("f(X,Y)"), s) == GroundVal::NG);
    CHECK(gr_term_val(parse_term("f(X,Z)"), s) == GroundVal::Any);
}

TEST_CASE("binding a term against a groundness value") {
    // Unifying against a ground actual grounds every variable of the term.
    GroundSub s = GroundSub::of({{"X", GroundVal::NG}, {"Y", GroundVal::Any}});
    gr_bind_term(parse_term("f(X,Y)"), GroundVal::G, s);
    CHECK(s.at("X") == GroundVal::G);
    CHECK(s.at("Y") == GroundVal::G);

    // A bare variable combines with the actual's value.
    GroundSub t = GroundSub::of({{"X", GroundVal::NG}});
    gr_bind_term(parse_term("X"), GroundVal::NG, t);
    CHECK(t.at("X") == GroundVal::NG);
    GroundSub u = GroundSub::of({{"X", GroundVal::NG}});
    gr_bind_term(parse_term("X"), GroundVal::Any, u);
    CHECK(u.at("X") == GroundVal::Any);
    GroundSub v = GroundSub::of({{"X", GroundVal::Any}});
    gr_bind_term(parse_term("X"), GroundVal::G, v);
    CHECK(v.at("X") == GroundVal::G);

    // Compound against a (possibly) nonground actual: ground variables stay
    // ground, everything else decays to any.
    GroundSub w = GroundSub::of({{"X", GroundVal::G}, {"Y", GroundVal::NG}});
    gr_bind_term(parse_term("f(X,Y)"), GroundVal::Any, w);
    CHECK(w.at("X") == GroundVal::G);
    CHECK(w.at("Y") == GroundVal::Any);
}

TEST_CASE("success propagation into a caller variable") {
    CHECK(gr_extend_var(GroundVal::Any, GroundVal::G) == GroundVal::G);
    CHECK(gr_extend_var(GroundVal::G, GroundVal::Any) == GroundVal::G);
    CHECK(gr_extend_var(GroundVal::Any, GroundVal::NG) == GroundVal::NG);
    CHECK(gr_extend_var(GroundVal::NG, GroundVal::Any) == GroundVal::Any);
    CHECK(gr_extend_var(GroundVal::Any, GroundVal::Any) == GroundVal::Any);
}

TEST_CASE("builtin transfer functions") {
    GroundSub s = GroundSub::of({{"X", GroundVal::Any}, {"Y", GroundVal::NG}});

    // X = t unifies both sides.
    GroundSub eq = gr_transfer(parse_term("=(X,a)"), s);
    CHECK(eq.at("X") == GroundVal::G);

    // var(X) fails when X is definitely ground, and leaves X nonground after.
    CHECK(gr_transfer(parse_term("var(X)"),
                      GroundSub::of({{"X", GroundVal::G}})).is_bot());
    GroundSub vr = gr_transfer(parse_term("var(X)"), s);
    CHECK(vr.at("X") == GroundVal::NG);

    // ground(X) grounds X.
    GroundSub gd = gr_transfer(parse_term("ground(Y)"), s);
    CHECK(gd.at("Y") == GroundVal::G);

    // Arithmetic requires and leaves ground arguments.
    GroundSub is = gr_transfer(parse_term("is(X,+(Y,1))"), s);
    CHECK(is.at("X") == GroundVal::G);
    CHECK(is.at("Y") == GroundVal::G);
    GroundSub lt = gr_transfer(parse_term("<(X,Y)"), s);
    CHECK(lt.at("X") == GroundVal::G);
    CHECK(lt.at("Y") == GroundVal::G);

    // Transfer on bottom stays bottom.
    CHECK(gr_transfer(parse_term("=(X,a)"), GroundSub::bottom()).is_bot());
}

TEST_CASE("projection keeps only the requested scope") {
    GroundSub s = GroundSub::of({{"X", GroundVal::G}, {"Y", GroundVal::NG}});
    GroundSub p = s.project({"X"});
    CHECK(p.vars() == std::vector<std::string>{"X"});
    CHECK(p.at("X") == GroundVal::G);
}
