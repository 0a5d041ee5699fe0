#include "absdist/groundness.hpp"

#include <cmath>
#include <stdexcept>

#include "absdist/lattice.hpp"

namespace absdist {

const char* ground_val_name(GroundVal v) {
    switch (v) {
        case GroundVal::G: return "g";
        case GroundVal::NG: return "ng";
        case GroundVal::Any: return "any";
    }
    throw std::logic_error("ground_val_name: bad value");
}

GroundVal ground_val_of_name(const std::string& s) {
    if (s == "g") return GroundVal::G;
    if (s == "ng") return GroundVal::NG;
    if (s == "any") return GroundVal::Any;
    throw std::runtime_error("unknown groundness value: " + s);
}

GroundVal gv_join(GroundVal a, GroundVal b) {
    if (a == b) return a;
    return GroundVal::Any;
}

std::optional<GroundVal> gv_meet(GroundVal a, GroundVal b) {
    if (a == b) return a;
    if (a == GroundVal::Any) return b;
    if (b == GroundVal::Any) return a;
    return std::nullopt;   // g meet ng: empty
}

bool gv_leq(GroundVal a, GroundVal b) {
    return a == b || b == GroundVal::Any;
}

double gv_distance(GroundVal a, GroundVal b) {
    if (a == b) return 0.0;
    if (a == GroundVal::Any || b == GroundVal::Any) return 0.5;
    return 1.0;   // g vs ng
}

GroundSub GroundSub::top(const std::vector<std::string>& vars) {
    GroundSub s;
    for (const auto& v : vars)
        s.vals[v] = GroundVal::Any;
    return s;
}

GroundVal GroundSub::at(const std::string& v) const {
    auto it = vals.find(v);
    if (it == vals.end())
        throw std::out_of_range("groundness scope has no variable " + v);
    return it->second;
}

std::vector<std::string> GroundSub::vars() const {
    std::vector<std::string> out;
    out.reserve(vals.size());
    for (const auto& [v, _] : vals)
        out.push_back(v);
    return out;
}

GroundSub GroundSub::project(const std::vector<std::string>& keep) const {
    if (bot)
        return bottom();
    GroundSub out;
    for (const auto& v : keep) {
        auto it = vals.find(v);
        if (it != vals.end())
            out.vals.emplace(*it);
    }
    return out;
}

namespace {

void require_same_scope(const GroundSub& a, const GroundSub& b, const char* op) {
    if (a.bot || b.bot)
        return;
    if (a.vals.size() != b.vals.size())
        throw std::invalid_argument(std::string(op) + ": variable sets differ");
    auto ia = a.vals.begin();
    auto ib = b.vals.begin();
    for (; ia != a.vals.end(); ++ia, ++ib)
        if (ia->first != ib->first)
            throw std::invalid_argument(std::string(op) + ": variable sets differ");
}

}  // namespace

GroundSub gr_join(const GroundSub& a, const GroundSub& b) {
    require_same_scope(a, b, "gr_join");
    if (a.bot) return b;
    if (b.bot) return a;
    GroundSub out;
    for (const auto& [v, x] : a.vals)
        out.vals[v] = gv_join(x, b.vals.at(v));
    return out;
}

GroundSub gr_meet(const GroundSub& a, const GroundSub& b) {
    require_same_scope(a, b, "gr_meet");
    if (a.bot || b.bot) return GroundSub::bottom();
    GroundSub out;
    for (const auto& [v, x] : a.vals) {
        auto m = gv_meet(x, b.vals.at(v));
        if (!m)
            return GroundSub::bottom();
        out.vals[v] = *m;
    }
    return out;
}

bool gr_leq(const GroundSub& a, const GroundSub& b) {
    require_same_scope(a, b, "gr_leq");
    if (a.bot) return true;
    if (b.bot) return false;
    for (const auto& [v, x] : a.vals)
        if (!gv_leq(x, b.vals.at(v)))
            return false;
    return true;
}

double gr_distance(const GroundSub& a, const GroundSub& b) {
    require_same_scope(a, b, "gr_distance");
    if (a.bot && b.bot) return 0.0;
    if (a.bot || b.bot) return 1.0;
    std::vector<double> ds;
    ds.reserve(a.vals.size());
    for (const auto& [v, x] : a.vals)
        ds.push_back(gv_distance(x, b.vals.at(v)));
    return product_distance(ds, /*normalize=*/true);
}

GroundVal gr_term_val(const Term& t, const GroundSub& sub) {
    if (t.is_var())
        return sub.at(t.name);
    GroundVal acc = GroundVal::G;
    for (const Term& a : t.args) {
        GroundVal v = gr_term_val(a, sub);
        if (v == GroundVal::NG)
            return GroundVal::NG;   // a nonground part makes the term nonground
        if (v == GroundVal::Any)
            acc = GroundVal::Any;
    }
    return acc;
}

GroundVal gr_unify_var(GroundVal cur, GroundVal actual) {
    if (cur == GroundVal::G || actual == GroundVal::G)
        return GroundVal::G;
    if (cur == GroundVal::NG && actual == GroundVal::NG)
        return GroundVal::NG;
    return GroundVal::Any;
}

void gr_bind_term(const Term& t, GroundVal val, GroundSub& sub) {
    if (t.is_var()) {
        sub.set(t.name, gr_unify_var(sub.at(t.name), val));
        return;
    }
    if (val == GroundVal::G) {
        // The whole term is ground, hence so is every variable inside it.
        for (const auto& v : term_vars(t))
            sub.set(v, GroundVal::G);
        return;
    }
    // Unifying a compound against a possibly/definitely nonground value: any
    // variable inside may end up bound to an unknown subterm. Ground ones
    // stay ground; nothing else can be kept (aliasing may instantiate them).
    for (const auto& v : term_vars(t))
        if (sub.at(v) != GroundVal::G)
            sub.set(v, GroundVal::Any);
}

GroundVal gr_extend_var(GroundVal cur, GroundVal succ) {
    if (succ == GroundVal::G || cur == GroundVal::G)
        return GroundVal::G;
    if (succ == GroundVal::NG)
        return GroundVal::NG;
    return GroundVal::Any;
}

namespace {

bool is_comparison(const std::string& f, int arity) {
    return arity == 2 &&
           (f == "<" || f == ">" || f == "=<" || f == ">=" || f == "=:=" ||
            f == "=\\=" || f == "is");
}

}  // namespace

GroundSub gr_transfer(const Term& literal, const GroundSub& sub) {
    if (sub.is_bot())
        return sub;
    GroundSub out = sub;
    const std::string& f = literal.name;
    int n = literal.arity();
    if (f == "=" && n == 2) {
        const Term& lhs = literal.args[0];
        const Term& rhs = literal.args[1];
        GroundVal lv = gr_term_val(lhs, sub);
        GroundVal rv = gr_term_val(rhs, sub);
        // Each side is unified against the other side's value.
        gr_bind_term(lhs, rv, out);
        gr_bind_term(rhs, lv, out);
        return out;
    }
    if (f == "ground" && n == 1) {
        for (const auto& v : term_vars(literal.args[0]))
            out.set(v, GroundVal::G);
        return out;
    }
    if (f == "var" && n == 1 && literal.args[0].is_var()) {
        const std::string& v = literal.args[0].name;
        if (sub.at(v) == GroundVal::G)
            return GroundSub::bottom();   // a ground variable is never free
        out.set(v, GroundVal::NG);
        return out;
    }
    if ((f == "true" && n == 0) || (f == "!" && n == 0))
        return out;
    if (is_comparison(f, n)) {
        // Arithmetic requires both sides to evaluate, hence ground arguments.
        for (const auto& v : term_vars(literal))
            out.set(v, GroundVal::G);
        return out;
    }
    // Unknown builtin: conservative, every touched non-ground variable may be
    // instantiated arbitrarily.
    for (const auto& v : term_vars(literal))
        if (out.at(v) != GroundVal::G)
            out.set(v, GroundVal::Any);
    return out;
}

}  // namespace absdist
