#include "absdist/sld.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

namespace absdist {

namespace {

using Subst = std::map<std::string, Term>;

Term walk(Term t, const Subst& s) {
    while (t.kind == Term::Kind::Var) {
        auto it = s.find(t.name);
        if (it == s.end()) return t;
        t = it->second;
    }
    return t;
}

Term deep_walk(const Term& t, const Subst& s) {
    Term w = walk(t, s);
    if (w.kind != Term::Kind::Compound) return w;
    std::vector<Term> args;
    args.reserve(w.args.size());
    for (const Term& a : w.args) args.push_back(deep_walk(a, s));
    return Term::compound(w.name, std::move(args));
}

bool occurs(const std::string& v, const Term& t, const Subst& s) {
    Term w = walk(t, s);
    if (w.kind == Term::Kind::Var) return w.name == v;
    for (const Term& a : w.args) {
        if (occurs(v, a, s)) return true;
    }
    return false;
}

bool unify(const Term& a, const Term& b, Subst& s) {
    Term x = walk(a, s);
    Term y = walk(b, s);
    if (x.kind == Term::Kind::Var && y.kind == Term::Kind::Var && x.name == y.name) return true;
    if (x.kind == Term::Kind::Var) {
        if (occurs(x.name, y, s)) return false;
        s.emplace(x.name, y);
        return true;
    }
    if (y.kind == Term::Kind::Var) {
        if (occurs(y.name, x, s)) return false;
        s.emplace(y.name, x);
        return true;
    }
    if (x.name != y.name || x.args.size() != y.args.size()) return false;
    for (size_t i = 0; i < x.args.size(); ++i) {
        if (!unify(x.args[i], y.args[i], s)) return false;
    }
    return true;
}

bool parse_int(const std::string& s, int64_t& out) {
    if (s.empty()) return false;
    size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (size_t k = i; k < s.size(); ++k) {
        if (s[k] < '0' || s[k] > '9') return false;
    }
    out = std::stoll(s);
    return true;
}

std::optional<int64_t> eval_arith(const Term& t, const Subst& s) {
    Term w = walk(t, s);
    if (w.kind == Term::Kind::Var) return std::nullopt;
    if (w.kind == Term::Kind::Const) {
        int64_t v;
        if (parse_int(w.name, v)) return v;
        return std::nullopt;
    }
    if (w.args.size() == 2) {
        std::optional<int64_t> l = eval_arith(w.args[0], s);
        std::optional<int64_t> r = eval_arith(w.args[1], s);
        if (!l || !r) return std::nullopt;
        if (w.name == "+") return *l + *r;
        if (w.name == "-") return *l - *r;
        if (w.name == "*") return *l * *r;
    }
    if (w.args.size() == 1 && w.name == "-") {
        std::optional<int64_t> v = eval_arith(w.args[0], s);
        if (v) return -*v;
    }
    return std::nullopt;
}

// Strips the renaming suffix added when a clause instance is created.
std::string orig_name(const std::string& v) {
    size_t at = v.find('@');
    return at == std::string::npos ? v : v.substr(0, at);
}

struct Solver {
    const Program& prog;
    bool record;
    int rename_counter = 0;
    bool truncated = false;
    std::vector<SldEvent>* events;

    using Cont = std::function<void(const Subst&)>;

    Term rename(const Term& t, const std::string& suffix) const {
        if (t.kind == Term::Kind::Var) return Term::var(t.name + suffix);
        if (t.kind == Term::Kind::Const) return t;
        std::vector<Term> args;
        args.reserve(t.args.size());
        for (const Term& a : t.args) args.push_back(rename(a, suffix));
        return Term::compound(t.name, std::move(args));
    }

    void emit(const std::string& pp, bool success, const Term& lit, const Subst& s) const {
        if (!record) return;
        SldEvent ev;
        ev.pp = pp;
        ev.success = success;
        for (const std::string& v : term_vars(lit)) {
            ev.bind.emplace(orig_name(v), deep_walk(Term::var(v), s));
        }
        events->push_back(std::move(ev));
    }

    void solve_builtin(const Term& lit, const Subst& s, const Cont& k) {
        const std::string& f = lit.name;
        size_t n = lit.args.size();
        if (n == 0) {
            if (f == "true" || f == "!") k(s);
            return;  // fail/0 yields nothing
        }
        if (n == 1 && f == "ground") {
            if (deep_walk(lit.args[0], s).is_ground()) k(s);
            return;
        }
        if (n == 1 && f == "var") {
            if (walk(lit.args[0], s).kind == Term::Kind::Var) k(s);
            return;
        }
        if (n == 2 && f == "=") {
            Subst s2 = s;
            if (unify(lit.args[0], lit.args[1], s2)) k(s2);
            return;
        }
        if (n == 2 && f == "is") {
            std::optional<int64_t> v = eval_arith(lit.args[1], s);
            if (!v) return;
            Subst s2 = s;
            if (unify(lit.args[0], Term::constant(std::to_string(*v)), s2)) k(s2);
            return;
        }
        if (n == 2) {
            std::optional<int64_t> l = eval_arith(lit.args[0], s);
            std::optional<int64_t> r = eval_arith(lit.args[1], s);
            if (!l || !r) return;
            bool ok = false;
            if (f == "<") ok = *l < *r;
            else if (f == ">") ok = *l > *r;
            else if (f == "=<") ok = *l <= *r;
            else if (f == ">=") ok = *l >= *r;
            else if (f == "=:=") ok = *l == *r;
            else if (f == "=\\=") ok = *l != *r;
            if (ok) k(s);
            return;
        }
    }

    void solve(const Term& lit, const std::string& pp, const Subst& s, int depth, const Cont& k) {
        emit(pp, false, lit, s);
        if (is_builtin_literal(lit.name, static_cast<int>(lit.args.size()))) {
            solve_builtin(lit, s, [&](const Subst& s2) {
                emit(pp, true, lit, s2);
                k(s2);
            });
            return;
        }
        const Predicate* pred = prog.find_pred(lit.name, static_cast<int>(lit.args.size()));
        if (!pred) {
            throw std::runtime_error("sld: call to undefined predicate " + lit.name + "/" +
                                     std::to_string(lit.args.size()));
        }
        if (depth <= 0) {
            truncated = true;
            return;
        }
        for (const Clause& c : pred->clauses) {
            std::string suffix = "@" + std::to_string(++rename_counter);
            Term head = rename(c.head, suffix);
            Subst s2 = s;
            if (!unify(lit, head, s2)) continue;
            solve_body(*pred, c, suffix, 0, s2, depth - 1, [&](const Subst& s3) {
                emit(pp, true, lit, s3);
                k(s3);
            });
        }
    }

    void solve_body(const Predicate& pred, const Clause& c, const std::string& suffix, size_t j,
                    const Subst& s, int depth, const Cont& k) {
        if (j == c.body.size()) {
            k(s);
            return;
        }
        Term lit = rename(c.body[j], suffix);
        std::string pp =
            program_point_id(pred.name, pred.arity, c.body_index, static_cast<int>(j) + 1);
        solve(lit, pp, s, depth, [&](const Subst& s2) {
            solve_body(pred, c, suffix, j + 1, s2, depth, k);
        });
    }
};

}  // namespace

SldResult concrete_sld(const Program& p, const Term& goal, int depth, bool record_events) {
    SldResult r;
    Solver sv{p, record_events, 0, false, &r.events};
    std::string rpp = entry_point_id(goal.name, goal.args.size());
    sv.solve(goal, rpp, {}, depth, [&](const Subst& s) {
        std::map<std::string, Term> ans;
        for (const std::string& v : term_vars(goal)) {
            ans.emplace(v, deep_walk(Term::var(v), s));
        }
        r.answers.push_back(std::move(ans));
    });
    r.truncated = sv.truncated;
    return r;
}

}  // namespace absdist
