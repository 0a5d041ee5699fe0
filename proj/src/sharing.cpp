#include "absdist/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace absdist {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

void require_same_scope(const SharingSub& a, const SharingSub& b, const char* op) {
    if (a.scope != b.scope)
        throw std::invalid_argument(std::string(op) + ": variable scopes differ");
}

}  // namespace

SharingSub SharingSub::bottom(std::vector<std::string> scope_vars) {
    SharingSub s;
    s.bot = true;
    s.scope = sorted_unique(std::move(scope_vars));
    return s;
}

SharingSub SharingSub::empty(std::vector<std::string> scope_vars) {
    SharingSub s;
    s.scope = sorted_unique(std::move(scope_vars));
    return s;
}

SharingSub SharingSub::top(std::vector<std::string> scope_vars) {
    SharingSub s;
    s.scope = sorted_unique(std::move(scope_vars));
    s.groups = all_groups(s.scope);
    return s;
}

SharingSub SharingSub::of(std::vector<std::string> scope_vars, GroupSet gs) {
    SharingSub s;
    s.scope = sorted_unique(std::move(scope_vars));
    for (const VarGroup& g : gs) {
        if (g.empty())
            throw std::invalid_argument("sharing group must be non-empty");
        for (const auto& v : g)
            if (!std::binary_search(s.scope.begin(), s.scope.end(), v))
                throw std::invalid_argument("sharing group variable outside scope: " + v);
    }
    s.groups = std::move(gs);
    return s;
}

bool SharingSub::in_scope(const std::string& v) const {
    return std::binary_search(scope.begin(), scope.end(), v);
}

SharingSub SharingSub::project(const std::vector<std::string>& keep) const {
    std::vector<std::string> kept;
    for (const auto& v : keep)
        if (in_scope(v))
            kept.push_back(v);
    if (bot)
        return bottom(kept);
    SharingSub out = empty(kept);
    std::set<std::string> keepset(out.scope.begin(), out.scope.end());
    for (const VarGroup& g : groups) {
        VarGroup gi;
        for (const auto& v : g)
            if (keepset.count(v))
                gi.insert(v);
        if (!gi.empty())
            out.groups.insert(gi);
    }
    return out;
}

GroupSet all_groups(const std::vector<std::string>& vars) {
    GroupSet out;
    size_t n = vars.size();
    if (n >= 30)
        throw std::invalid_argument("all_groups: scope too large to enumerate");
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
        VarGroup g;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t{1} << i))
                g.insert(vars[i]);
        out.insert(std::move(g));
    }
    return out;
}

int sh_size(const SharingSub& a) {
    if (a.bot)
        return 0;
    return static_cast<int>(a.groups.size()) + 1;
}

SharingSub sh_join(const SharingSub& a, const SharingSub& b) {
    require_same_scope(a, b, "sh_join");
    if (a.bot) return b;
    if (b.bot) return a;
    SharingSub out = a;
    out.groups.insert(b.groups.begin(), b.groups.end());
    return out;
}

SharingSub sh_meet(const SharingSub& a, const SharingSub& b) {
    require_same_scope(a, b, "sh_meet");
    if (a.bot || b.bot)
        return SharingSub::bottom(a.scope);
    SharingSub out = SharingSub::empty(a.scope);
    std::set_intersection(a.groups.begin(), a.groups.end(), b.groups.begin(),
                          b.groups.end(), std::inserter(out.groups, out.groups.end()));
    return out;
}

bool sh_leq(const SharingSub& a, const SharingSub& b) {
    require_same_scope(a, b, "sh_leq");
    if (a.bot) return true;
    if (b.bot) return false;
    return std::includes(b.groups.begin(), b.groups.end(), a.groups.begin(),
                         a.groups.end());
}

double sh_distance(const SharingSub& a, const SharingSub& b) {
    require_same_scope(a, b, "sh_distance");
    double denom = std::pow(2.0, a.n());
    return (sh_size(sh_join(a, b)) - sh_size(sh_meet(a, b))) / denom;
}

SharingSub sh_abstract(const std::vector<std::map<std::string, Term>>& thetas,
                       const std::vector<std::string>& scope) {
    if (thetas.empty())
        return SharingSub::bottom(scope);
    SharingSub out = SharingSub::empty(scope);
    for (const auto& theta : thetas) {
        // Runtime variables are the free variables of the images.
        std::map<std::string, VarGroup> occ;   // runtime var -> scope vars
        for (const auto& x : out.scope) {
            auto it = theta.find(x);
            // An unbound scope variable stands for itself.
            Term image = it == theta.end() ? Term::var(x) : it->second;
            for (const auto& u : term_vars(image))
                occ[u].insert(x);
        }
        for (auto& [u, group] : occ)
            if (!group.empty())
                out.groups.insert(group);
    }
    return out;
}

GroupSet sh_rel_vars(const GroupSet& gs, const std::set<std::string>& vs) {
    GroupSet out;
    for (const VarGroup& g : gs)
        for (const auto& v : g)
            if (vs.count(v)) {
                out.insert(g);
                break;
            }
    return out;
}

GroupSet sh_rel(const GroupSet& gs, const Term& t) {
    auto vars = term_vars(t);
    return sh_rel_vars(gs, std::set<std::string>(vars.begin(), vars.end()));
}

GroupSet sh_star(const GroupSet& gs) {
    GroupSet out = gs;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<VarGroup> added;
        for (const VarGroup& a : out)
            for (const VarGroup& b : out) {
                VarGroup u = a;
                u.insert(b.begin(), b.end());
                if (!out.count(u))
                    added.push_back(std::move(u));
            }
        for (VarGroup& g : added)
            changed |= out.insert(std::move(g)).second;
    }
    return out;
}

SharingSub sh_amgu(const std::string& x, const Term& t, const SharingSub& sh) {
    if (sh.bot)
        return sh;
    if (!sh.in_scope(x))
        throw std::invalid_argument("sh_amgu: variable outside scope: " + x);
    for (const auto& v : term_vars(t))
        if (!sh.in_scope(v))
            throw std::invalid_argument("sh_amgu: term variable outside scope: " + v);
    GroupSet rel_x = sh_rel_vars(sh.groups, {x});
    GroupSet rel_t = sh_rel(sh.groups, t);
    SharingSub out = SharingSub::empty(sh.scope);
    for (const VarGroup& g : sh.groups)
        if (!rel_x.count(g) && !rel_t.count(g))
            out.groups.insert(g);
    GroupSet sx = sh_star(rel_x);
    GroupSet st = sh_star(rel_t);
    for (const VarGroup& a : sx)
        for (const VarGroup& b : st) {
            VarGroup u = a;
            u.insert(b.begin(), b.end());
            out.groups.insert(std::move(u));
        }
    return out;
}

SharingSub sh_unify(const Term& t1, const Term& t2, const SharingSub& sh) {
    if (sh.bot)
        return sh;
    if (t1.is_var())
        return sh_amgu(t1.name, t2, sh);
    if (t2.is_var())
        return sh_amgu(t2.name, t1, sh);
    if (t1.name != t2.name || t1.arity() != t2.arity())
        return SharingSub::bottom(sh.scope);   // definite unification failure
    SharingSub out = sh;
    for (int i = 0; i < t1.arity(); ++i) {
        out = sh_unify(t1.args[i], t2.args[i], out);
        if (out.bot)
            break;
    }
    return out;
}

SharingSub sh_widen(const SharingSub& sh, const ShWidenParams& params) {
    if (params.threshold < 1)
        throw std::invalid_argument("sh_widen: threshold must be >= 1");
    if (sh.bot || static_cast<int>(sh.groups.size()) <= params.threshold)
        return sh;
    std::set<std::string> occurring;
    for (const VarGroup& g : sh.groups)
        occurring.insert(g.begin(), g.end());
    SharingSub out = SharingSub::empty(sh.scope);
    out.groups = all_groups(std::vector<std::string>(occurring.begin(), occurring.end()));
    return out;
}

GroundSub sh_to_gr(const SharingSub& sh) {
    if (sh.bot)
        return GroundSub::bottom();
    GroundSub out;
    for (const auto& v : sh.scope)
        out.set(v, GroundVal::G);
    for (const VarGroup& g : sh.groups)
        for (const auto& v : g)
            out.set(v, GroundVal::Any);
    return out;
}

namespace {

bool is_arith(const std::string& f, int arity) {
    return arity == 2 &&
           (f == "<" || f == ">" || f == "=<" || f == ">=" || f == "=:=" ||
            f == "=\\=" || f == "is");
}

// Remove every group touching the variables of t (they are now ground).
void drop_rel(const Term& t, SharingSub& sh) {
    GroupSet rel = sh_rel(sh.groups, t);
    for (const VarGroup& g : rel)
        sh.groups.erase(g);
}

}  // namespace

SharingSub sh_transfer(const Term& literal, const SharingSub& sub) {
    if (sub.bot)
        return sub;
    const std::string& f = literal.name;
    int n = literal.arity();
    SharingSub out = sub;
    if (f == "=" && n == 2)
        return sh_unify(literal.args[0], literal.args[1], sub);
    if (f == "ground" && n == 1) {
        drop_rel(literal.args[0], out);
        return out;
    }
    if (f == "var" && n == 1)
        return out;   // freeness is not tracked; nothing to refine
    if ((f == "true" || f == "!") && n == 0)
        return out;
    if (is_arith(f, n)) {
        // Evaluation requires (and leaves) ground arguments.
        drop_rel(literal, out);
        return out;
    }
    // Unknown builtin: anything it touches may end up aliased.
    GroupSet rel = sh_rel(out.groups, literal);
    for (const VarGroup& g : rel)
        out.groups.erase(g);
    for (const VarGroup& g : sh_star(rel))
        out.groups.insert(g);
    return out;
}

}  // namespace absdist
