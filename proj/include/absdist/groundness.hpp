// Groundness abstract domain: per-variable values {g, ng, any} plus a
// whole-substitution bottom, with pointwise lattice operations, a normalized
// tuple metric, and the transfer functions for unification and builtins used
// by the analyzer.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absdist/term.hpp"

namespace absdist {

// g and ng are incomparable; both lie below any. "g" = definitely ground,
// "ng" = definitely nonground at this point, "any" = unknown.
enum class GroundVal { G, NG, Any };

const char* ground_val_name(GroundVal v);
GroundVal ground_val_of_name(const std::string& s);

GroundVal gv_join(GroundVal a, GroundVal b);
// Meet of g and ng is empty; represented with nullopt and promoted to a
// whole-substitution bottom by gr_meet.
std::optional<GroundVal> gv_meet(GroundVal a, GroundVal b);
bool gv_leq(GroundVal a, GroundVal b);

// Per-variable metric: normalized path length in the diamond Hasse diagram.
// d(v,v)=0, d(g,any)=d(ng,any)=1/2, d(g,ng)=1.
double gv_distance(GroundVal a, GroundVal b);

// Either bottom (unreachable / failed) or a total map from the variables in
// scope to values. The map is kept sorted for deterministic rendering.
struct GroundSub {
    bool bot = false;
    std::map<std::string, GroundVal> vals;

    static GroundSub bottom() { return {true, {}}; }
    static GroundSub top(const std::vector<std::string>& vars);
    static GroundSub of(std::initializer_list<std::pair<const std::string, GroundVal>> vs) {
        return {false, std::map<std::string, GroundVal>(vs)};
    }

    bool is_bot() const { return bot; }
    GroundVal at(const std::string& v) const;
    void set(const std::string& v, GroundVal x) { vals[v] = x; }
    std::vector<std::string> vars() const;

    // Restriction to a subset of the scope (missing names are dropped).
    GroundSub project(const std::vector<std::string>& keep) const;

    friend auto operator<=>(const GroundSub&, const GroundSub&) = default;
};

// Pointwise lattice operations; the variable sets must agree unless one side
// is bottom. Meeting g with ng anywhere collapses the whole substitution to
// bottom (their concretizations share no substitution).
GroundSub gr_join(const GroundSub& a, const GroundSub& b);
GroundSub gr_meet(const GroundSub& a, const GroundSub& b);
bool gr_leq(const GroundSub& a, const GroundSub& b);

// Normalized distance: 2-norm of the per-variable distances divided by
// sqrt(n); d(bot,bot)=0 and d(bot,lambda)=1 for lambda != bot.
double gr_distance(const GroundSub& a, const GroundSub& b);

// Groundness of a term under a substitution: ground parts give g, a definitely
// nonground subterm forces ng, otherwise any.
GroundVal gr_term_val(const Term& t, const GroundSub& sub);

// Transfer for the builtin literals understood by the analyzer: X = t,
// ground(X), var(X), arithmetic comparisons and is/2 (which require/leave
// their arguments ground). Unknown builtins fall back conservatively: every
// non-g variable of the literal becomes any.
GroundSub gr_transfer(const Term& literal, const GroundSub& sub);

// Abstract head unification: combine the groundness cur of a formal-side
// variable with the value of the actual it is unified against.
GroundVal gr_unify_var(GroundVal cur, GroundVal actual);

// Record the effect on sub of unifying term t (whose variables are in scope)
// against something of groundness val.
void gr_bind_term(const Term& t, GroundVal val, GroundSub& sub);

// Success-side update: variable v held value cur before a call that promises
// groundness succ for the enclosing argument.
GroundVal gr_extend_var(GroundVal cur, GroundVal succ);

}  // namespace absdist
