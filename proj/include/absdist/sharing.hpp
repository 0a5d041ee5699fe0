// Set-sharing abstract domain: elements are sets of non-empty variable groups
// over an explicit scope (or bottom), with the Jacobs-Langen abstract
// unification, the size-based normalized metric, a cardinality widening, and
// the translation to the groundness domain.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "absdist/groundness.hpp"
#include "absdist/term.hpp"

namespace absdist {

using VarGroup = std::set<std::string>;
using GroupSet = std::set<VarGroup>;

struct SharingSub {
    bool bot = false;
    std::vector<std::string> scope;   // sorted variable names, n = scope.size()
    GroupSet groups;                  // non-empty subsets of the scope

    static SharingSub bottom(std::vector<std::string> scope_vars);
    static SharingSub empty(std::vector<std::string> scope_vars);   // all ground
    static SharingSub top(std::vector<std::string> scope_vars);     // all groups
    static SharingSub of(std::vector<std::string> scope_vars, GroupSet gs);

    bool is_bot() const { return bot; }
    int n() const { return static_cast<int>(scope.size()); }
    bool in_scope(const std::string& v) const;

    // Restriction to a sub-scope: groups are intersected with the kept
    // variables, empty intersections dropped.
    SharingSub project(const std::vector<std::string>& keep) const;

    friend auto operator<=>(const SharingSub&, const SharingSub&) = default;
};

// All non-empty subsets of vars.
GroupSet all_groups(const std::vector<std::string>& vars);

int sh_size(const SharingSub& a);   // |groups|+1, bottom -> 0

SharingSub sh_join(const SharingSub& a, const SharingSub& b);   // set union
SharingSub sh_meet(const SharingSub& a, const SharingSub& b);   // set intersection
bool sh_leq(const SharingSub& a, const SharingSub& b);          // subset

// (size(a join b) - size(a meet b)) / 2^n.
double sh_distance(const SharingSub& a, const SharingSub& b);

// Jacobs-Langen abstraction of a set of concrete substitutions: for every
// runtime variable U, the group of scope variables whose image contains U.
SharingSub sh_abstract(const std::vector<std::map<std::string, Term>>& thetas,
                       const std::vector<std::string>& scope);

// Groups intersecting the variables of t.
GroupSet sh_rel(const GroupSet& gs, const Term& t);
GroupSet sh_rel_vars(const GroupSet& gs, const std::set<std::string>& vs);
// Closure under pairwise union.
GroupSet sh_star(const GroupSet& gs);

// Abstract unification of variable x against term t.
SharingSub sh_amgu(const std::string& x, const Term& t, const SharingSub& sh);

// Abstract unification of two arbitrary terms (decomposes compounds; a
// functor clash yields bottom).
SharingSub sh_unify(const Term& t1, const Term& t2, const SharingSub& sh);

struct ShWidenParams {
    int threshold = 1;   // max group count before widening, >= 1
};

// Cardinality widening: above the threshold, go to all non-empty subsets of
// the variables occurring in sh. Extensive and idempotent.
SharingSub sh_widen(const SharingSub& sh, const ShWidenParams& params);

// A variable in no group is definitely ground; any other may be nonground.
GroundSub sh_to_gr(const SharingSub& sh);

// Transfer for builtin literals (=/2 via sh_unify; ground/1 discards related
// groups; arithmetic requires ground arguments; var/1 is a no-op; unknown
// builtins alias everything they touch).
SharingSub sh_transfer(const Term& literal, const SharingSub& sub);

}  // namespace absdist
