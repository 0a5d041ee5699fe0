// Domain-tagged abstract substitutions: a closed variant over the groundness
// and set-sharing domains with uniform lattice/metric dispatch, the JSON
// encoding used by the analysis interchange format, entry-declaration
// abstraction, and base-domain translation.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "absdist/groundness.hpp"
#include "absdist/program.hpp"
#include "absdist/sharing.hpp"

namespace absdist {

enum class Domain { Gr, Share };

const char* domain_name(Domain d);
Domain domain_of_name(const std::string& s);

using AbstractSub = std::variant<GroundSub, SharingSub>;

Domain sub_domain(const AbstractSub& s);
bool ab_is_bot(const AbstractSub& s);
AbstractSub ab_join(const AbstractSub& a, const AbstractSub& b);
AbstractSub ab_meet(const AbstractSub& a, const AbstractSub& b);
bool ab_leq(const AbstractSub& a, const AbstractSub& b);
double ab_distance(const AbstractSub& a, const AbstractSub& b);
AbstractSub ab_project(const AbstractSub& s, const std::vector<std::string>& keep);

// JSON encoding: {"dom":"gr","sub":{"Xs":"g"}} / {"dom":"share","sub":[["X"]]}
// with "bot" as the bottom marker. Scope for sharing values is external (the
// node's literal variables), supplied at decode time.
nlohmann::json ab_to_json(const AbstractSub& s);
AbstractSub ab_from_json(const nlohmann::json& j, const std::vector<std::string>& scope);

// Canonical one-line rendering, used by golden tests and diagnostics:
// gr: {Xs/g,Ys/ng} or bot; share: {{X},{X,Y}} or {} or bot.
std::string ab_render(const AbstractSub& s);

// Symbol count of the canonical term rendering: groundness contributes one
// constant per variable; sharing renders as a list of lists of variable
// names; bottom counts as a single constant.
int ab_symbol_size(const AbstractSub& s);

// Entry declaration -> initial call substitution over the head variables.
// Groundness: ground(X) -> g, var(X) -> ng, unstated -> any. Sharing:
// ground(X) -> no groups, var(X) -> the singleton {X}, and unstated
// variables additionally share arbitrarily among themselves.
AbstractSub entry_to_abstract(const EntryDecl& decl, Domain domain);

// Translation into a base domain via concretization-then-abstraction. The
// registered pairs are the identities and share -> gr.
AbstractSub translate_sub(const AbstractSub& s, Domain base);

}  // namespace absdist
