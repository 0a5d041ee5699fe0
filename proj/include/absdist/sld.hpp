// Depth-bounded SLD resolution over the parsed program: the concrete
// semantics used to cross-check analysis results. Optionally records, for
// every program point it passes, the concrete bindings of the literal's
// variables at call and at each success, so answers can be abstracted and
// compared against the analysis.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "absdist/program.hpp"

namespace absdist {

struct SldEvent {
    std::string pp;
    bool success = false;                // false: call, true: one solution
    std::map<std::string, Term> bind;    // literal variable -> instance
};

struct SldResult {
    // One map per solution of the goal: goal variable -> answer term.
    std::vector<std::map<std::string, Term>> answers;
    // True when some derivation was cut off by the depth bound; the answer
    // set is then a lower approximation of the concrete one.
    bool truncated = false;
    std::vector<SldEvent> events;
};

// Resolves `goal` against the program, exploring proof trees whose
// predicate-call nesting does not exceed `depth`. Cut is treated as true and
// arithmetic is over integers; a comparison or `is` on insufficiently
// instantiated terms fails the branch.
SldResult concrete_sld(const Program& p, const Term& goal, int depth = 8,
                       bool record_events = false);

}  // namespace absdist
