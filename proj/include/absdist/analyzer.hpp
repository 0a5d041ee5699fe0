// Goal-dependent top-down abstract interpretation producing a finite cyclic
// AND-OR graph: multi-variant memo table keyed by (predicate, abstract call
// pattern), global fixpoint iteration, and a deterministic reconstruction
// pass that assigns stable node ids. Also the tabular/JSON renderings of a
// graph consumed by the whole-analysis metrics and the CLI.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "absdist/domain.hpp"
#include "absdist/program.hpp"

namespace absdist {

// OR-node: one body-literal (or entry) occurrence together with its abstract
// call and success substitutions, both over the literal's variables.
struct OrNode {
    int id = 0;                 // creation order, 1-based
    std::string pp;             // program point id
    Term literal;
    AbstractSub call;
    AbstractSub success;
    // Memo key of the callee variant expanded under this node; empty for
    // builtins, trusted calls, imports and unreachable (bottom) nodes.
    std::string variant;
};

// Clause-level record of a variant expansion: entry/exit substitutions and
// the OR-node ids of the body literals, in order.
struct VariantClause {
    int clause_index = 0;       // 1-based among all clauses of the predicate
    AbstractSub entry;
    AbstractSub exit;
    std::vector<int> literal_nodes;
};

struct AndOrGraph {
    Domain domain = Domain::Gr;
    std::string entry_pp;
    Term entry_literal;
    int root_id = 0;
    std::vector<OrNode> nodes;                              // nodes[id-1]
    // Child OR-node per (clause index, literal index), folded over the AND
    // level; shared between OR-nodes that expand the same variant.
    std::map<int, std::map<std::pair<int, int>, int>> children;
    // Per-variant clause info (analysis-side only; not serialized).
    std::map<std::string, std::vector<VariantClause>> variants;
    std::optional<int> widen_threshold;

    const OrNode& node(int id) const { return nodes.at(static_cast<size_t>(id) - 1); }
    const std::map<std::pair<int, int>, int>& children_of(int id) const;
};

struct AnalyzeOptions {
    Domain domain = Domain::Gr;
    std::optional<int> widen_share;   // cardinality widening threshold
    std::string entry;                // "name/arity" selector; empty = sole entry
};

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AndOrGraph analyze(const Program& p, const AnalyzeOptions& opts = {});

// Tabular rendering, ordered by node id.
struct NodeRow {
    int id;
    std::string pp;
    std::string literal;
    std::string call;
    std::string success;
};
std::vector<NodeRow> node_table(const AndOrGraph& g);

// Rendering with the literal's variables renamed A, B, C, ... in first-
// occurrence order, so node contents can be compared independently of the
// clause-local variable names. Example:
//   qsort/3/1/2 <qsort(A,B,C), {A/g,B/ng,C/g}, {A/g,B/g,C/g}>
std::string canonical_node_rendering(const OrNode& n);

// Interchange format: {"domain","entry","nodes":[...],"edges":[...]}.
nlohmann::json graph_to_json(const AndOrGraph& g);
AndOrGraph graph_from_json(const nlohmann::json& j);

}  // namespace absdist
