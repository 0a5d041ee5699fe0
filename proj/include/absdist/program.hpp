// Frontend for the analyzed Prolog subset: clauses with conjunctive bodies,
// entry/trust declarations, and flat import lists. Also defines the program
// point naming scheme used by the whole-analysis metrics.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "absdist/term.hpp"

namespace absdist {

struct Clause {
    Term head;
    std::vector<Term> body;      // empty for facts
    int line = 0;
    // 1-based index among the clauses of the predicate that have a non-empty
    // body; 0 for facts. Program points are numbered per body clause.
    int body_index = 0;
};

struct Predicate {
    std::string name;
    int arity = 0;
    std::vector<Clause> clauses;
};

struct EntryDecl {
    Term head;
    std::vector<Term> props;     // conjunction of ground(V) / var(V)
    int line = 0;
};

struct TrustDecl {
    Term head;
    std::vector<Term> call_props;
    std::vector<Term> success_props;
    int line = 0;
};

struct Program {
    std::string module_name;
    std::vector<Predicate> preds;              // in source order
    std::vector<EntryDecl> entries;
    std::vector<TrustDecl> trusts;
    std::vector<std::pair<std::string, int>> imports;   // name/arity

    const Predicate* find_pred(const std::string& name, int arity) const;
    bool is_imported(const std::string& name, int arity) const;
    const TrustDecl* find_trust(const std::string& name, int arity) const;

    friend bool operator==(const Program&, const Program&);
};

bool operator==(const Clause&, const Clause&);
bool operator==(const EntryDecl&, const EntryDecl&);
bool operator==(const TrustDecl&, const TrustDecl&);

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error("line " + std::to_string(l) + ", column " +
                             std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

Program parse_program(const std::string& text);
std::string print_program(const Program& p);

// Literals the analyzer and the SLD engine evaluate directly instead of
// resolving against clauses.
bool is_builtin_literal(const std::string& name, int arity);

// Program point ids: `pred/arity/clause/literal` per body literal, plus the
// entry pseudo-point `pred/arity/0` naming the analysis root.
std::string entry_point_id(const EntryDecl& entry);
std::string entry_point_id(const std::string& pred, int arity);
std::string program_point_id(const std::string& pred, int arity, int body_clause,
                             int literal);

// Deterministic listing: the entry pseudo-point first, then every body
// literal in predicate/clause/literal order.
std::vector<std::string> program_points(const Program& p);

}  // namespace absdist
