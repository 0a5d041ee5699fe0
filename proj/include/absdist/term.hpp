// Concrete first-order terms: representation, reader/printer, the recursive
// term metric with its Hausdorff lifting, and the symbol-count size measure.
#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace absdist {

// A term is a variable, a constant, or a compound f(t1,...,tn) with n >= 1.
// Constants are represented as compounds of arity 0 would be redundant; they
// get their own kind so term_size and the metric can treat them uniformly as
// "functor of arity 0" without a vector allocation.
struct Term {
    enum class Kind { Var, Const, Compound };

    Kind kind = Kind::Const;
    std::string name;         // variable name or functor/constant symbol
    std::vector<Term> args;   // empty unless Compound

    static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
    static Term constant(std::string n) { return {Kind::Const, std::move(n), {}}; }
    static Term compound(std::string f, std::vector<Term> a) {
        if (a.empty())
            return constant(std::move(f));
        return {Kind::Compound, std::move(f), std::move(a)};
    }
    // Convenience for Prolog lists.
    static Term nil() { return constant("[]"); }
    static Term cons(Term head, Term tail);
    static Term list(const std::vector<Term>& elems);

    bool is_var() const { return kind == Kind::Var; }
    bool is_const() const { return kind == Kind::Const; }
    bool is_compound() const { return kind == Kind::Compound; }
    bool is_ground() const;
    int arity() const { return static_cast<int>(args.size()); }

    // Hand-rolled: a defaulted <=> on a recursive type trips the constraint
    // machinery on some library implementations.
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        if (auto c = a.name <=> b.name; c != 0) return c;
        if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
        for (size_t i = 0; i < a.args.size(); ++i)
            if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }
};

// Ordered set of variable names occurring in t, in first-occurrence order.
std::vector<std::string> term_vars(const Term& t);
void collect_vars(const Term& t, std::vector<std::string>& out);

// Reader/printer for the standard syntax: `f(a, g(X))`, lists `[a,b|T]`,
// integers as constants. Functor/constant names match [a-z][A-Za-z0-9_]* or
// are integers; variables match [A-Z_][A-Za-z0-9_]*.
Term parse_term(const std::string& text);
std::string print_term(const Term& t);

struct TermMetricParams {
    double p = 0.5;   // contraction factor, 0 < p < 1
};

// Distance between ground terms: 1 if the principal functors differ (name or
// arity), else p * (1/n) * sum of child distances; 0 for equal constants.
// Non-ground input is rejected: the measure is only defined on ground terms.
double d_term(const Term& t1, const Term& t2, const TermMetricParams& params = {});

// Hausdorff lifting of d_term to finite non-empty sets of ground terms.
double hausdorff_terms(const std::set<Term>& a, const std::set<Term>& b,
                       const TermMetricParams& params = {});

// Number of functor and constant symbols in t; variables count zero.
int term_size(const Term& t);

}  // namespace absdist
