// Deterministic regular term grammars and the abstract distance between the
// types they denote: a recursive functor-matching distance computed as a
// least fixpoint over the reachable pair graph, its tuple extension, and
// finite-language helpers used to cross-check it against the Hausdorff
// distance on concrete term sets. Distance-only: grammars never enter the
// analyzer fixpoint.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "absdist/term.hpp"

namespace absdist {

// Productions are indexed nonterminal -> "functor/arity" -> argument
// nonterminals; the map structure enforces at most one production per
// (nonterminal, functor) pair, i.e. determinism.
struct TypeGrammar {
    std::string start;
    std::map<std::string, std::map<std::string, std::vector<std::string>>> prods;
};

// Throws std::invalid_argument on undefined nonterminal references, an
// undefined start symbol, or a nonterminal with an empty language.
void validate_grammar(const TypeGrammar& g);

// Distance between the types denoted by two grammars, in [0,1]:
//   1 when the root functor sets differ, otherwise the max over the shared
//   functors f/n of p * (1/n) * sum of argument distances (0 for constants),
// solved as a least fixpoint from 0 over the reachable nonterminal pairs.
// Geometric convergence with ratio p; iteration stops when the largest
// update falls below tol.
double dprime(const TypeGrammar& g1, const TypeGrammar& g2, double p = 0.5, double tol = 1e-9);

// Unnormalized 2-norm of component dprime values; with normalize, divided by
// sqrt(n) to stay within [0,1].
double regtuple_distance(const std::vector<TypeGrammar>& t1, const std::vector<TypeGrammar>& t2,
                         double p = 0.5, double tol = 1e-9, bool normalize = false);

struct FiniteLanguage {
    std::vector<Term> terms;   // derivation depth <= depth_cap, sorted
    bool exhausted = false;    // true when deeper derivations cannot add terms
};
FiniteLanguage finite_language(const TypeGrammar& g, int depth_cap);

// Exact deterministic grammar for a finite set of ground terms; rejects the
// empty set and sets whose exact language a deterministic grammar cannot
// express (argument positions are independent per functor, so the set must
// be closed under recombination of argument subterms).
TypeGrammar grammar_of_terms(const std::vector<Term>& ts);

// Line-based grammar text:
//   L ::= nil | cons(A, L)
//   A ::= a | b
//   tuple X:L, Y:A
// '%' starts a comment. Production arguments must be nonterminal names
// (capitalized); alternatives are functor applications or constants.
struct GrammarFile {
    std::map<std::string, std::map<std::string, std::vector<std::string>>> prods;
    // One entry per `tuple` line: ordered (variable, nonterminal) pairs.
    std::vector<std::vector<std::pair<std::string, std::string>>> tuples;
};
GrammarFile parse_grammar_file(const std::string& text);

// A validated grammar over the file's productions with the given start.
TypeGrammar grammar_with_start(const GrammarFile& f, const std::string& start);

// The grammars of tuple #index, one per tuple component, in declaration order.
std::vector<TypeGrammar> tuple_grammars(const GrammarFile& f, size_t index);

}  // namespace absdist
