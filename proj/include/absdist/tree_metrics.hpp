// Whole-analysis distances over AND-OR graphs: root-only (top), per-program-
// point (flat), and the recursive tree distance solved as a linear system
// over the reachable node-pair graph. Also the position-wise intersection of
// analyses, translation into a base domain, and the symbol-count size
// measure used by the benchmark harness.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "absdist/analyzer.hpp"

namespace absdist {

struct IncompatibleAnalyses : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DistanceReport {
    std::string metric;
    double mu = 0.0;  // meaningful for the tree metric only
    double value = 0.0;
    // flat: program point -> distance; tree: "idA,idB" pair -> solved value.
    std::map<std::string, double> per_point;
    int pairs_solved = 0;
    int iterations = 0;

    nlohmann::json to_json() const;
};

enum class TreeSolver { Iterative, Direct };

struct TreeDistParams {
    double mu = 0.2;
    TreeSolver solver = TreeSolver::Iterative;
    double tol = 1e-9;
};

// Program-point weights for the flat distance; must sum to 1.
using FlatWeights = std::map<std::string, double>;

// Parses lines of `pp,weight` (optional literal `pp,weight` header, '%' or
// '#' comments allowed).
FlatWeights parse_weights_csv(const std::string& text);

// Distance between the root success substitutions only.
double top_distance(const AndOrGraph& a, const AndOrGraph& b);

// Per program point: half the sum of the distances between the joins of all
// call substitutions and of all success substitutions at that point; a point
// reachable in only one of the graphs scores 1. Aggregate is the weighted
// sum (uniform over the union of points by default).
DistanceReport flat_distance(const AndOrGraph& a, const AndOrGraph& b,
                             const std::optional<FlatWeights>& weights = std::nullopt);

// Recursive distance X(n1,n2) = mu*l + (1-mu)*avg of child-pair values,
// l = ½(d(call1,call2)+d(succ1,succ2)), X = l at leaves; the cyclic graphs
// make this a strictly diagonally dominant linear system over node pairs.
DistanceReport tree_distance(const AndOrGraph& a, const AndOrGraph& b,
                             const TreeDistParams& params = {});

// Position-wise meet of the analyses (all over one domain); the result's
// node at each position is the greatest lower bound of the inputs' nodes.
AndOrGraph intersect(const std::vector<AndOrGraph>& gs);

// Translates every substitution into the base domain; shape unchanged.
AndOrGraph translate_base(const AndOrGraph& g, Domain base);

// Total number of functor/constant symbols in the canonical term renderings
// of all stored call and success substitutions.
long analysis_size(const AndOrGraph& g);

}  // namespace absdist
