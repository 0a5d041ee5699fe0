// Generic lattice/metric building blocks: the size-based metric construction,
// Hausdorff lifting, Cartesian-product combination, distances induced through
// an abstraction/concretization pair, and an enumeration-based property
// checker for metric axioms, order-preservation and the diamond inequality.
//
// Everything here is templated over small enumerable domains; the concrete
// abstract domains instantiate these combinators and the property checker
// validates them exhaustively in the tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace absdist {

// How strong a claim a distance function makes about itself.
enum class MetricClass { Metric, Pseudometric };

// Bundle of lattice operations for an element type E. Functions may be left
// empty when a check that needs them is not requested.
template <typename E>
struct LatticeOps {
    std::function<bool(const E&, const E&)> leq;
    std::function<E(const E&, const E&)> join;
    std::function<E(const E&, const E&)> meet;
};

// d(x,y) = size(x join y) - size(x meet y). A metric whenever size is monotone
// and modular; monotonicity alone already gives non-negativity, which we
// enforce as a contract check.
template <typename E>
double size_metric(const std::function<double(const E&)>& size,
                   const LatticeOps<E>& ops, const E& a, const E& b) {
    double d = size(ops.join(a, b)) - size(ops.meet(a, b));
    if (d < 0.0)
        throw std::logic_error("size_metric: negative distance (size is not monotone)");
    return d;
}

// Hausdorff distance between finite non-empty sets under an element metric:
// max of the two directed sup-inf values.
template <typename E>
double hausdorff(const std::function<double(const E&, const E&)>& d,
                 const std::vector<E>& a, const std::vector<E>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff: sets must be non-empty");
    auto directed = [&](const std::vector<E>& from, const std::vector<E>& to) {
        double worst = 0.0;
        for (const E& x : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const E& y : to)
                best = std::min(best, d(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

// 2-norm combination of per-component distances; with normalize the result is
// divided by sqrt(n) so it stays in [0,1] when every component is in [0,1].
// An empty vector is the distance between empty tuples: 0.
inline double product_distance(const std::vector<double>& ds, bool normalize) {
    if (ds.empty())
        return 0.0;
    double sq = 0.0;
    for (double d : ds) {
        if (d < 0.0)
            throw std::invalid_argument("product_distance: negative component");
        sq += d * d;
    }
    double norm = std::sqrt(sq);
    return normalize ? norm / std::sqrt(static_cast<double>(ds.size())) : norm;
}

// Abstraction/concretization pair between an enumerable concrete domain C
// (handled as explicit finite sets) and an abstract domain A.
template <typename C, typename A>
struct GaloisPair {
    std::function<A(const std::set<C>&)> alpha;
    std::function<std::set<C>(const A&)> gamma;
    bool insertion = false;   // alpha(gamma(a)) == a for all abstract a
};

// Distance on concrete sets induced through alpha: d^alpha(S,T) = d(alpha(S),
// alpha(T)).  Always at least a pseudometric when d is one; identity of
// indiscernibles is lost whenever alpha identifies distinct sets.
template <typename C, typename A>
std::function<double(const std::set<C>&, const std::set<C>&)>
induced_concrete_distance(const GaloisPair<C, A>& g,
                          const std::function<double(const A&, const A&)>& d) {
    return [g, d](const std::set<C>& s, const std::set<C>& t) {
        return d(g.alpha(s), g.alpha(t));
    };
}

// Distance on abstract elements induced through gamma: d^gamma(a,b) =
// d(gamma(a), gamma(b)).  A pseudometric in general; a full metric when the
// pair is an insertion (gamma is then injective).
template <typename C, typename A>
std::function<double(const A&, const A&)>
induced_abstract_distance(const GaloisPair<C, A>& g,
                          const std::function<double(const std::set<C>&,
                                                     const std::set<C>&)>& d) {
    return [g, d](const A& a, const A& b) { return d(g.gamma(a), g.gamma(b)); };
}

template <typename C, typename A>
MetricClass induced_metric_class(const GaloisPair<C, A>& g) {
    return g.insertion ? MetricClass::Metric : MetricClass::Pseudometric;
}

// --- property checker -------------------------------------------------------

struct PropertyViolation {
    std::string property;   // which law failed
    std::string witness;    // rendering of the offending elements
};

struct MetricReport {
    int nonneg = 0;
    int symmetry = 0;
    int triangle = 0;
    int weak_identity = 0;       // d(x,x) != 0
    int strong_identity = 0;     // d(x,y) == 0 with x != y (pseudometric slack)
    int order_preservation = 0;  // a<=b<=c but d(a,b) > d(a,c) or d(b,c) > d(a,c)
    int diamond = 0;             // d(x,y) > d(x meet y, x join y)
    std::vector<PropertyViolation> examples;   // first few witnesses

    // Violations of the actual metric axioms (strong identity excluded: its
    // absence only demotes a metric to a pseudometric).
    int metric_axiom_violations() const {
        return nonneg + symmetry + triangle + weak_identity;
    }
    bool pseudometric_ok() const { return metric_axiom_violations() == 0; }
    bool metric_ok() const { return pseudometric_ok() && strong_identity == 0; }
};

// Exhaustively checks d over all pairs/triples of the sample. Order
// preservation and the diamond inequality are only checked when the needed
// lattice operations are supplied. tol is the absolute comparison slack.
template <typename E>
MetricReport check_metric_properties(
    const std::vector<E>& sample,
    const std::function<double(const E&, const E&)>& d,
    const LatticeOps<E>& ops = {},
    const std::function<std::string(const E&)>& show = {},
    double tol = 1e-9) {
    MetricReport rep;
    auto witness = [&](const std::string& prop, std::initializer_list<const E*> es) {
        if (rep.examples.size() >= 8)
            return;
        std::ostringstream os;
        if (show) {
            bool first = true;
            for (const E* e : es) {
                if (!first) os << " ; ";
                os << show(*e);
                first = false;
            }
        } else {
            os << "(no renderer)";
        }
        rep.examples.push_back({prop, os.str()});
    };

    const size_t n = sample.size();
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(d(sample[i], sample[i])) > tol) {
            ++rep.weak_identity;
            witness("weak-identity", {&sample[i]});
        }
        for (size_t j = 0; j < n; ++j) {
            double dij = d(sample[i], sample[j]);
            if (dij < -tol) {
                ++rep.nonneg;
                witness("non-negativity", {&sample[i], &sample[j]});
            }
            if (std::abs(dij - d(sample[j], sample[i])) > tol) {
                ++rep.symmetry;
                witness("symmetry", {&sample[i], &sample[j]});
            }
            if (i != j && std::abs(dij) <= tol)
                ++rep.strong_identity;   // recorded, not a metric-axiom failure
            if (ops.join && ops.meet) {
                double dmj = d(ops.meet(sample[i], sample[j]),
                               ops.join(sample[i], sample[j]));
                if (dij > dmj + tol) {
                    ++rep.diamond;
                    witness("diamond", {&sample[i], &sample[j]});
                }
            }
        }
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double dij = d(sample[i], sample[j]);
            for (size_t k = 0; k < n; ++k) {
                if (dij > d(sample[i], sample[k]) + d(sample[k], sample[j]) + tol) {
                    ++rep.triangle;
                    witness("triangle", {&sample[i], &sample[j], &sample[k]});
                }
            }
        }
    if (ops.leq) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (!ops.leq(sample[i], sample[j]))
                    continue;
                for (size_t k = 0; k < n; ++k) {
                    if (!ops.leq(sample[j], sample[k]))
                        continue;
                    double dac = d(sample[i], sample[k]);
                    if (d(sample[i], sample[j]) > dac + tol ||
                        d(sample[j], sample[k]) > dac + tol) {
                        ++rep.order_preservation;
                        witness("order-preservation",
                                {&sample[i], &sample[j], &sample[k]});
                    }
                }
            }
    }
    return rep;
}

}  // namespace absdist
