#include "absdist/tree_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Dense>

namespace absdist {

namespace {

void require_compatible(const AndOrGraph& a, const AndOrGraph& b) {
    if (a.domain != b.domain) {
        throw IncompatibleAnalyses("analyses use different domains; translate to a base first");
    }
    if (a.entry_pp != b.entry_pp || !(a.entry_literal == b.entry_literal)) {
        throw IncompatibleAnalyses("analyses have different entry points");
    }
}

double node_local_distance(const OrNode& x, const OrNode& y) {
    return 0.5 * (ab_distance(x.call, y.call) + ab_distance(x.success, y.success));
}

}  // namespace

nlohmann::json DistanceReport::to_json() const {
    nlohmann::json pp = nlohmann::json::object();
    for (const auto& [k, v] : per_point) pp[k] = v;
    return {{"metric", metric},     {"mu", mu},
            {"value", value},       {"per_point", pp},
            {"pairs_solved", pairs_solved}, {"iterations", iterations}};
}

FlatWeights parse_weights_csv(const std::string& text) {
    FlatWeights w;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cm = line.find_first_of("%#");
        if (cm != std::string::npos) line = line.substr(0, cm);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (line == "pp,weight") continue;
        size_t comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("weights line " + std::to_string(lineno) +
                                        ": expected pp,weight");
        }
        std::string pp = line.substr(0, comma);
        double val;
        try {
            val = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("weights line " + std::to_string(lineno) +
                                        ": bad weight value");
        }
        if (val < 0) {
            throw std::invalid_argument("weights line " + std::to_string(lineno) +
                                        ": weights must be non-negative");
        }
        if (!w.emplace(pp, val).second) {
            throw std::invalid_argument("weights line " + std::to_string(lineno) +
                                        ": duplicate program point " + pp);
        }
    }
    double sum = 0;
    for (const auto& [k, v] : w) {
        (void)k;
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("weights must sum to 1 (got " + std::to_string(sum) + ")");
    }
    return w;
}

double top_distance(const AndOrGraph& a, const AndOrGraph& b) {
    require_compatible(a, b);
    return ab_distance(a.node(a.root_id).success, b.node(b.root_id).success);
}

DistanceReport flat_distance(const AndOrGraph& a, const AndOrGraph& b,
                             const std::optional<FlatWeights>& weights) {
    require_compatible(a, b);
    // Joins of call/success substitutions per program point, per graph.
    struct Joined {
        std::optional<AbstractSub> call, succ;
    };
    std::map<std::string, std::pair<Joined, Joined>> pps;
    auto fold = [&](const AndOrGraph& g, bool second) {
        for (const OrNode& n : g.nodes) {
            Joined& j = second ? pps[n.pp].second : pps[n.pp].first;
            j.call = j.call ? ab_join(*j.call, n.call) : n.call;
            j.succ = j.succ ? ab_join(*j.succ, n.success) : n.success;
        }
    };
    fold(a, false);
    fold(b, true);

    DistanceReport rep;
    rep.metric = "flat";
    for (const auto& [pp, sides] : pps) {
        double d;
        if (!sides.first.call || !sides.second.call) {
            d = 1.0;  // reachable in only one analysis
        } else {
            d = 0.5 * (ab_distance(*sides.first.call, *sides.second.call) +
                       ab_distance(*sides.first.succ, *sides.second.succ));
        }
        rep.per_point.emplace(pp, d);
    }
    if (weights) {
        for (const auto& [pp, w] : *weights) {
            (void)w;
            if (!rep.per_point.count(pp)) {
                throw std::invalid_argument("weights reference unknown program point " + pp);
            }
        }
        double total = 0;
        for (const auto& [pp, w] : *weights) total += w * rep.per_point.at(pp);
        rep.value = total;
    } else {
        double total = 0;
        for (const auto& [pp, d] : rep.per_point) {
            (void)pp;
            total += d;
        }
        rep.value = rep.per_point.empty() ? 0.0 : total / static_cast<double>(rep.per_point.size());
    }
    rep.pairs_solved = static_cast<int>(rep.per_point.size());
    return rep;
}

namespace {

struct PairRec {
    int a = 0, b = 0;
    double local = 0;
    std::vector<int> children;  // indices into the pair vector
};

// Enumerates the reachable pair graph from the two roots. Aligned non-leaf
// nodes must expose identical (clause, literal) child keys; a leaf on either
// side ends the recursion at that pair.
std::vector<PairRec> build_pairs(const AndOrGraph& a, const AndOrGraph& b) {
    std::map<std::pair<int, int>, int> index;
    std::vector<PairRec> pairs;
    std::deque<std::pair<int, int>> queue;
    auto intern = [&](int x, int y) {
        auto key = std::make_pair(x, y);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(pairs.size());
        index.emplace(key, id);
        PairRec pr;
        pr.a = x;
        pr.b = y;
        pr.local = node_local_distance(a.node(x), b.node(y));
        pairs.push_back(std::move(pr));
        queue.push_back(key);
        return id;
    };
    intern(a.root_id, b.root_id);
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        int self = index.at({x, y});
        const auto& ca = a.children_of(x);
        const auto& cb = b.children_of(y);
        if (ca.empty() || cb.empty()) continue;  // leaf pair
        if (ca.size() != cb.size() ||
            !std::equal(ca.begin(), ca.end(), cb.begin(),
                        [](const auto& l, const auto& r) { return l.first == r.first; })) {
            throw IncompatibleAnalyses("analysis graphs have mismatched shapes at node pair " +
                                       std::to_string(x) + "," + std::to_string(y));
        }
        std::vector<int> kids;
        kids.reserve(ca.size());
        for (const auto& [key, ax] : ca) kids.push_back(intern(ax, cb.at(key)));
        pairs[self].children = std::move(kids);
    }
    return pairs;
}

}  // namespace

DistanceReport tree_distance(const AndOrGraph& a, const AndOrGraph& b,
                             const TreeDistParams& params) {
    require_compatible(a, b);
    if (!(params.mu > 0.0 && params.mu <= 1.0)) {
        throw std::invalid_argument("tree_distance: mu must be in (0,1]");
    }
    if (!(params.tol > 0.0)) throw std::invalid_argument("tree_distance: tol must be positive");
    std::vector<PairRec> pairs = build_pairs(a, b);
    size_t n = pairs.size();
    std::vector<double> x(n, 0.0);
    double mu = params.mu;
    int iterations = 0;

    if (params.solver == TreeSolver::Iterative) {
        // Gauss-Seidel; the system contracts with factor (1-mu), so the
        // iteration count needed for tol is known up front.
        int cap = 100000;
        if (mu < 1.0) {
            cap = static_cast<int>(std::ceil(std::log(params.tol) / std::log(1.0 - mu))) + 16;
        } else {
            cap = 2;
        }
        for (int it = 0; it < cap; ++it) {
            double delta = 0;
            for (size_t i = 0; i < n; ++i) {
                double nv;
                if (pairs[i].children.empty()) {
                    nv = pairs[i].local;
                } else {
                    double sum = 0;
                    for (int c : pairs[i].children) sum += x[static_cast<size_t>(c)];
                    nv = mu * pairs[i].local +
                         (1.0 - mu) * sum / static_cast<double>(pairs[i].children.size());
                }
                delta = std::max(delta, std::abs(nv - x[i]));
                x[i] = nv;
            }
            ++iterations;
            if (delta < params.tol) break;
        }
    } else {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
        for (size_t i = 0; i < n; ++i) {
            if (pairs[i].children.empty()) {
                rhs(static_cast<Eigen::Index>(i)) = pairs[i].local;
                continue;
            }
            rhs(static_cast<Eigen::Index>(i)) = mu * pairs[i].local;
            double w = (1.0 - mu) / static_cast<double>(pairs[i].children.size());
            for (int c : pairs[i].children) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) -= w;
            }
        }
        Eigen::VectorXd sol = m.partialPivLu().solve(rhs);
        for (size_t i = 0; i < n; ++i) x[i] = sol(static_cast<Eigen::Index>(i));
        iterations = 1;
    }

    DistanceReport rep;
    rep.metric = "tree";
    rep.mu = mu;
    rep.value = x.empty() ? 0.0 : x[0];
    rep.pairs_solved = static_cast<int>(n);
    rep.iterations = iterations;
    for (size_t i = 0; i < n; ++i) {
        rep.per_point.emplace(std::to_string(pairs[i].a) + "," + std::to_string(pairs[i].b), x[i]);
    }
    return rep;
}

namespace {

AndOrGraph product(const AndOrGraph& a, const AndOrGraph& b) {
    require_compatible(a, b);
    AndOrGraph g;
    g.domain = a.domain;
    g.entry_pp = a.entry_pp;
    g.entry_literal = a.entry_literal;
    g.widen_threshold = std::nullopt;
    std::map<std::pair<int, int>, int> index;
    std::deque<std::pair<int, int>> queue;
    auto intern = [&](int x, int y) {
        auto key = std::make_pair(x, y);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const OrNode& nx = a.node(x);
        const OrNode& ny = b.node(y);
        if (nx.pp != ny.pp || !(nx.literal == ny.literal)) {
            throw IncompatibleAnalyses("analysis graphs have mismatched shapes at node pair " +
                                       std::to_string(x) + "," + std::to_string(y));
        }
        OrNode n;
        n.id = static_cast<int>(g.nodes.size()) + 1;
        n.pp = nx.pp;
        n.literal = nx.literal;
        n.call = ab_meet(nx.call, ny.call);
        n.success = ab_meet(nx.success, ny.success);
        g.nodes.push_back(std::move(n));
        index.emplace(key, g.nodes.back().id);
        queue.push_back(key);
        return g.nodes.back().id;
    };
    g.root_id = intern(a.root_id, b.root_id);
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        int self = index.at({x, y});
        const auto& ca = a.children_of(x);
        const auto& cb = b.children_of(y);
        if (ca.empty() || cb.empty()) continue;
        if (ca.size() != cb.size() ||
            !std::equal(ca.begin(), ca.end(), cb.begin(),
                        [](const auto& l, const auto& r) { return l.first == r.first; })) {
            throw IncompatibleAnalyses("analysis graphs have mismatched shapes at node pair " +
                                       std::to_string(x) + "," + std::to_string(y));
        }
        for (const auto& [key, ax] : ca) {
            g.children[self][key] = intern(ax, cb.at(key));
        }
    }
    return g;
}

}  // namespace

AndOrGraph intersect(const std::vector<AndOrGraph>& gs) {
    if (gs.empty()) throw std::invalid_argument("intersect: need at least one analysis");
    AndOrGraph acc = gs[0];
    for (size_t i = 1; i < gs.size(); ++i) acc = product(acc, gs[i]);
    return acc;
}

AndOrGraph translate_base(const AndOrGraph& g, Domain base) {
    AndOrGraph out;
    out.domain = base;
    out.entry_pp = g.entry_pp;
    out.entry_literal = g.entry_literal;
    out.root_id = g.root_id;
    out.children = g.children;
    out.widen_threshold = g.widen_threshold;
    out.nodes.reserve(g.nodes.size());
    for (const OrNode& n : g.nodes) {
        OrNode t = n;
        t.call = translate_sub(n.call, base);
        t.success = translate_sub(n.success, base);
        t.variant.clear();
        out.nodes.push_back(std::move(t));
    }
    return out;
}

long analysis_size(const AndOrGraph& g) {
    long total = 0;
    for (const OrNode& n : g.nodes) {
        total += ab_symbol_size(n.call) + ab_symbol_size(n.success);
    }
    return total;
}

}  // namespace absdist
