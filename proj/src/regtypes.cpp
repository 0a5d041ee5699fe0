#include "absdist/regtypes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "absdist/lattice.hpp"

namespace absdist {

namespace {

std::string functor_key(const std::string& name, size_t arity) {
    return name + "/" + std::to_string(arity);
}

bool is_nonterminal_name(const std::string& s) {
    return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void validate_grammar(const TypeGrammar& g) {
    if (!g.prods.count(g.start)) {
        throw std::invalid_argument("grammar: undefined start symbol " + g.start);
    }
    for (const auto& [nt, alts] : g.prods) {
        for (const auto& [f, args] : alts) {
            for (const std::string& a : args) {
                if (!g.prods.count(a)) {
                    throw std::invalid_argument("grammar: production for " + nt +
                                                " references undefined nonterminal " + a);
                }
            }
            (void)f;
        }
    }
    // Productivity: a nonterminal is productive when some production has all
    // arguments productive. Empty languages are rejected.
    std::set<std::string> productive;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [nt, alts] : g.prods) {
            if (productive.count(nt)) continue;
            for (const auto& [f, args] : alts) {
                bool ok = true;
                for (const std::string& a : args) {
                    if (!productive.count(a)) {
                        ok = false;
                        break;
                    }
                }
                (void)f;
                if (ok) {
                    productive.insert(nt);
                    grew = true;
                    break;
                }
            }
        }
    }
    for (const auto& [nt, alts] : g.prods) {
        (void)alts;
        if (!productive.count(nt)) {
            throw std::invalid_argument("grammar: nonterminal " + nt + " has an empty language");
        }
    }
}

double dprime(const TypeGrammar& g1, const TypeGrammar& g2, double p, double tol) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("dprime: p must be in (0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("dprime: tol must be positive");
    validate_grammar(g1);
    validate_grammar(g2);

    using Pair = std::pair<std::string, std::string>;
    std::map<Pair, double> val;
    std::set<Pair> matching;  // pairs with identical root functor sets
    std::vector<Pair> stack{{g1.start, g2.start}};
    while (!stack.empty()) {
        Pair pr = stack.back();
        stack.pop_back();
        if (val.count(pr)) continue;
        const auto& a1 = g1.prods.at(pr.first);
        const auto& a2 = g2.prods.at(pr.second);
        bool same = a1.size() == a2.size() &&
                    std::equal(a1.begin(), a1.end(), a2.begin(),
                               [](const auto& x, const auto& y) { return x.first == y.first; });
        if (!same) {
            val[pr] = 1.0;  // mismatched functor sets: fixed at distance 1
            continue;
        }
        val[pr] = 0.0;
        matching.insert(pr);
        for (const auto& [f, args1] : a1) {
            const auto& args2 = a2.at(f);
            for (size_t i = 0; i < args1.size(); ++i) stack.push_back({args1[i], args2[i]});
        }
    }

    int cap = static_cast<int>(std::ceil(std::log(tol) / std::log(p))) + 16;
    for (int iter = 0; iter < cap; ++iter) {
        std::map<Pair, double> next = val;
        double delta = 0.0;
        for (const Pair& pr : matching) {
            double nv = 0.0;
            const auto& a1 = g1.prods.at(pr.first);
            const auto& a2 = g2.prods.at(pr.second);
            for (const auto& [f, args1] : a1) {
                if (args1.empty()) continue;  // matching constants contribute 0
                const auto& args2 = a2.at(f);
                double sum = 0.0;
                for (size_t i = 0; i < args1.size(); ++i) sum += val.at({args1[i], args2[i]});
                nv = std::max(nv, p * sum / static_cast<double>(args1.size()));
            }
            delta = std::max(delta, std::abs(nv - next.at(pr)));
            next[pr] = nv;
        }
        val = std::move(next);
        if (delta < tol) break;
    }
    return val.at({g1.start, g2.start});
}

double regtuple_distance(const std::vector<TypeGrammar>& t1, const std::vector<TypeGrammar>& t2,
                         double p, double tol, bool normalize) {
    if (t1.size() != t2.size()) {
        throw std::invalid_argument("regtuple_distance: tuple length mismatch");
    }
    std::vector<double> ds;
    ds.reserve(t1.size());
    for (size_t i = 0; i < t1.size(); ++i) ds.push_back(dprime(t1[i], t2[i], p, tol));
    return product_distance(ds, normalize);
}

namespace {

struct LangMemo {
    const TypeGrammar& g;
    // (nonterminal, cap) -> (terms, complete)
    std::map<std::pair<std::string, int>, std::pair<std::set<Term>, bool>> memo;

    const std::pair<std::set<Term>, bool>& lang(const std::string& nt, int cap) {
        auto key = std::make_pair(nt, cap);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::set<Term> out;
        bool complete = cap > 0;
        if (cap > 0) {
            for (const auto& [f, args] : g.prods.at(nt)) {
                size_t slash = f.rfind('/');
                std::string fname = f.substr(0, slash);
                if (args.empty()) {
                    out.insert(Term::constant(fname));
                    continue;
                }
                std::vector<const std::set<Term>*> sets;
                bool viable = true;
                for (const std::string& a : args) {
                    const auto& sub = lang(a, cap - 1);
                    complete = complete && sub.second;
                    if (sub.first.empty()) viable = false;
                    sets.push_back(&sub.first);
                }
                if (!viable) continue;
                // Cartesian product over argument languages (odometer loop).
                std::vector<std::set<Term>::const_iterator> its;
                for (const auto* s : sets) its.push_back(s->begin());
                bool more = true;
                while (more) {
                    std::vector<Term> kids;
                    kids.reserve(its.size());
                    for (const auto& i2 : its) kids.push_back(*i2);
                    out.insert(Term::compound(fname, std::move(kids)));
                    more = false;
                    size_t k = its.size();
                    while (k > 0) {
                        --k;
                        if (++its[k] != sets[k]->end()) {
                            more = true;
                            break;
                        }
                        its[k] = sets[k]->begin();
                    }
                }
            }
        }
        auto [mit, _] = memo.emplace(key, std::make_pair(std::move(out), complete));
        return mit->second;
    }
};

}  // namespace

FiniteLanguage finite_language(const TypeGrammar& g, int depth_cap) {
    if (depth_cap < 1) throw std::invalid_argument("finite_language: depth_cap must be >= 1");
    validate_grammar(g);
    LangMemo lm{g, {}};
    const auto& [terms, complete] = lm.lang(g.start, depth_cap);
    FiniteLanguage fl;
    fl.terms.assign(terms.begin(), terms.end());
    fl.exhausted = complete;
    return fl;
}

namespace {

struct GrammarBuilder {
    TypeGrammar g;
    std::map<std::set<Term>, std::string> names;
    int counter = 0;

    std::string nt_for(const std::set<Term>& ts) {
        auto it = names.find(ts);
        if (it != names.end()) return it->second;
        std::string name = "T" + std::to_string(counter++);
        names.emplace(ts, name);
        auto& alts = g.prods[name];
        // Group by root functor; each argument position gets the set of
        // subterms seen there.
        std::map<std::string, std::vector<std::set<Term>>> by_functor;
        for (const Term& t : ts) {
            auto& slots = by_functor[functor_key(t.name, t.args.size())];
            slots.resize(t.args.size());
            for (size_t i = 0; i < t.args.size(); ++i) slots[i].insert(t.args[i]);
        }
        for (const auto& [f, slots] : by_functor) {
            std::vector<std::string> args;
            args.reserve(slots.size());
            for (const std::set<Term>& s : slots) args.push_back(nt_for(s));
            alts.emplace(f, std::move(args));
        }
        return name;
    }
};

int term_depth(const Term& t) {
    int d = 0;
    for (const Term& a : t.args) d = std::max(d, term_depth(a));
    return d + 1;
}

}  // namespace

TypeGrammar grammar_of_terms(const std::vector<Term>& ts) {
    if (ts.empty()) throw std::invalid_argument("grammar_of_terms: empty term set");
    std::set<Term> set;
    int depth = 0;
    for (const Term& t : ts) {
        if (!t.is_ground()) throw std::invalid_argument("grammar_of_terms: terms must be ground");
        set.insert(t);
        depth = std::max(depth, term_depth(t));
    }
    GrammarBuilder gb;
    gb.g.start = gb.nt_for(set);
    FiniteLanguage fl = finite_language(gb.g, depth);
    if (!fl.exhausted || std::set<Term>(fl.terms.begin(), fl.terms.end()) != set) {
        throw std::invalid_argument(
            "grammar_of_terms: term set is not expressible as a deterministic grammar "
            "(argument positions must be independent per functor)");
    }
    return gb.g;
}

namespace {

// One production alternative: `nil` or `cons(A, L)`; arguments must be
// nonterminal names.
void add_alternative(GrammarFile& f, const std::string& nt, const std::string& text, int lineno) {
    Term t;
    try {
        t = parse_term(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                    ": bad production: " + e.what());
    }
    if (t.kind == Term::Kind::Var) {
        throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                    ": production must be a functor application, got nonterminal " +
                                    t.name);
    }
    std::vector<std::string> args;
    for (const Term& a : t.args) {
        if (a.kind != Term::Kind::Var) {
            throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                        ": production arguments must be nonterminal names");
        }
        args.push_back(a.name);
    }
    auto& alts = f.prods[nt];
    std::string key = functor_key(t.name, t.args.size());
    if (alts.count(key)) {
        throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                    ": nondeterministic grammar: duplicate production " + nt +
                                    " -> " + key);
    }
    alts.emplace(std::move(key), std::move(args));
}

}  // namespace

GrammarFile parse_grammar_file(const std::string& text) {
    GrammarFile f;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cm = line.find('%');
        if (cm != std::string::npos) line = line.substr(0, cm);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("tuple", 0) == 0 &&
            (line.size() == 5 || line[5] == ' ' || line[5] == '\t')) {
            std::vector<std::pair<std::string, std::string>> comps;
            std::istringstream ts(line.substr(5));
            std::string item;
            while (std::getline(ts, item, ',')) {
                item = trim(item);
                size_t colon = item.find(':');
                if (colon == std::string::npos) {
                    throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                                ": tuple component must be Var:Nonterminal");
                }
                comps.emplace_back(trim(item.substr(0, colon)), trim(item.substr(colon + 1)));
            }
            if (comps.empty()) {
                throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                            ": empty tuple");
            }
            f.tuples.push_back(std::move(comps));
            continue;
        }
        size_t sep = line.find("::=");
        if (sep == std::string::npos) {
            throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                        ": expected `Nonterminal ::= ...` or `tuple ...`");
        }
        std::string nt = trim(line.substr(0, sep));
        if (!is_nonterminal_name(nt)) {
            throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                        ": nonterminal names must be capitalized: " + nt);
        }
        std::string rhs = line.substr(sep + 3);
        size_t start = 0;
        while (true) {
            size_t bar = rhs.find('|', start);
            std::string alt =
                bar == std::string::npos ? rhs.substr(start) : rhs.substr(start, bar - start);
            alt = trim(alt);
            if (alt.empty()) {
                throw std::invalid_argument("grammar line " + std::to_string(lineno) +
                                            ": empty production alternative");
            }
            add_alternative(f, nt, alt, lineno);
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
    }
    return f;
}

TypeGrammar grammar_with_start(const GrammarFile& f, const std::string& start) {
    TypeGrammar g;
    g.start = start;
    g.prods = f.prods;
    validate_grammar(g);
    return g;
}

std::vector<TypeGrammar> tuple_grammars(const GrammarFile& f, size_t index) {
    if (index >= f.tuples.size()) throw std::invalid_argument("tuple index out of range");
    std::vector<TypeGrammar> out;
    out.reserve(f.tuples[index].size());
    for (const auto& [var, nt] : f.tuples[index]) {
        (void)var;
        out.push_back(grammar_with_start(f, nt));
    }
    return out;
}

}  // namespace absdist
