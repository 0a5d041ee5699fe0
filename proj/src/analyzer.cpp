#include "absdist/analyzer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "absdist/groundness.hpp"
#include "absdist/sharing.hpp"

namespace absdist {

namespace {

// Call/success patterns live over positional pseudo-variables $1..$k so that
// memo entries are independent of the caller's variable names. '$' cannot
// start a source-level variable, so no clash with clause variables.
std::string pos_var(size_t i) { return "$" + std::to_string(i + 1); }

std::vector<std::string> pos_scope(size_t n) {
    std::vector<std::string> s;
    s.reserve(n);
    for (size_t i = 0; i < n; ++i) s.push_back(pos_var(i));
    std::sort(s.begin(), s.end());
    return s;
}

// All variables of a clause, head first, in first-occurrence order.
std::vector<std::string> collect_clause_vars(const Clause& c) {
    std::vector<std::string> vs = term_vars(c.head);
    for (const Term& l : c.body) {
        for (const std::string& v : term_vars(l)) {
            if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
        }
    }
    return vs;
}

std::string canon_name(size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('A' + i));
    return "V" + std::to_string(i);
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& ren) {
    if (t.kind == Term::Kind::Var) return Term::var(ren.at(t.name));
    if (t.kind == Term::Kind::Const) return t;
    std::vector<Term> args;
    args.reserve(t.args.size());
    for (const Term& a : t.args) args.push_back(rename_term(a, ren));
    return Term::compound(t.name, std::move(args));
}

AbstractSub rename_sub(const AbstractSub& s, const std::map<std::string, std::string>& ren) {
    if (const auto* g = std::get_if<GroundSub>(&s)) {
        if (g->bot) return GroundSub::bottom();
        GroundSub out;
        for (const auto& [v, val] : g->vals) out.set(ren.at(v), val);
        return out;
    }
    const auto& sh = std::get<SharingSub>(s);
    std::vector<std::string> scope;
    scope.reserve(sh.scope.size());
    for (const std::string& v : sh.scope) scope.push_back(ren.at(v));
    if (sh.bot) return SharingSub::bottom(std::move(scope));
    GroupSet groups;
    for (const VarGroup& grp : sh.groups) {
        VarGroup rg;
        for (const std::string& v : grp) rg.insert(ren.at(v));
        groups.insert(std::move(rg));
    }
    return SharingSub::of(std::move(scope), std::move(groups));
}

struct Engine {
    const Program& prog;
    AnalyzeOptions opts;
    Domain dom;

    std::map<std::string, AbstractSub> memo;  // variant key -> success pattern
    std::set<std::string> in_stack;
    std::set<std::string> evaluated;  // refreshed once per global pass
    bool changed = false;
    bool building = false;

    AndOrGraph graph;
    std::map<std::string, int> node_index;  // pp + "|" + rendered call -> id
    std::set<std::string> expanded;

    Engine(const Program& p, const AnalyzeOptions& o) : prog(p), opts(o), dom(o.domain) {}

    // Bottom carries a scope in the sharing domain, so every producer states
    // which variables the (empty) description ranges over.
    AbstractSub bottom_over(std::vector<std::string> vars) const {
        if (dom == Domain::Gr) return GroundSub::bottom();
        return SharingSub::bottom(std::move(vars));
    }

    std::vector<std::string> scope_of(const AbstractSub& s) const {
        if (const auto* sh = std::get_if<SharingSub>(&s)) return sh->scope;
        return {};
    }

    AbstractSub maybe_widen(const AbstractSub& pat) const {
        if (dom != Domain::Share || !opts.widen_share) return pat;
        return sh_widen(std::get<SharingSub>(pat), ShWidenParams{*opts.widen_share});
    }

    std::string variant_key(const std::string& name, size_t arity, const AbstractSub& pat) const {
        return name + "/" + std::to_string(arity) + "|" + ab_render(pat);
    }

    // Abstract call pattern of a literal under the current substitution,
    // expressed over $1..$k.
    AbstractSub call_pattern(const Term& lit, const AbstractSub& sub) const {
        size_t n = lit.args.size();
        if (dom == Domain::Gr) {
            const auto& g = std::get<GroundSub>(sub);
            if (g.bot) return GroundSub::bottom();
            GroundSub pat;
            for (size_t i = 0; i < n; ++i) pat.set(pos_var(i), gr_term_val(lit.args[i], g));
            return pat;
        }
        const auto& s = std::get<SharingSub>(sub);
        if (s.bot) return SharingSub::bottom(pos_scope(n));
        GroupSet groups;
        for (const VarGroup& grp : s.groups) {
            VarGroup img;
            for (size_t i = 0; i < n; ++i) {
                for (const std::string& v : term_vars(lit.args[i])) {
                    if (grp.count(v)) {
                        img.insert(pos_var(i));
                        break;
                    }
                }
            }
            if (!img.empty()) groups.insert(std::move(img));
        }
        return SharingSub::of(pos_scope(n), std::move(groups));
    }

    // Entry substitution of a clause for a given call pattern. Fresh clause
    // variables start unbound; head unification folds the pattern in. For
    // sharing, the positional variables stay in scope through the body and
    // carry the answer sharing back out.
    AbstractSub clause_entry(const Clause& c, const AbstractSub& pat) const {
        std::vector<std::string> cvars = collect_clause_vars(c);
        size_t n = c.head.args.size();
        if (dom == Domain::Gr) {
            const auto& p = std::get<GroundSub>(pat);
            if (p.bot) return GroundSub::bottom();
            GroundSub sub;
            for (const std::string& v : cvars) sub.set(v, GroundVal::NG);
            for (size_t i = 0; i < n; ++i) gr_bind_term(c.head.args[i], p.at(pos_var(i)), sub);
            return sub;
        }
        const auto& p = std::get<SharingSub>(pat);
        std::vector<std::string> bscope = pos_scope(n);
        bscope.insert(bscope.end(), cvars.begin(), cvars.end());
        if (p.bot) return SharingSub::bottom(std::move(bscope));
        std::vector<std::string> scope = std::move(bscope);
        GroupSet groups = p.groups;
        for (const std::string& v : cvars) groups.insert(VarGroup{v});
        SharingSub sub = SharingSub::of(std::move(scope), std::move(groups));
        for (size_t i = 0; i < n && !sub.bot; ++i) {
            sub = sh_unify(Term::var(pos_var(i)), c.head.args[i], sub);
        }
        return sub;
    }

    // Success pattern of a clause from its exit substitution.
    AbstractSub exit_pattern(const Clause& c, const AbstractSub& ex) const {
        size_t n = c.head.args.size();
        if (dom == Domain::Gr) {
            const auto& g = std::get<GroundSub>(ex);
            if (g.bot) return GroundSub::bottom();
            GroundSub pat;
            for (size_t i = 0; i < n; ++i) pat.set(pos_var(i), gr_term_val(c.head.args[i], g));
            return pat;
        }
        const auto& s = std::get<SharingSub>(ex);
        if (s.bot) return SharingSub::bottom(pos_scope(n));
        return s.project(pos_scope(n));
    }

    // Propagate a callee success pattern back into the caller substitution.
    AbstractSub extend(const AbstractSub& sub, const Term& lit, const AbstractSub& succ) const {
        if (ab_is_bot(sub) || ab_is_bot(succ)) return bottom_over(scope_of(sub));
        size_t n = lit.args.size();
        if (dom == Domain::Gr) {
            GroundSub out = std::get<GroundSub>(sub);
            const auto& sp = std::get<GroundSub>(succ);
            for (size_t i = 0; i < n; ++i) {
                const Term& t = lit.args[i];
                GroundVal sv = sp.at(pos_var(i));
                if (sv == GroundVal::G) {
                    for (const std::string& v : term_vars(t)) out.set(v, GroundVal::G);
                } else if (t.kind == Term::Kind::Var) {
                    out.set(t.name, gr_extend_var(out.at(t.name), sv));
                } else {
                    // Nonground/unknown compound: member variables may or may
                    // not have been bound; only definite groundness survives.
                    for (const std::string& v : term_vars(t)) {
                        if (out.at(v) != GroundVal::G) out.set(v, GroundVal::Any);
                    }
                }
            }
            return out;
        }
        const auto& s = std::get<SharingSub>(sub);
        const auto& sp = std::get<SharingSub>(succ);
        std::vector<std::string> lvars = term_vars(lit);
        GroupSet rel, nonrel;
        for (const VarGroup& grp : s.groups) {
            bool touches = false;
            for (const std::string& v : lvars) {
                if (grp.count(v)) {
                    touches = true;
                    break;
                }
            }
            (touches ? rel : nonrel).insert(grp);
        }
        // A group survives iff its projection onto the argument positions is
        // an answer sharing group of the callee.
        GroupSet keep = nonrel;
        for (const VarGroup& grp : sh_star(rel)) {
            VarGroup img;
            for (size_t i = 0; i < n; ++i) {
                for (const std::string& v : term_vars(lit.args[i])) {
                    if (grp.count(v)) {
                        img.insert(pos_var(i));
                        break;
                    }
                }
            }
            if (sp.groups.count(img)) keep.insert(grp);
        }
        return SharingSub::of(s.scope, std::move(keep));
    }

    // Most general success for a predicate nothing is known about: groundness
    // is kept, everything else may have been aliased or bound.
    AbstractSub unknown_success(const AbstractSub& sub, const Term& lit) const {
        if (ab_is_bot(sub)) return sub;
        if (dom == Domain::Gr) {
            GroundSub out = std::get<GroundSub>(sub);
            for (const std::string& v : term_vars(lit)) {
                if (out.at(v) != GroundVal::G) out.set(v, GroundVal::Any);
            }
            return out;
        }
        const auto& s = std::get<SharingSub>(sub);
        std::vector<std::string> lvars = term_vars(lit);
        GroupSet rel, keep;
        for (const VarGroup& grp : s.groups) {
            bool touches = false;
            for (const std::string& v : lvars) {
                if (grp.count(v)) {
                    touches = true;
                    break;
                }
            }
            (touches ? rel : keep).insert(grp);
        }
        for (const VarGroup& grp : sh_star(rel)) keep.insert(grp);
        return SharingSub::of(s.scope, std::move(keep));
    }

    AbstractSub transfer(const Term& lit, const AbstractSub& sub) const {
        if (ab_is_bot(sub)) return sub;
        if (lit.args.empty() && lit.name == "fail") return bottom_over(scope_of(sub));
        if (dom == Domain::Gr) return gr_transfer(lit, std::get<GroundSub>(sub));
        return sh_transfer(lit, std::get<SharingSub>(sub));
    }

    static std::optional<size_t> head_pos(const TrustDecl& tr, const std::string& var) {
        for (size_t i = 0; i < tr.head.args.size(); ++i) {
            if (tr.head.args[i].kind == Term::Kind::Var && tr.head.args[i].name == var) return i;
        }
        return std::nullopt;
    }

    // Positional groundness template from a property conjunction: stated
    // ground/1 positions are g, stated var/1 positions ng, the rest any.
    static GroundSub props_pattern(const TrustDecl& tr, const std::vector<Term>& props) {
        GroundSub pat;
        for (size_t i = 0; i < tr.head.args.size(); ++i) pat.set(pos_var(i), GroundVal::Any);
        for (const Term& p : props) {
            if (p.args.size() != 1 || p.args[0].kind != Term::Kind::Var) continue;
            std::optional<size_t> pos = head_pos(tr, p.args[0].name);
            if (!pos) continue;
            if (p.name == "ground") pat.set(pos_var(*pos), GroundVal::G);
            if (p.name == "var") pat.set(pos_var(*pos), GroundVal::NG);
        }
        return pat;
    }

    // A trusted description applies when the call pattern entails its call
    // properties (checked on the groundness shadow of the pattern).
    bool trust_matches(const TrustDecl& tr, const AbstractSub& pat) const {
        GroundSub want = props_pattern(tr, tr.call_props);
        GroundSub have = dom == Domain::Gr ? std::get<GroundSub>(pat) : sh_to_gr(std::get<SharingSub>(pat));
        return gr_leq(have, want);
    }

    AbstractSub trust_success(const TrustDecl& tr, const AbstractSub& sub, const Term& lit) const {
        if (dom == Domain::Gr) {
            return extend(sub, lit, props_pattern(tr, tr.success_props));
        }
        // Sharing: alias pessimistically, then strip everything the trusted
        // success declares ground.
        SharingSub tmp = std::get<SharingSub>(unknown_success(sub, lit));
        if (tmp.bot) return tmp;
        std::set<std::string> gvars;
        for (const Term& p : tr.success_props) {
            if (p.name != "ground" || p.args.size() != 1 || p.args[0].kind != Term::Kind::Var) continue;
            std::optional<size_t> pos = head_pos(tr, p.args[0].name);
            if (!pos || *pos >= lit.args.size()) continue;
            for (const std::string& v : term_vars(lit.args[*pos])) gvars.insert(v);
        }
        GroupSet kept;
        for (const VarGroup& grp : tmp.groups) {
            bool hit = false;
            for (const std::string& v : grp) {
                if (gvars.count(v)) {
                    hit = true;
                    break;
                }
            }
            if (!hit) kept.insert(grp);
        }
        return SharingSub::of(tmp.scope, std::move(kept));
    }

    int make_node(const std::string& pp, const Term& lit, const AbstractSub& call,
                  const AbstractSub& succ, const std::string& vkey) {
        std::string k = pp + "|" + ab_render(call);
        auto it = node_index.find(k);
        if (it != node_index.end()) return it->second;
        OrNode n;
        n.id = static_cast<int>(graph.nodes.size()) + 1;
        n.pp = pp;
        n.literal = lit;
        n.call = call;
        n.success = succ;
        n.variant = vkey;
        node_index.emplace(std::move(k), n.id);
        graph.nodes.push_back(std::move(n));
        return graph.nodes.back().id;
    }

    // One body literal: projections for the OR node, then the post
    // substitution. `vc` is non-null only during reconstruction.
    AbstractSub step(const Predicate& pred, const Clause& c, size_t j, const AbstractSub& sub,
                     VariantClause* vc) {
        const Term& lit = c.body[j];
        if (ab_is_bot(sub)) {
            // Unreachable literal: keep a bottom node so graphs over the same
            // program stay shape-compatible.
            if (vc) {
                std::string pp = program_point_id(pred.name, pred.arity, c.body_index,
                                                  static_cast<int>(j) + 1);
                AbstractSub bt = bottom_over(term_vars(lit));
                vc->literal_nodes.push_back(make_node(pp, lit, bt, bt, ""));
            }
            return bottom_over(scope_of(sub));
        }
        std::vector<std::string> lvars = term_vars(lit);
        AbstractSub post;
        std::string vkey;
        const Predicate* callee = nullptr;
        AbstractSub pat;
        int arity = static_cast<int>(lit.args.size());
        if (is_builtin_literal(lit.name, arity)) {
            post = transfer(lit, sub);
        } else {
            callee = prog.find_pred(lit.name, arity);
            const TrustDecl* tr = prog.find_trust(lit.name, arity);
            pat = maybe_widen(call_pattern(lit, sub));
            if (tr && trust_matches(*tr, pat)) {
                post = trust_success(*tr, sub, lit);
                callee = nullptr;  // trusted description replaces the expansion
            } else if (callee) {
                vkey = variant_key(lit.name, lit.args.size(), pat);
                AbstractSub succ;
                if (building) {
                    auto mit = memo.find(vkey);
                    if (mit == memo.end()) throw AnalysisError("internal: variant missing from memo table");
                    succ = mit->second;
                } else {
                    succ = eval_call(*callee, pat);
                }
                post = extend(sub, lit, succ);
            } else if (prog.is_imported(lit.name, arity)) {
                post = unknown_success(sub, lit);
            } else {
                throw AnalysisError("call to undefined predicate " + lit.name + "/" +
                                    std::to_string(arity));
            }
        }
        if (vc) {
            std::string pp =
                program_point_id(pred.name, pred.arity, c.body_index, static_cast<int>(j) + 1);
            int id = make_node(pp, lit, ab_project(sub, lvars), ab_project(post, lvars),
                               callee ? vkey : std::string());
            vc->literal_nodes.push_back(id);
            if (callee && !vkey.empty()) expand_variant(vkey, *callee, pat);
        }
        return post;
    }

    // Fixpoint evaluation of one (predicate, pattern) variant. Values only
    // ascend: the new result is joined with the stored one.
    AbstractSub eval_call(const Predicate& pred, const AbstractSub& pat) {
        std::string key = variant_key(pred.name, pred.arity, pat);
        auto mit = memo.find(key);
        if (mit == memo.end())
            mit = memo.emplace(key, bottom_over(pos_scope(pred.arity))).first;
        if (in_stack.count(key) || evaluated.count(key)) return mit->second;
        in_stack.insert(key);
        AbstractSub acc = bottom_over(pos_scope(pred.arity));
        for (const Clause& c : pred.clauses) {
            AbstractSub sub = clause_entry(c, pat);
            for (size_t j = 0; j < c.body.size() && !ab_is_bot(sub); ++j) {
                sub = step(pred, c, j, sub, nullptr);
            }
            acc = ab_join(acc, exit_pattern(c, sub));
        }
        in_stack.erase(key);
        evaluated.insert(key);
        AbstractSub nw = ab_join(mit->second, acc);
        if (!(nw == mit->second)) {
            mit->second = std::move(nw);
            changed = true;
        }
        return mit->second;
    }

    // Re-run clause bodies under the stable memo table, materializing the
    // node/edge structure. Expansions are shared per variant.
    void expand_variant(const std::string& key, const Predicate& pred, const AbstractSub& pat) {
        if (!expanded.insert(key).second) return;
        graph.variants[key];  // reserve the slot (marks ordering, map refs are stable)
        std::vector<VariantClause> vcs;
        for (const Clause& c : pred.clauses) {
            VariantClause vc;
            vc.clause_index = c.body_index;
            AbstractSub sub = clause_entry(c, pat);
            vc.entry = sub;
            for (size_t j = 0; j < c.body.size(); ++j) sub = step(pred, c, j, sub, &vc);
            vc.exit = exit_pattern(c, sub);
            vcs.push_back(std::move(vc));
        }
        graph.variants[key] = std::move(vcs);
    }

    void finalize_children() {
        for (const OrNode& n : graph.nodes) {
            if (n.variant.empty()) continue;
            auto& cm = graph.children[n.id];
            for (const VariantClause& vc : graph.variants.at(n.variant)) {
                for (size_t j = 0; j < vc.literal_nodes.size(); ++j) {
                    cm[{vc.clause_index, static_cast<int>(j) + 1}] = vc.literal_nodes[j];
                }
            }
        }
    }

    const EntryDecl& select_entry() const {
        if (prog.entries.empty()) throw AnalysisError("program has no entry declaration");
        if (opts.entry.empty()) return prog.entries.front();
        for (const EntryDecl& e : prog.entries) {
            std::string id = e.head.name + "/" + std::to_string(e.head.args.size());
            if (id == opts.entry) return e;
        }
        throw AnalysisError("no entry declaration for " + opts.entry);
    }

    AndOrGraph run() {
        const EntryDecl& e = select_entry();
        const Predicate* epred = prog.find_pred(e.head.name, static_cast<int>(e.head.args.size()));
        if (!epred) throw AnalysisError("entry predicate is not defined: " + e.head.name);
        AbstractSub sub0 = entry_to_abstract(e, dom);
        AbstractSub pat0 = maybe_widen(call_pattern(e.head, sub0));

        int pass = 0;
        do {
            changed = false;
            evaluated.clear();
            eval_call(*epred, pat0);
            if (++pass > 10000) throw AnalysisError("fixpoint iteration bound exceeded");
        } while (changed);

        building = true;
        graph.domain = dom;
        graph.widen_threshold = opts.widen_share;
        graph.entry_pp = entry_point_id(e);
        graph.entry_literal = e.head;
        std::string rkey = variant_key(e.head.name, e.head.args.size(), pat0);
        AbstractSub post0 = extend(sub0, e.head, memo.at(rkey));
        graph.root_id =
            make_node(graph.entry_pp, e.head, sub0, ab_project(post0, term_vars(e.head)), rkey);
        expand_variant(rkey, *epred, pat0);
        finalize_children();
        return std::move(graph);
    }
};

}  // namespace

const std::map<std::pair<int, int>, int>& AndOrGraph::children_of(int id) const {
    static const std::map<std::pair<int, int>, int> kEmpty;
    auto it = children.find(id);
    return it == children.end() ? kEmpty : it->second;
}

AndOrGraph analyze(const Program& p, const AnalyzeOptions& opts) {
    Engine eng(p, opts);
    return eng.run();
}

std::vector<NodeRow> node_table(const AndOrGraph& g) {
    std::vector<NodeRow> rows;
    rows.reserve(g.nodes.size());
    for (const OrNode& n : g.nodes) {
        rows.push_back({n.id, n.pp, print_term(n.literal), ab_render(n.call), ab_render(n.success)});
    }
    return rows;
}

std::string canonical_node_rendering(const OrNode& n) {
    std::map<std::string, std::string> ren;
    for (const std::string& v : term_vars(n.literal)) {
        if (!ren.count(v)) ren.emplace(v, canon_name(ren.size()));
    }
    Term rl = rename_term(n.literal, ren);
    std::ostringstream os;
    os << n.pp << " <" << print_term(rl) << ", " << ab_render(rename_sub(n.call, ren)) << ", "
       << ab_render(rename_sub(n.success, ren)) << ">";
    return os.str();
}

nlohmann::json graph_to_json(const AndOrGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const OrNode& n : g.nodes) {
        nodes.push_back({{"id", n.id},
                         {"pp", n.pp},
                         {"literal", print_term(n.literal)},
                         {"call", ab_to_json(n.call)},
                         {"success", ab_to_json(n.success)}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [from, cm] : g.children) {
        for (const auto& [key, to] : cm) {
            edges.push_back(
                {{"from", from}, {"clause", key.first}, {"literal", key.second}, {"to", to}});
        }
    }
    return {{"domain", domain_name(g.domain)},
            {"entry", g.entry_pp},
            {"nodes", nodes},
            {"edges", edges}};
}

AndOrGraph graph_from_json(const nlohmann::json& j) {
    AndOrGraph g;
    g.domain = domain_of_name(j.at("domain").get<std::string>());
    g.entry_pp = j.at("entry").get<std::string>();
    const nlohmann::json& ns = j.at("nodes");
    g.nodes.resize(ns.size());
    for (const nlohmann::json& nj : ns) {
        OrNode n;
        n.id = nj.at("id").get<int>();
        n.pp = nj.at("pp").get<std::string>();
        n.literal = parse_term(nj.at("literal").get<std::string>());
        std::vector<std::string> sc = term_vars(n.literal);
        n.call = ab_from_json(nj.at("call"), sc);
        n.success = ab_from_json(nj.at("success"), sc);
        if (n.id < 1 || n.id > static_cast<int>(ns.size())) {
            throw std::runtime_error("graph JSON: node ids must be 1..n");
        }
        g.nodes[static_cast<size_t>(n.id) - 1] = std::move(n);
    }
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].id != static_cast<int>(i) + 1) {
            throw std::runtime_error("graph JSON: duplicate or missing node id");
        }
    }
    if (j.count("edges")) {
        for (const nlohmann::json& ej : j.at("edges")) {
            int from = ej.at("from").get<int>();
            int to = ej.at("to").get<int>();
            if (from < 1 || from > static_cast<int>(g.nodes.size()) || to < 1 ||
                to > static_cast<int>(g.nodes.size())) {
                throw std::runtime_error("graph JSON: edge endpoint out of range");
            }
            g.children[from][{ej.at("clause").get<int>(), ej.at("literal").get<int>()}] = to;
        }
    }
    for (const OrNode& n : g.nodes) {
        if (n.pp == g.entry_pp) {
            g.root_id = n.id;
            break;
        }
    }
    if (g.root_id == 0) throw std::runtime_error("graph JSON: no node at the entry point");
    g.entry_literal = g.node(g.root_id).literal;
    return g;
}

}  // namespace absdist
