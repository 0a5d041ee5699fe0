#include "absdist/domain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace absdist {

const char* domain_name(Domain d) {
    return d == Domain::Gr ? "gr" : "share";
}

Domain domain_of_name(const std::string& s) {
    if (s == "gr") return Domain::Gr;
    if (s == "share") return Domain::Share;
    throw std::runtime_error("unknown domain: " + s);
}

Domain sub_domain(const AbstractSub& s) {
    return std::holds_alternative<GroundSub>(s) ? Domain::Gr : Domain::Share;
}

bool ab_is_bot(const AbstractSub& s) {
    return std::visit([](const auto& v) { return v.is_bot(); }, s);
}

namespace {

[[noreturn]] void domain_mismatch(const char* op) {
    throw std::invalid_argument(std::string(op) + ": mixed abstract domains");
}

}  // namespace

AbstractSub ab_join(const AbstractSub& a, const AbstractSub& b) {
    if (a.index() != b.index())
        domain_mismatch("ab_join");
    if (auto* ga = std::get_if<GroundSub>(&a))
        return gr_join(*ga, std::get<GroundSub>(b));
    return sh_join(std::get<SharingSub>(a), std::get<SharingSub>(b));
}

AbstractSub ab_meet(const AbstractSub& a, const AbstractSub& b) {
    if (a.index() != b.index())
        domain_mismatch("ab_meet");
    if (auto* ga = std::get_if<GroundSub>(&a))
        return gr_meet(*ga, std::get<GroundSub>(b));
    return sh_meet(std::get<SharingSub>(a), std::get<SharingSub>(b));
}

bool ab_leq(const AbstractSub& a, const AbstractSub& b) {
    if (a.index() != b.index())
        domain_mismatch("ab_leq");
    if (auto* ga = std::get_if<GroundSub>(&a))
        return gr_leq(*ga, std::get<GroundSub>(b));
    return sh_leq(std::get<SharingSub>(a), std::get<SharingSub>(b));
}

double ab_distance(const AbstractSub& a, const AbstractSub& b) {
    if (a.index() != b.index())
        domain_mismatch("ab_distance");
    if (auto* ga = std::get_if<GroundSub>(&a))
        return gr_distance(*ga, std::get<GroundSub>(b));
    return sh_distance(std::get<SharingSub>(a), std::get<SharingSub>(b));
}

AbstractSub ab_project(const AbstractSub& s, const std::vector<std::string>& keep) {
    if (auto* g = std::get_if<GroundSub>(&s))
        return g->project(keep);
    return std::get<SharingSub>(s).project(keep);
}

nlohmann::json ab_to_json(const AbstractSub& s) {
    nlohmann::json j;
    j["dom"] = domain_name(sub_domain(s));
    if (ab_is_bot(s)) {
        j["sub"] = "bot";
        return j;
    }
    if (auto* g = std::get_if<GroundSub>(&s)) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [v, x] : g->vals)
            m[v] = ground_val_name(x);
        j["sub"] = std::move(m);
        return j;
    }
    const auto& sh = std::get<SharingSub>(s);
    nlohmann::json groups = nlohmann::json::array();
    for (const VarGroup& g : sh.groups) {
        nlohmann::json grp = nlohmann::json::array();
        for (const auto& v : g)
            grp.push_back(v);
        groups.push_back(std::move(grp));
    }
    j["sub"] = std::move(groups);
    return j;
}

AbstractSub ab_from_json(const nlohmann::json& j, const std::vector<std::string>& scope) {
    Domain d = domain_of_name(j.at("dom").get<std::string>());
    const nlohmann::json& sub = j.at("sub");
    if (d == Domain::Gr) {
        if (sub.is_string() && sub.get<std::string>() == "bot")
            return GroundSub::bottom();
        GroundSub g;
        for (auto it = sub.begin(); it != sub.end(); ++it)
            g.set(it.key(), ground_val_of_name(it.value().get<std::string>()));
        return g;
    }
    if (sub.is_string() && sub.get<std::string>() == "bot")
        return SharingSub::bottom(scope);
    GroupSet gs;
    for (const auto& grp : sub) {
        VarGroup g;
        for (const auto& v : grp)
            g.insert(v.get<std::string>());
        gs.insert(std::move(g));
    }
    return SharingSub::of(scope, std::move(gs));
}

std::string ab_render(const AbstractSub& s) {
    if (ab_is_bot(s))
        return "bot";
    std::ostringstream out;
    if (auto* g = std::get_if<GroundSub>(&s)) {
        out << '{';
        bool first = true;
        for (const auto& [v, x] : g->vals) {
            if (!first) out << ',';
            out << v << '/' << ground_val_name(x);
            first = false;
        }
        out << '}';
        return out.str();
    }
    const auto& sh = std::get<SharingSub>(s);
    out << '{';
    bool first = true;
    for (const VarGroup& g : sh.groups) {
        if (!first) out << ',';
        out << '{';
        bool f2 = true;
        for (const auto& v : g) {
            if (!f2) out << ',';
            out << v;
            f2 = false;
        }
        out << '}';
        first = false;
    }
    out << '}';
    return out.str();
}

int ab_symbol_size(const AbstractSub& s) {
    if (ab_is_bot(s))
        return 1;
    if (auto* g = std::get_if<GroundSub>(&s))
        return static_cast<int>(g->vals.size());   // one constant per variable
    const auto& sh = std::get<SharingSub>(s);
    // List-of-lists rendering: every cons cell and nil counts one symbol, as
    // does every variable-name occurrence (rendered as a constant).
    std::vector<Term> outer;
    for (const VarGroup& g : sh.groups) {
        std::vector<Term> inner;
        for (const auto& v : g)
            inner.push_back(Term::constant(v));
        outer.push_back(Term::list(inner));
    }
    return term_size(Term::list(outer));
}

AbstractSub entry_to_abstract(const EntryDecl& decl, Domain domain) {
    std::vector<std::string> head_vars = term_vars(decl.head);
    std::vector<std::string> ground_vars, free_vars;
    for (const Term& prop : decl.props) {
        if (prop.arity() != 1 || !prop.args[0].is_var())
            throw std::runtime_error("entry property must name a head variable: " +
                                     print_term(prop));
        const std::string& v = prop.args[0].name;
        if (std::find(head_vars.begin(), head_vars.end(), v) == head_vars.end())
            throw std::runtime_error("entry property variable not in head: " + v);
        if (prop.name == "ground")
            ground_vars.push_back(v);
        else if (prop.name == "var")
            free_vars.push_back(v);
        else
            throw std::runtime_error("unknown entry property: " + prop.name);
    }
    auto is_in = [](const std::vector<std::string>& vs, const std::string& v) {
        return std::find(vs.begin(), vs.end(), v) != vs.end();
    };
    if (domain == Domain::Gr) {
        GroundSub g;
        for (const auto& v : head_vars) {
            GroundVal val = GroundVal::Any;
            if (is_in(ground_vars, v))
                val = GroundVal::G;
            else if (is_in(free_vars, v))
                val = GroundVal::NG;
            g.set(v, val);
        }
        return g;
    }
    // Sharing: declared-free variables start in their own singleton group;
    // unstated variables may share arbitrarily among themselves (and only
    // among themselves).
    SharingSub sh = SharingSub::empty(head_vars);
    std::vector<std::string> unstated;
    for (const auto& v : head_vars)
        if (!is_in(ground_vars, v) && !is_in(free_vars, v))
            unstated.push_back(v);
    for (const auto& v : free_vars)
        sh.groups.insert({v});
    for (const VarGroup& g : all_groups(unstated))
        sh.groups.insert(g);
    return sh;
}

AbstractSub translate_sub(const AbstractSub& s, Domain base) {
    Domain from = sub_domain(s);
    if (from == base)
        return s;
    if (from == Domain::Share && base == Domain::Gr)
        return sh_to_gr(std::get<SharingSub>(s));
    throw std::runtime_error(std::string("no translation from ") + domain_name(from) +
                             " to " + domain_name(base));
}

}  // namespace absdist
