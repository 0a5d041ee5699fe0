#include "absdist/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace absdist {

Term Term::cons(Term head, Term tail) {
    return compound(".", {std::move(head), std::move(tail)});
}

Term Term::list(const std::vector<Term>& elems) {
    Term t = nil();
    for (auto it = elems.rbegin(); it != elems.rend(); ++it)
        t = cons(*it, t);
    return t;
}

bool Term::is_ground() const {
    if (kind == Kind::Var)
        return false;
    for (const Term& a : args)
        if (!a.is_ground())
            return false;
    return true;
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
    if (t.kind == Term::Kind::Var) {
        if (std::find(out.begin(), out.end(), t.name) == out.end())
            out.push_back(t.name);
        return;
    }
    for (const Term& a : t.args)
        collect_vars(a, out);
}

std::vector<std::string> term_vars(const Term& t) {
    std::vector<std::string> out;
    collect_vars(t, out);
    return out;
}

// --- reader -----------------------------------------------------------------

namespace {

struct TermReader {
    const std::string& text;
    size_t pos = 0;

    explicit TermReader(const std::string& s) : text(s) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("term syntax error at offset " +
                                 std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c))
            fail(std::string("expected '") + c + "'");
    }

    std::string read_name() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start)
            fail("expected a name");
        return text.substr(start, pos - start);
    }

    Term read_term() {
        skip_ws();
        if (pos >= text.size())
            fail("unexpected end of input");
        char c = text[pos];
        if (c == '[')
            return read_list();
        bool neg_number = c == '-' && pos + 1 < text.size() &&
                          std::isdigit(static_cast<unsigned char>(text[pos + 1]));
        if (neg_number || std::isdigit(static_cast<unsigned char>(c)))
            return read_number();
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_')
            return Term::var(read_name());
        static const std::string symbolic = "=<>\\:!+-*";
        std::string name;
        if (std::islower(static_cast<unsigned char>(c))) {
            name = read_name();
        } else if (symbolic.find(c) != std::string::npos) {
            // Operator symbols in canonical functional notation: =(X,Y), is
            // printed terms round-trip through here.
            size_t start = pos;
            while (pos < text.size() && symbolic.find(text[pos]) != std::string::npos)
                ++pos;
            name = text.substr(start, pos - start);
        } else {
            fail("unexpected character");
        }
        if (eat('(')) {
            std::vector<Term> args;
            args.push_back(read_term());
            while (eat(','))
                args.push_back(read_term());
            expect(')');
            return Term::compound(std::move(name), std::move(args));
        }
        return Term::constant(std::move(name));
    }

    Term read_number() {
        size_t start = pos;
        if (text[pos] == '-')
            ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start || (text[start] == '-' && pos == start + 1))
            fail("expected a number");
        return Term::constant(text.substr(start, pos - start));
    }

    Term read_list() {
        expect('[');
        if (eat(']'))
            return Term::nil();
        std::vector<Term> elems;
        elems.push_back(read_term());
        while (eat(','))
            elems.push_back(read_term());
        Term tail = Term::nil();
        if (eat('|'))
            tail = read_term();
        expect(']');
        for (auto it = elems.rbegin(); it != elems.rend(); ++it)
            tail = Term::cons(*it, tail);
        return tail;
    }
};

// Collect a cons chain back into element list + tail for pretty printing.
bool as_list(const Term& t, std::vector<const Term*>& elems, const Term** tail) {
    const Term* cur = &t;
    while (cur->is_compound() && cur->name == "." && cur->arity() == 2) {
        elems.push_back(&cur->args[0]);
        cur = &cur->args[1];
    }
    *tail = cur;
    return !elems.empty() || (cur->is_const() && cur->name == "[]");
}

}  // namespace

Term parse_term(const std::string& text) {
    TermReader r(text);
    Term t = r.read_term();
    r.skip_ws();
    if (r.pos != text.size())
        r.fail("trailing characters after term");
    return t;
}

std::string print_term(const Term& t) {
    std::ostringstream out;
    struct Printer {
        std::ostringstream& out;
        void print(const Term& t) {
            std::vector<const Term*> elems;
            const Term* tail = nullptr;
            if ((t.is_compound() || t.is_const()) && as_list(t, elems, &tail) &&
                (t.is_const() || !elems.empty())) {
                out << '[';
                for (size_t i = 0; i < elems.size(); ++i) {
                    if (i) out << ',';
                    print(*elems[i]);
                }
                if (!(tail->is_const() && tail->name == "[]")) {
                    out << '|';
                    print(*tail);
                }
                out << ']';
                return;
            }
            out << t.name;
            if (t.is_compound()) {
                out << '(';
                for (int i = 0; i < t.arity(); ++i) {
                    if (i) out << ',';
                    print(t.args[i]);
                }
                out << ')';
            }
        }
    } p{out};
    p.print(t);
    return out.str();
}

// --- metric and size --------------------------------------------------------

double d_term(const Term& t1, const Term& t2, const TermMetricParams& params) {
    if (params.p <= 0.0 || params.p >= 1.0)
        throw std::invalid_argument("d_term: p must lie in (0,1)");
    if (t1.is_var() || t2.is_var())
        throw std::invalid_argument("d_term is defined on ground terms only");
    if (t1.name != t2.name || t1.arity() != t2.arity())
        return 1.0;
    int n = t1.arity();
    if (n == 0)
        return 0.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += d_term(t1.args[i], t2.args[i], params);
    return params.p * sum / n;
}

double hausdorff_terms(const std::set<Term>& a, const std::set<Term>& b,
                       const TermMetricParams& params) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_terms: sets must be non-empty");
    auto directed = [&](const std::set<Term>& from, const std::set<Term>& to) {
        double worst = 0.0;
        for (const Term& x : from) {
            double best = 2.0;
            for (const Term& y : to)
                best = std::min(best, d_term(x, y, params));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

int term_size(const Term& t) {
    if (t.is_var())
        return 0;
    int n = 1;
    for (const Term& a : t.args)
        n += term_size(a);
    return n;
}

}  // namespace absdist
