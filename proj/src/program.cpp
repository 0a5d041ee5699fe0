#include "absdist/program.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <sstream>

namespace absdist {

bool operator==(const Clause& a, const Clause& b) {
    return a.head == b.head && a.body == b.body;
}
bool operator==(const EntryDecl& a, const EntryDecl& b) {
    return a.head == b.head && a.props == b.props;
}
bool operator==(const TrustDecl& a, const TrustDecl& b) {
    return a.head == b.head && a.call_props == b.call_props &&
           a.success_props == b.success_props;
}
bool operator==(const Program& a, const Program& b) {
    auto preds_eq = [](const Predicate& x, const Predicate& y) {
        return x.name == y.name && x.arity == y.arity && x.clauses == y.clauses;
    };
    return a.preds.size() == b.preds.size() &&
           std::equal(a.preds.begin(), a.preds.end(), b.preds.begin(), preds_eq) &&
           a.entries == b.entries && a.trusts == b.trusts && a.imports == b.imports;
}

const Predicate* Program::find_pred(const std::string& name, int arity) const {
    for (const Predicate& p : preds)
        if (p.name == name && p.arity == arity)
            return &p;
    return nullptr;
}

bool Program::is_imported(const std::string& name, int arity) const {
    return std::find(imports.begin(), imports.end(),
                     std::make_pair(name, arity)) != imports.end();
}

const TrustDecl* Program::find_trust(const std::string& name, int arity) const {
    for (const TrustDecl& t : trusts)
        if (t.head.name == name && t.head.arity() == arity)
            return &t;
    return nullptr;
}

bool is_builtin_literal(const std::string& name, int arity) {
    if (arity == 0)
        return name == "true" || name == "!" || name == "fail";
    if (arity == 1)
        return name == "ground" || name == "var";
    if (arity == 2)
        return name == "=" || name == "<" || name == ">" || name == "=<" ||
               name == ">=" || name == "=:=" || name == "=\\=" || name == "is";
    return false;
}

// --- tokenizer --------------------------------------------------------------

namespace {

enum class Tok {
    Atom, Var, Int, Punct,   // Punct covers ( ) [ ] | , and operators
    End,                     // clause-terminating '.'
    Eof
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg, int l, int c) const {
        throw ParseError(msg, l, c);
    }

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos < src.size(); ++i) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws_and_comments() {
        for (;;) {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
                advance();
            if (pos < src.size() && src[pos] == '%') {
                while (pos < src.size() && src[pos] != '\n')
                    advance();
                continue;
            }
            break;
        }
    }

    bool starts_with(const char* s) const {
        return src.compare(pos, std::strlen(s), s) == 0;
    }

    Token next() {
        skip_ws_and_comments();
        int l = line, c = col;
        if (pos >= src.size())
            return {Tok::Eof, "", l, c};
        char ch = src[pos];
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                advance();
            std::string text = src.substr(start, pos - start);
            bool is_var = std::isupper(static_cast<unsigned char>(text[0])) || text[0] == '_';
            return {is_var ? Tok::Var : Tok::Atom, std::move(text), l, c};
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                advance();
            return {Tok::Int, src.substr(start, pos - start), l, c};
        }
        if (ch == '.') {
            // A '.' terminates a clause when followed by layout or EOF.
            if (pos + 1 == src.size() ||
                std::isspace(static_cast<unsigned char>(src[pos + 1])) ||
                src[pos + 1] == '%') {
                advance();
                return {Tok::End, ".", l, c};
            }
            fail("unexpected '.'", l, c);
        }
        static const char* multi[] = {":-", "=..", "=<", ">=", "=:=", "=\\=", "->", "=>"};
        for (const char* op : multi)
            if (starts_with(op)) {
                advance(std::strlen(op));
                return {Tok::Punct, op, l, c};
            }
        static const std::string single = "()[]|,=<>+-*/!:";
        if (single.find(ch) != std::string::npos) {
            advance();
            return {Tok::Punct, std::string(1, ch), l, c};
        }
        fail(std::string("unexpected character '") + ch + "'", l, c);
    }
};

// Recursive-descent parser over the token stream. Expressions only appear as
// literal arguments; the only infix operators are the arithmetic/comparison
// ones, parsed with fixed precedence (comparison < additive < multiplicative).
struct ProgramParser {
    Lexer lex;
    Token tok;

    explicit ProgramParser(const std::string& s) : lex(s) { tok = lex.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, tok.line, tok.col);
    }

    void bump() { tok = lex.next(); }

    bool at_punct(const char* p) const {
        return tok.kind == Tok::Punct && tok.text == p;
    }

    void expect_punct(const char* p) {
        if (!at_punct(p))
            fail(std::string("expected '") + p + "'");
        bump();
    }

    void expect_end() {
        if (tok.kind != Tok::End)
            fail("expected '.' at end of clause");
        bump();
    }

    // primary := var | int | atom | atom(args) | [list] | ( expr )
    // Consumes '(' expr {',' expr} ')' and returns the argument vector.
    std::vector<Term> parse_paren_args() {
        expect_punct("(");
        std::vector<Term> args;
        args.push_back(parse_expr());
        while (at_punct(",")) {
            bump();
            args.push_back(parse_expr());
        }
        expect_punct(")");
        return args;
    }

    Term parse_primary() {
        if (tok.kind == Tok::Var) {
            Term t = Term::var(tok.text);
            bump();
            return t;
        }
        if (tok.kind == Tok::Int) {
            Term t = Term::constant(tok.text);
            bump();
            return t;
        }
        if (at_punct("-")) {
            bump();
            if (at_punct("("))
                return Term::compound("-", parse_paren_args());
            if (tok.kind != Tok::Int)
                fail("expected an integer after '-'");
            Term t = Term::constant("-" + tok.text);
            bump();
            return t;
        }
        // Operator functors in canonical functional notation: printed clauses
        // round-trip through the parser, so =<(X,3) or +(X,1) is a compound.
        // A primary never legally starts with one of these in infix position.
        static const char* fn_ops[] = {"+", "*", "/", "=", "<", ">",
                                       "=<", ">=", "=:=", "=\\="};
        for (const char* op : fn_ops)
            if (at_punct(op)) {
                std::string name = tok.text;
                bump();
                if (!at_punct("("))
                    fail("expected '(' after operator functor");
                return Term::compound(std::move(name), parse_paren_args());
            }
        if (tok.kind == Tok::Atom) {
            std::string name = tok.text;
            bump();
            if (at_punct("("))
                return Term::compound(std::move(name), parse_paren_args());
            return Term::constant(std::move(name));
        }
        if (at_punct("[")) {
            bump();
            if (at_punct("]")) {
                bump();
                return Term::nil();
            }
            std::vector<Term> elems;
            elems.push_back(parse_expr());
            while (at_punct(",")) {
                bump();
                elems.push_back(parse_expr());
            }
            Term tail = Term::nil();
            if (at_punct("|")) {
                bump();
                tail = parse_expr();
            }
            expect_punct("]");
            for (auto it = elems.rbegin(); it != elems.rend(); ++it)
                tail = Term::cons(*it, tail);
            return tail;
        }
        if (at_punct("(")) {
            bump();
            Term t = parse_expr();
            expect_punct(")");
            return t;
        }
        fail("expected a term");
    }

    Term parse_mul() {
        Term t = parse_primary();
        while (at_punct("*") || at_punct("/")) {
            std::string op = tok.text;
            bump();
            t = Term::compound(op, {t, parse_primary()});
        }
        return t;
    }

    Term parse_expr() {
        Term t = parse_mul();
        while (at_punct("+") || at_punct("-")) {
            std::string op = tok.text;
            bump();
            t = Term::compound(op, {t, parse_mul()});
        }
        return t;
    }

    // literal := '!' | expr [ cmp-op expr ]
    Term parse_literal() {
        if (at_punct("!")) {
            bump();
            return Term::constant("!");
        }
        Term t = parse_expr();
        static const char* cmp[] = {"=", "<", ">", "=<", ">=", "=:=", "=\\="};
        for (const char* op : cmp)
            if (at_punct(op)) {
                bump();
                return Term::compound(op, {t, parse_expr()});
            }
        if (tok.kind == Tok::Atom && tok.text == "is") {
            bump();
            return Term::compound("is", {t, parse_expr()});
        }
        return t;
    }

    std::vector<Term> parse_body() {
        std::vector<Term> body;
        body.push_back(parse_literal());
        while (at_punct(",")) {
            bump();
            body.push_back(parse_literal());
        }
        return body;
    }

    // props := prop | '(' prop, ..., prop ')'
    std::vector<Term> parse_props() {
        if (at_punct("(")) {
            bump();
            std::vector<Term> props;
            props.push_back(parse_literal());
            while (at_punct(",")) {
                bump();
                props.push_back(parse_literal());
            }
            expect_punct(")");
            return props;
        }
        return {parse_literal()};
    }

    void check_head(const Term& h) {
        if (h.is_var())
            fail("clause head cannot be a variable");
        if (!std::islower(static_cast<unsigned char>(h.name[0])))
            fail("clause head must be an atom or compound term");
    }

    void parse_directive(Program& out, int line) {
        if (tok.kind != Tok::Atom)
            fail("expected a directive name after ':-'");
        std::string name = tok.text;
        if (name == "entry") {
            bump();
            EntryDecl e;
            e.line = line;
            e.head = parse_primary();
            check_head(e.head);
            expect_punct(":");
            e.props = parse_props();
            expect_end();
            for (const EntryDecl& prev : out.entries)
                if (prev.head.name == e.head.name && prev.head.arity() == e.head.arity())
                    throw ParseError("duplicate entry declaration for " + e.head.name,
                                     line, 1);
            out.entries.push_back(std::move(e));
            return;
        }
        if (name == "trust") {
            bump();
            if (!(tok.kind == Tok::Atom && tok.text == "success"))
                fail("expected 'success' after 'trust'");
            bump();
            TrustDecl t;
            t.line = line;
            t.head = parse_primary();
            check_head(t.head);
            expect_punct(":");
            t.call_props = parse_props();
            expect_punct("=>");
            t.success_props = parse_props();
            expect_end();
            out.trusts.push_back(std::move(t));
            return;
        }
        // module/use_module and anything else parse as a plain term.
        Term d = parse_primary();
        expect_end();
        if (d.name == "module" && d.arity() >= 1) {
            out.module_name = d.args[0].is_var() ? "" : d.args[0].name;
            return;
        }
        if (d.name == "use_module") {
            // Import list: use_module(mod, [p/2, q/3]); a bare use_module(mod)
            // records nothing (no predicates named).
            if (d.arity() == 2) {
                const Term* cell = &d.args[1];
                while (cell->is_compound() && cell->name == ".") {
                    const Term& spec = cell->args[0];
                    if (spec.is_compound() && spec.name == "/" && spec.arity() == 2)
                        out.imports.emplace_back(spec.args[0].name,
                                                 std::stoi(spec.args[1].name));
                    cell = &cell->args[1];
                }
            }
            return;
        }
        // Unknown directives are tolerated and ignored.
    }

    Program parse() {
        Program out;
        std::map<std::pair<std::string, int>, size_t> pred_index;
        while (tok.kind != Tok::Eof) {
            int line = tok.line;
            if (at_punct(":-")) {
                bump();
                parse_directive(out, line);
                continue;
            }
            Clause cl;
            cl.line = line;
            cl.head = parse_primary();
            check_head(cl.head);
            if (at_punct(":-")) {
                bump();
                cl.body = parse_body();
            }
            expect_end();
            auto key = std::make_pair(cl.head.name, cl.head.arity());
            auto it = pred_index.find(key);
            if (it == pred_index.end()) {
                pred_index[key] = out.preds.size();
                out.preds.push_back({key.first, key.second, {}});
                it = pred_index.find(key);
            }
            out.preds[it->second].clauses.push_back(std::move(cl));
        }
        // Assign body-clause indices used in program point ids.
        for (Predicate& p : out.preds) {
            int idx = 0;
            for (Clause& cl : p.clauses)
                cl.body_index = cl.body.empty() ? 0 : ++idx;
        }
        // Slash-import syntax needs the '/' operator only inside use_module
        // lists; it is handled there. Validate entries now.
        for (const EntryDecl& e : out.entries)
            if (!out.find_pred(e.head.name, e.head.arity()))
                throw ParseError("entry references undefined predicate " + e.head.name +
                                     "/" + std::to_string(e.head.arity()),
                                 e.line, 1);
        return out;
    }
};

}  // namespace

Program parse_program(const std::string& text) {
    ProgramParser p(text);
    return p.parse();
}

std::string print_program(const Program& p) {
    std::ostringstream out;
    if (!p.module_name.empty())
        out << ":- module(" << p.module_name << ", []).\n";
    for (const auto& [name, arity] : p.imports)
        out << ":- use_module(" << name << ", [" << name << "/" << arity << "]).\n";
    for (const EntryDecl& e : p.entries) {
        out << ":- entry " << print_term(e.head) << " : (";
        for (size_t i = 0; i < e.props.size(); ++i)
            out << (i ? ", " : "") << print_term(e.props[i]);
        out << ").\n";
    }
    for (const TrustDecl& t : p.trusts) {
        out << ":- trust success " << print_term(t.head) << " : (";
        for (size_t i = 0; i < t.call_props.size(); ++i)
            out << (i ? ", " : "") << print_term(t.call_props[i]);
        out << ") => (";
        for (size_t i = 0; i < t.success_props.size(); ++i)
            out << (i ? ", " : "") << print_term(t.success_props[i]);
        out << ").\n";
    }
    for (const Predicate& pred : p.preds) {
        out << "\n";
        for (const Clause& cl : pred.clauses) {
            out << print_term(cl.head);
            if (!cl.body.empty()) {
                out << " :-\n";
                for (size_t i = 0; i < cl.body.size(); ++i)
                    out << "    " << print_term(cl.body[i])
                        << (i + 1 < cl.body.size() ? ",\n" : "");
            }
            out << ".\n";
        }
    }
    return out.str();
}

std::string entry_point_id(const EntryDecl& entry) {
    return entry_point_id(entry.head.name, entry.head.arity());
}

std::string entry_point_id(const std::string& pred, int arity) {
    return pred + "/" + std::to_string(arity) + "/0";
}

std::string program_point_id(const std::string& pred, int arity, int body_clause,
                             int literal) {
    return pred + "/" + std::to_string(arity) + "/" + std::to_string(body_clause) +
           "/" + std::to_string(literal);
}

std::vector<std::string> program_points(const Program& p) {
    std::vector<std::string> out;
    if (!p.entries.empty())
        out.push_back(entry_point_id(p.entries.front()));
    for (const Predicate& pred : p.preds)
        for (const Clause& cl : pred.clauses)
            for (size_t i = 0; i < cl.body.size(); ++i)
                out.push_back(program_point_id(pred.name, pred.arity, cl.body_index,
                                               static_cast<int>(i) + 1));
    return out;
}

}  // namespace absdist
