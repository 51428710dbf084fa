#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <set>

#include <vcoarse/errors.hpp>
#include <vcoarse/formlang.hpp>

namespace vcoarse
{

// ---------------------------------------------------------------------------
// Lexer

namespace
{

enum class Tok { Ident, Number, LParen, RParen, Plus, Minus, Star, Slash, Caret, Colon, Lt, Le, Eq, Ge, Gt, Arrow,
                 LminusK, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
                ++i;
            }
            std::string word(s.substr(start, i - start));
            // L\K, with the backslash possibly doubled.
            if (word == "L" && i < s.size() && s[i] == '\\') {
                std::size_t j = i + 1;
                if (j < s.size() && s[j] == '\\') {
                    ++j;
                }
                if (j < s.size() && s[j] == 'K' && (j + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[j + 1])))) {
                    out.push_back({Tok::LminusK, "L\\K", start});
                    i = j + 1;
                    continue;
                }
            }
            out.push_back({Tok::Ident, std::move(word), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                ++i;
            }
            out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
            continue;
        }
        auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
        Tok t;
        std::size_t len = 1;
        switch (c) {
            case '(': t = Tok::LParen; break;
            case ')': t = Tok::RParen; break;
            case '+': t = Tok::Plus; break;
            case '-':
                t = two('>') ? Tok::Arrow : Tok::Minus;
                len = two('>') ? 2 : 1;
                break;
            case '*': t = Tok::Star; break;
            case '/': t = Tok::Slash; break;
            case '^': t = Tok::Caret; break;
            case ':': t = Tok::Colon; break;
            case '=': t = Tok::Eq; break;
            case '<':
                t = two('=') ? Tok::Le : Tok::Lt;
                len = two('=') ? 2 : 1;
                break;
            case '>':
                t = two('=') ? Tok::Ge : Tok::Gt;
                len = two('=') ? 2 : 1;
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        out.push_back({t, std::string(s.substr(start, len)), start});
        i += len;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

bool is_keyword(const std::string &w)
{
    static const std::set<std::string> words{"forall", "exists", "in", "and", "or", "not", "inK", "true", "false", "v"};
    return words.count(w) > 0;
}

std::shared_ptr<Expr> make_expr(Expr::Kind k, std::size_t pos, ExprPtr lhs = {}, ExprPtr rhs = {})
{
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->pos = pos;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

std::shared_ptr<Formula> make_formula(Formula::Kind k, std::size_t pos, FormulaPtr a = {}, FormulaPtr b = {})
{
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->pos = pos;
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
}

bool contains_val(const Expr &e)
{
    if (e.kind == Expr::Kind::Val) {
        return true;
    }
    return (e.lhs && contains_val(*e.lhs)) || (e.rhs && e.kind != Expr::Kind::Pow && contains_val(*e.rhs));
}

class Parser
{
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    FormulaPtr parse()
    {
        FormulaPtr f = formula();
        if (peek().kind != Tok::End) {
            throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        }
        return f;
    }

private:
    const Token &peek(std::size_t k = 0) const
    {
        return toks_[std::min(i_ + k, toks_.size() - 1)];
    }
    bool at_word(const char *w) const
    {
        return peek().kind == Tok::Ident && peek().text == w;
    }
    const Token &expect(Tok t, const char *what)
    {
        if (peek().kind != t) {
            throw ParseError(std::string("expected ") + what + (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"),
                             peek().pos);
        }
        return toks_[i_++];
    }

    FormulaPtr formula()
    {
        FormulaPtr lhs = disjunction();
        if (peek().kind == Tok::Arrow) {
            const std::size_t pos = toks_[i_++].pos;
            return make_formula(Formula::Kind::Implies, pos, lhs, formula());
        }
        return lhs;
    }

    FormulaPtr disjunction()
    {
        FormulaPtr lhs = conjunction();
        while (at_word("or")) {
            const std::size_t pos = toks_[i_++].pos;
            lhs = make_formula(Formula::Kind::Or, pos, lhs, conjunction());
        }
        return lhs;
    }

    FormulaPtr conjunction()
    {
        FormulaPtr lhs = unary();
        while (at_word("and")) {
            const std::size_t pos = toks_[i_++].pos;
            lhs = make_formula(Formula::Kind::And, pos, lhs, unary());
        }
        return lhs;
    }

    FormulaPtr unary()
    {
        if (at_word("not")) {
            const std::size_t pos = toks_[i_++].pos;
            return make_formula(Formula::Kind::Not, pos, unary());
        }
        if (at_word("forall") || at_word("exists")) {
            return quantified();
        }
        return primary();
    }

    FormulaPtr quantified()
    {
        const Token &q = toks_[i_++];
        auto f = make_formula(Formula::Kind::Quant, q.pos);
        f->quantifier = q.text == "forall" ? Quantifier::Forall : Quantifier::Exists;
        const Token &var = expect(Tok::Ident, "a variable");
        if (is_keyword(var.text)) {
            throw ParseError("'" + var.text + "' is reserved", var.pos);
        }
        f->var = var.text;
        if (!at_word("in")) {
            throw ParseError("expected 'in'", peek().pos);
        }
        ++i_;
        if (peek().kind == Tok::LminusK) {
            f->domain = Domain::LminusK;
        } else if (at_word("L")) {
            f->domain = Domain::L;
        } else if (at_word("K")) {
            f->domain = Domain::K;
        } else {
            throw ParseError("expected a domain L, K or L\\K", peek().pos);
        }
        ++i_;
        expect(Tok::Colon, "':'");
        f->a = formula();
        return f;
    }

    FormulaPtr primary()
    {
        if (at_word("true") || at_word("false")) {
            const Token &t = toks_[i_++];
            return make_formula(t.text == "true" ? Formula::Kind::True : Formula::Kind::False, t.pos);
        }
        if (peek().kind == Tok::LParen) {
            // Either a parenthesized formula or an atom whose left side starts with '('.
            const std::size_t save = i_;
            std::optional<ParseError> first;
            try {
                ++i_;
                FormulaPtr f = formula();
                expect(Tok::RParen, "')'");
                if (!continues_atom()) {
                    return f;
                }
            } catch (const ParseError &e) {
                first = e;
            }
            i_ = save;
            try {
                return atom();
            } catch (const ParseError &e) {
                if (first && first->position() > e.position()) {
                    throw *first;
                }
                throw;
            }
        }
        return atom();
    }

    bool continues_atom() const
    {
        switch (peek().kind) {
            case Tok::Plus: case Tok::Minus: case Tok::Star: case Tok::Slash: case Tok::Caret:
            case Tok::Lt: case Tok::Le: case Tok::Eq: case Tok::Ge: case Tok::Gt:
                return true;
            default:
                return false;
        }
    }

    FormulaPtr atom()
    {
        const std::size_t pos = peek().pos;
        if (at_word("inK")) {
            ++i_;
            expect(Tok::LParen, "'('");
            auto f = make_formula(Formula::Kind::InK, pos);
            f->lhs = expr();
            expect(Tok::RParen, "')'");
            return f;
        }
        ExprPtr lhs = expr();
        Rel rel;
        switch (peek().kind) {
            case Tok::Lt: rel = Rel::Lt; break;
            case Tok::Le: rel = Rel::Le; break;
            case Tok::Eq: rel = Rel::Eq; break;
            case Tok::Ge: rel = Rel::Ge; break;
            case Tok::Gt: rel = Rel::Gt; break;
            default:
                throw ParseError("expected a relation", peek().pos);
        }
        const std::size_t rel_pos = toks_[i_++].pos;
        ExprPtr rhs = expr();
        const bool valued = contains_val(*lhs) || contains_val(*rhs);
        auto f = make_formula(valued || rel != Rel::Eq ? Formula::Kind::Compare : Formula::Kind::TermEq, rel_pos);
        f->rel = rel;
        f->lhs = std::move(lhs);
        f->rhs = std::move(rhs);
        return f;
    }

    ExprPtr expr()
    {
        ExprPtr lhs = product();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token &op = toks_[i_++];
            lhs = make_expr(op.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub, op.pos, lhs, product());
        }
        return lhs;
    }

    ExprPtr product()
    {
        ExprPtr lhs = factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token &op = toks_[i_++];
            lhs = make_expr(op.kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div, op.pos, lhs, factor());
        }
        return lhs;
    }

    ExprPtr factor()
    {
        if (peek().kind == Tok::Minus) {
            const std::size_t pos = toks_[i_++].pos;
            return make_expr(Expr::Kind::Neg, pos, factor());
        }
        ExprPtr base = primary_expr();
        if (peek().kind == Tok::Caret) {
            const std::size_t pos = toks_[i_++].pos;
            ExprPtr exponent;
            if (at_word("p")) {
                auto id = make_expr(Expr::Kind::Ident, peek().pos);
                id->name = "p";
                exponent = id;
                ++i_;
            } else {
                bool negative = false;
                const std::size_t epos = peek().pos;
                if (peek().kind == Tok::Minus) {
                    negative = true;
                    ++i_;
                }
                const Token &n = expect(Tok::Number, "an integer exponent or p");
                auto num = make_expr(Expr::Kind::Number, epos);
                num->number = Rational(Integer(n.text));
                if (negative) {
                    num->number = -num->number;
                }
                exponent = num;
            }
            return make_expr(Expr::Kind::Pow, pos, base, exponent);
        }
        return base;
    }

    ExprPtr primary_expr()
    {
        const Token &t = peek();
        if (t.kind == Tok::Number) {
            ++i_;
            auto e = make_expr(Expr::Kind::Number, t.pos);
            e->number = Rational(Integer(t.text));
            return e;
        }
        if (t.kind == Tok::LParen) {
            ++i_;
            ExprPtr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "v" && peek(1).kind == Tok::LParen) {
                i_ += 2;
                ExprPtr inner = expr();
                expect(Tok::RParen, "')'");
                return make_expr(Expr::Kind::Val, t.pos, inner);
            }
            if (is_keyword(t.text)) {
                throw ParseError("unexpected '" + t.text + "'", t.pos);
            }
            ++i_;
            auto e = make_expr(Expr::Kind::Ident, t.pos);
            e->name = t.text;
            return e;
        }
        throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

// Printing precedences.
int precedence(const Expr &e)
{
    switch (e.kind) {
        case Expr::Kind::Add: case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul: case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

std::string print_at(const Expr &e, int min_prec)
{
    std::string s = print(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

int precedence(const Formula &f)
{
    switch (f.kind) {
        case Formula::Kind::Quant: return 0;
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::Not: return 4;
        default: return 5;
    }
}

// Quantifier bodies extend to the right, so a quantifier below a connective is always
// parenthesized.
std::string print_at(const Formula &f, int min_prec)
{
    std::string s = print(f);
    return precedence(f) < min_prec || f.kind == Formula::Kind::Quant ? "(" + s + ")" : s;
}

const char *rel_text(Rel r)
{
    switch (r) {
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Eq: return "=";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    return "?";
}

} // namespace

FormulaPtr parse_formula(std::string_view text)
{
    return Parser(text).parse();
}

std::string print(const Expr &e)
{
    switch (e.kind) {
        case Expr::Kind::Number: return to_string(e.number);
        case Expr::Kind::Ident: return e.name;
        case Expr::Kind::Neg: return "-" + print_at(*e.lhs, 3);
        case Expr::Kind::Add: return print_at(*e.lhs, 1) + " + " + print_at(*e.rhs, 2);
        case Expr::Kind::Sub: return print_at(*e.lhs, 1) + " - " + print_at(*e.rhs, 2);
        case Expr::Kind::Mul: return print_at(*e.lhs, 2) + " * " + print_at(*e.rhs, 3);
        case Expr::Kind::Div: return print_at(*e.lhs, 2) + " / " + print_at(*e.rhs, 3);
        case Expr::Kind::Pow: return print_at(*e.lhs, 5) + "^" + print(*e.rhs);
        case Expr::Kind::Val: return "v(" + print(*e.lhs) + ")";
    }
    return "?";
}

std::string print(const Formula &f)
{
    switch (f.kind) {
        case Formula::Kind::True: return "true";
        case Formula::Kind::False: return "false";
        case Formula::Kind::Quant: {
            const char *domain = f.domain == Domain::L ? "L" : f.domain == Domain::K ? "K" : "L\\K";
            return std::string(f.quantifier == Quantifier::Forall ? "forall " : "exists ") + f.var + " in " + domain
                   + " : " + print(*f.a);
        }
        case Formula::Kind::And: return print_at(*f.a, 3) + " and " + print_at(*f.b, 4);
        case Formula::Kind::Or: return print_at(*f.a, 2) + " or " + print_at(*f.b, 3);
        case Formula::Kind::Implies: return print_at(*f.a, 2) + " -> " + print_at(*f.b, 1);
        case Formula::Kind::Not: return "not " + print_at(*f.a, 4);
        case Formula::Kind::Compare:
        case Formula::Kind::TermEq: return print(*f.lhs) + " " + rel_text(f.rel) + " " + print(*f.rhs);
        case Formula::Kind::InK: return "inK(" + print(*f.lhs) + ")";
    }
    return "?";
}

bool same(const Expr &a, const Expr &b)
{
    if (a.kind != b.kind || a.number != b.number || a.name != b.name) {
        return false;
    }
    auto same_ptr = [](const ExprPtr &x, const ExprPtr &y) { return (!x && !y) || (x && y && same(*x, *y)); };
    return same_ptr(a.lhs, b.lhs) && same_ptr(a.rhs, b.rhs);
}

bool same(const Formula &a, const Formula &b)
{
    if (a.kind != b.kind) {
        return false;
    }
    auto same_f = [](const FormulaPtr &x, const FormulaPtr &y) { return (!x && !y) || (x && y && same(*x, *y)); };
    auto same_e = [](const ExprPtr &x, const ExprPtr &y) { return (!x && !y) || (x && y && same(*x, *y)); };
    switch (a.kind) {
        case Formula::Kind::Quant:
            return a.quantifier == b.quantifier && a.var == b.var && a.domain == b.domain && same_f(a.a, b.a);
        case Formula::Kind::Compare:
        case Formula::Kind::TermEq:
            return a.rel == b.rel && same_e(a.lhs, b.lhs) && same_e(a.rhs, b.rhs);
        case Formula::Kind::InK:
            return same_e(a.lhs, b.lhs);
        default:
            return same_f(a.a, b.a) && same_f(a.b, b.b);
    }
}

namespace
{

bool is_constant_name(const std::string &name)
{
    if (name == "p" || name == "t" || name == "theta" || name == "zeta") {
        return true;
    }
    return name.size() > 1 && name[0] == 't'
           && std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

void collect_free(const Expr &e, const std::set<std::string> &bound, std::set<std::string> &out)
{
    if (e.kind == Expr::Kind::Ident && !bound.count(e.name) && !is_constant_name(e.name)) {
        out.insert(e.name);
    }
    if (e.lhs) {
        collect_free(*e.lhs, bound, out);
    }
    if (e.rhs && e.kind != Expr::Kind::Pow) {
        collect_free(*e.rhs, bound, out);
    }
}

void collect_free(const Formula &f, std::set<std::string> bound, std::set<std::string> &out)
{
    if (f.kind == Formula::Kind::Quant) {
        bound.insert(f.var);
    }
    if (f.lhs) {
        collect_free(*f.lhs, bound, out);
    }
    if (f.rhs) {
        collect_free(*f.rhs, bound, out);
    }
    if (f.a) {
        collect_free(*f.a, bound, out);
    }
    if (f.b) {
        collect_free(*f.b, bound, out);
    }
}

bool mentions(const Expr &e, const std::string &var)
{
    if (e.kind == Expr::Kind::Ident && e.name == var) {
        return true;
    }
    return (e.lhs && mentions(*e.lhs, var)) || (e.rhs && e.kind != Expr::Kind::Pow && mentions(*e.rhs, var));
}

bool mentions(const Formula &f, const std::string &var)
{
    if (f.kind == Formula::Kind::Quant && f.var == var) {
        return false;
    }
    return (f.lhs && mentions(*f.lhs, var)) || (f.rhs && mentions(*f.rhs, var)) || (f.a && mentions(*f.a, var))
           || (f.b && mentions(*f.b, var));
}

} // namespace

std::vector<std::string> free_variables(const Formula &f)
{
    std::set<std::string> out;
    collect_free(f, {}, out);
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Values

std::string ExtValue::str() const
{
    if (inf > 0) {
        return "inf";
    }
    if (inf < 0) {
        return "-inf";
    }
    return g.str();
}

int compare(const ExtValue &a, const ExtValue &b)
{
    if (a.inf != 0 || b.inf != 0) {
        return a.inf < b.inf ? -1 : a.inf > b.inf ? 1 : 0;
    }
    const auto c = a.g <=> b.g;
    return c < 0 ? -1 : c > 0 ? 1 : 0;
}

EvalModel equal_char_model(const FieldModel &k, std::vector<ImmediateElement> generators)
{
    return EvalModel{k.value_group, false, k, std::nullopt, std::move(generators)};
}

EvalModel mixed_char_model(const GroupDescriptor &g, const GroupElement &vp, std::vector<ImmediateElement> generators)
{
    g.require(vp);
    if (vp.sign() <= 0) {
        throw StructuralError("v(p) must be positive");
    }
    return EvalModel{g, true, std::nullopt, vp, std::move(generators)};
}

Element series_element(PatternSeries s)
{
    Element e;
    e.kind = Element::Kind::Series;
    e.series = std::move(s);
    return e;
}

Element value_element(ExtValue v)
{
    Element e;
    e.kind = Element::Kind::ValueOnly;
    e.value = std::move(v);
    return e;
}

std::string Element::str() const
{
    switch (kind) {
        case Kind::Series: {
            const auto v = series->valuation();
            if (!v) {
                return "0";
            }
            if (series->is_finite() && series->finite_part().terms().size() == 1) {
                return "t^" + v->str();
            }
            return "series with value " + v->str();
        }
        case Kind::ValueOnly: return "element of value " + value->str();
        case Kind::Generator: return "generator #" + std::to_string(generator);
        case Kind::SchedulePoint: return "b_" + std::to_string(index) + " of generator #" + std::to_string(generator);
    }
    return "?";
}

std::string to_string(Truth t)
{
    return t == Truth::True ? "TRUE" : t == Truth::False ? "FALSE" : "UNKNOWN";
}

std::string to_string(EvalMode m)
{
    return m == EvalMode::Oracle ? "ORACLE" : m == EvalMode::Bounded ? "BOUNDED" : "DIRECT";
}

namespace
{

Truth k_not(Truth a)
{
    return a == Truth::True ? Truth::False : a == Truth::False ? Truth::True : Truth::Unknown;
}

Truth k_and(Truth a, Truth b)
{
    if (a == Truth::False || b == Truth::False) {
        return Truth::False;
    }
    return a == Truth::True && b == Truth::True ? Truth::True : Truth::Unknown;
}

Truth k_or(Truth a, Truth b)
{
    return k_not(k_and(k_not(a), k_not(b)));
}

Truth truth(bool b)
{
    return b ? Truth::True : Truth::False;
}

bool holds(int cmp, Rel r)
{
    switch (r) {
        case Rel::Lt: return cmp < 0;
        case Rel::Le: return cmp <= 0;
        case Rel::Eq: return cmp == 0;
        case Rel::Ge: return cmp >= 0;
        case Rel::Gt: return cmp > 0;
    }
    return false;
}

Rel flip(Rel r)
{
    switch (r) {
        case Rel::Lt: return Rel::Gt;
        case Rel::Le: return Rel::Ge;
        case Rel::Ge: return Rel::Le;
        case Rel::Gt: return Rel::Lt;
        default: return r;
    }
}

std::optional<ExtValue> add_values(const ExtValue &a, const ExtValue &b)
{
    if (a.inf != 0 && b.inf != 0 && a.inf != b.inf) {
        return std::nullopt;
    }
    if (a.inf != 0) {
        return a;
    }
    if (b.inf != 0) {
        return b;
    }
    return ExtValue::finite(a.g + b.g);
}

std::optional<ExtValue> scale_value(const Rational &r, const ExtValue &a)
{
    if (a.inf != 0) {
        if (r == 0) {
            return std::nullopt;
        }
        return ExtValue{a.inf * sgn(r), a.g};
    }
    return ExtValue::finite(r * a.g);
}

// A field term evaluated as far as the model allows.
struct TermVal {
    enum class Kind { Exact, Value, Unknown };

    Kind kind = Kind::Unknown;
    PatternSeries series;
    ExtValue value;

    static TermVal exact(PatternSeries s)
    {
        TermVal t;
        t.kind = Kind::Exact;
        t.series = std::move(s);
        return t;
    }
    static TermVal of_value(ExtValue v)
    {
        TermVal t;
        t.kind = Kind::Value;
        t.value = std::move(v);
        return t;
    }
    static TermVal unknown()
    {
        return TermVal{};
    }
};

// Signed flattening of + and - chains.
void flatten(const ExprPtr &e, int sign, std::vector<std::pair<int, ExprPtr>> &out)
{
    switch (e->kind) {
        case Expr::Kind::Add:
            flatten(e->lhs, sign, out);
            flatten(e->rhs, sign, out);
            return;
        case Expr::Kind::Sub:
            flatten(e->lhs, sign, out);
            flatten(e->rhs, -sign, out);
            return;
        case Expr::Kind::Neg:
            flatten(e->lhs, -sign, out);
            return;
        default:
            out.emplace_back(sign, e);
    }
}

// Recognized valuation shapes in an immediate element z and a K-variable c.
struct Shape {
    enum class Kind { Linear, ArtinSchreier, KummerPower };
    Kind kind;
    std::string z;
    std::string c;
};

std::optional<std::string> ident_of(const Expr &e)
{
    if (e.kind == Expr::Kind::Ident) {
        return e.name;
    }
    return std::nullopt;
}

std::optional<std::string> pth_power_of(const Expr &e, long p)
{
    if (e.kind != Expr::Kind::Pow) {
        return std::nullopt;
    }
    const Expr &x = *e.rhs;
    const bool is_p = (x.kind == Expr::Kind::Ident && x.name == "p") || (x.kind == Expr::Kind::Number && x.number == p);
    return is_p ? ident_of(*e.lhs) : std::nullopt;
}

// z - c, z^p - c^p, z^p - z - c^p + c, each up to overall sign and order of summands.
// `is_immediate` says which identifier may play z.
std::optional<Shape> match_shape(const ExprPtr &e, long p, const std::function<bool(const std::string &)> &is_immediate)
{
    std::vector<std::pair<int, ExprPtr>> parts;
    flatten(e, 1, parts);
    if (parts.size() != 2 && parts.size() != 4) {
        return std::nullopt;
    }
    // Normalize so that the z-part carries sign +1.
    struct Piece {
        int sign;
        std::string name;
        bool power;
    };
    std::vector<Piece> pieces;
    for (const auto &[sign, x] : parts) {
        if (auto n = ident_of(*x)) {
            pieces.push_back({sign, *n, false});
        } else if (auto n = pth_power_of(*x, p)) {
            pieces.push_back({sign, *n, true});
        } else {
            return std::nullopt;
        }
    }
    std::string z;
    std::string c;
    for (const Piece &pc : pieces) {
        if (is_immediate(pc.name)) {
            if (!z.empty() && z != pc.name) {
                return std::nullopt;
            }
            z = pc.name;
        } else {
            if (!c.empty() && c != pc.name) {
                return std::nullopt;
            }
            c = pc.name;
        }
    }
    if (z.empty() || c.empty()) {
        return std::nullopt;
    }
    auto sign_of = [&](const std::string &n, bool power) -> int {
        for (const Piece &pc : pieces) {
            if (pc.name == n && pc.power == power) {
                return pc.sign;
            }
        }
        return 0;
    };
    auto count = [&](const std::string &n, bool power) {
        return std::count_if(pieces.begin(), pieces.end(), [&](const Piece &pc) { return pc.name == n && pc.power == power; });
    };
    if (pieces.size() == 2) {
        for (const bool power : {false, true}) {
            if (count(z, power) == 1 && count(c, power) == 1 && sign_of(z, power) == -sign_of(c, power)) {
                return Shape{power ? Shape::Kind::KummerPower : Shape::Kind::Linear, z, c};
            }
        }
        return std::nullopt;
    }
    const int s = sign_of(z, true);
    if (s != 0 && count(z, true) == 1 && count(z, false) == 1 && count(c, true) == 1 && count(c, false) == 1
        && sign_of(z, false) == -s && sign_of(c, true) == -s && sign_of(c, false) == s) {
        return Shape{Shape::Kind::ArtinSchreier, z, c};
    }
    return std::nullopt;
}

// Linear combination sum coef_i * v(term_i) + constant * 1_0.
struct Linear {
    std::vector<std::pair<Rational, ExprPtr>> terms;
    Rational constant = 0;
};

class Evaluator
{
public:
    Evaluator(const EvalModel &model, const EvalOptions &options) : m_(model), opt_(options) {}

    EvalResult run(const Formula &f, const Bindings &env)
    {
        for (const std::string &v : free_variables(f)) {
            if (!env.count(v)) {
                throw EvalError("unbound variable '" + v + "'");
            }
        }
        EvalResult r;
        r.value = eval(f, env);
        r.mode = used_bounded_ ? EvalMode::Bounded : used_oracle_ ? EvalMode::Oracle : EvalMode::Direct;
        r.witnesses = witnesses_;
        r.candidates_used = candidates_used_;
        return r;
    }

private:
    long p() const
    {
        return m_.prime();
    }
    std::size_t rank() const
    {
        return m_.group.rank();
    }

    // ---- scalars and value expressions

    Rational scalar(const Expr &e) const
    {
        switch (e.kind) {
            case Expr::Kind::Number: return e.number;
            case Expr::Kind::Ident:
                if (e.name == "p") {
                    return Rational(p());
                }
                break;
            case Expr::Kind::Neg: return -scalar(*e.lhs);
            case Expr::Kind::Add: return scalar(*e.lhs) + scalar(*e.rhs);
            case Expr::Kind::Sub: return scalar(*e.lhs) - scalar(*e.rhs);
            case Expr::Kind::Mul: return scalar(*e.lhs) * scalar(*e.rhs);
            case Expr::Kind::Div: {
                const Rational d = scalar(*e.rhs);
                if (d == 0) {
                    throw EvalError("division by zero in a value coefficient at position " + std::to_string(e.pos));
                }
                return scalar(*e.lhs) / d;
            }
            case Expr::Kind::Pow: return rational_pow(scalar(*e.lhs), static_cast<long>(scalar(*e.rhs).get_num().get_si()));
            default: break;
        }
        throw EvalError("expected a rational constant or v(...) at position " + std::to_string(e.pos));
    }

    Linear linear(const ExprPtr &e) const
    {
        Linear out;
        switch (e->kind) {
            case Expr::Kind::Val:
                out.terms.emplace_back(Rational(1), e->lhs);
                return out;
            case Expr::Kind::Neg: {
                out = linear(e->lhs);
                for (auto &t : out.terms) {
                    t.first = -t.first;
                }
                out.constant = -out.constant;
                return out;
            }
            case Expr::Kind::Add:
            case Expr::Kind::Sub: {
                out = linear(e->lhs);
                Linear rhs = linear(e->rhs);
                const int s = e->kind == Expr::Kind::Add ? 1 : -1;
                for (auto &t : rhs.terms) {
                    out.terms.emplace_back(s * t.first, t.second);
                }
                out.constant += s * rhs.constant;
                return out;
            }
            case Expr::Kind::Mul:
            case Expr::Kind::Div: {
                const bool left_valued = contains_val(*e->lhs);
                const bool right_valued = contains_val(*e->rhs);
                if (left_valued && right_valued) {
                    throw EvalError("product of two values at position " + std::to_string(e->pos));
                }
                if (e->kind == Expr::Kind::Div && right_valued) {
                    throw EvalError("division by a value at position " + std::to_string(e->pos));
                }
                if (!left_valued && !right_valued) {
                    out.constant = scalar(*e);
                    return out;
                }
                Rational k = scalar(left_valued ? *e->rhs : *e->lhs);
                if (e->kind == Expr::Kind::Div) {
                    if (k == 0) {
                        throw EvalError("division by zero at position " + std::to_string(e->pos));
                    }
                    k = 1 / k;
                }
                out = linear(left_valued ? e->lhs : e->rhs);
                for (auto &t : out.terms) {
                    t.first *= k;
                }
                out.constant *= k;
                return out;
            }
            default:
                out.constant = scalar(*e);
                return out;
        }
    }

    std::optional<ExtValue> value_of(const TermVal &t) const
    {
        if (t.kind == TermVal::Kind::Exact) {
            const auto v = t.series.valuation();
            return v ? ExtValue::finite(*v) : ExtValue::infinity(rank());
        }
        if (t.kind == TermVal::Kind::Value) {
            return t.value;
        }
        return std::nullopt;
    }

    std::optional<ExtValue> evaluate_linear(const Linear &lin, const Bindings &env)
    {
        std::vector<Rational> c(rank());
        c[0] = lin.constant;
        std::optional<ExtValue> acc = ExtValue::finite(GroupElement(std::move(c)));
        for (const auto &[k, e] : lin.terms) {
            const auto v = value_of(term(*e, env));
            if (!v) {
                return std::nullopt;
            }
            const auto kv = scale_value(k, *v);
            if (!kv) {
                return std::nullopt;
            }
            acc = add_values(*acc, *kv);
            if (!acc) {
                return std::nullopt;
            }
        }
        return acc;
    }

    // ---- terms

    const ImmediateElement *generator_of(const std::string &name, const Bindings &env) const
    {
        const auto it = env.find(name);
        if (it != env.end()) {
            return it->second.kind == Element::Kind::Generator ? &m_.generators.at(it->second.generator) : nullptr;
        }
        if (name == "theta" && !m_.generators.empty()) {
            return &m_.generators.front();
        }
        return nullptr;
    }

    PatternSeries constant_series(long n) const
    {
        const FieldModel &k = *m_.field;
        return lift(k, SeriesElement::monomial(m_.group.zero(), k.residue.from_int(n)));
    }

    TermVal element_term(const Element &el) const
    {
        if (el.series && m_.field) {
            return TermVal::exact(*el.series);
        }
        switch (el.kind) {
            case Element::Kind::ValueOnly:
                return TermVal::of_value(*el.value);
            case Element::Kind::Generator:
                return TermVal::of_value(ExtValue::finite(m_.generators.at(el.generator).value));
            case Element::Kind::SchedulePoint: {
                const ImmediateElement &g = m_.generators.at(el.generator);
                // b_j is closer to x than x is to 0, so it has the value of x.
                if (static_cast<std::size_t>(el.index) < g.schedule.size() && g.value < g.schedule[el.index]) {
                    return TermVal::of_value(ExtValue::finite(g.value));
                }
                return TermVal::unknown();
            }
            default:
                return TermVal::unknown();
        }
    }

    // Declared-generator shapes evaluated at a schedule point c = b_j.
    std::optional<TermVal> declared_shape(const ExprPtr &e, const Bindings &env) const
    {
        auto immediate = [&](const std::string &n) { return generator_of(n, env) != nullptr; };
        const auto shape = match_shape(e, p(), immediate);
        if (!shape) {
            return std::nullopt;
        }
        const ImmediateElement *g = generator_of(shape->z, env);
        const auto it = env.find(shape->c);
        if (g->series || it == env.end() || it->second.kind != Element::Kind::SchedulePoint
            || &m_.generators.at(it->second.generator) != g) {
            return std::nullopt;
        }
        const std::size_t j = static_cast<std::size_t>(it->second.index);
        if (j >= g->schedule.size()) {
            return TermVal::unknown();
        }
        const GroupElement &s = g->schedule[j];
        switch (shape->kind) {
            case Shape::Kind::Linear:
                return TermVal::of_value(ExtValue::finite(s));
            case Shape::Kind::ArtinSchreier:
                return s.sign() < 0 ? TermVal::of_value(ExtValue::finite(Rational(p()) * s)) : TermVal::unknown();
            case Shape::Kind::KummerPower:
                if (m_.vp && s < Rational(1, p() - 1) * *m_.vp + g->value) {
                    return TermVal::of_value(ExtValue::finite(Rational(p()) * s));
                }
                return TermVal::unknown();
        }
        return std::nullopt;
    }

    TermVal combine_sum(const TermVal &a, const TermVal &b, bool subtract) const
    {
        if (a.kind == TermVal::Kind::Exact && b.kind == TermVal::Kind::Exact) {
            return TermVal::exact(subtract ? sub(*m_.field, a.series, b.series) : add(*m_.field, a.series, b.series));
        }
        const auto va = value_of(a);
        const auto vb = value_of(b);
        if (!va || !vb) {
            return TermVal::unknown();
        }
        const int c = compare(*va, *vb);
        if (c == 0) {
            // Cancellation possible unless one side is zero.
            if (va->inf > 0) {
                return TermVal::of_value(*va);
            }
            return TermVal::unknown();
        }
        return TermVal::of_value(c < 0 ? *va : *vb);
    }

    TermVal term(const Expr &e, const Bindings &env) const
    {
        // Shapes need the shared pointer; rebuild one without ownership.
        const ExprPtr self(std::shared_ptr<const Expr>{}, &e);
        if (e.kind == Expr::Kind::Sub || e.kind == Expr::Kind::Add) {
            if (auto d = declared_shape(self, env)) {
                return *d;
            }
            // zeta - 1, or 1 - zeta.
            const Expr &l = *e.lhs;
            const Expr &r = *e.rhs;
            const bool zeta_minus_one = e.kind == Expr::Kind::Sub
                                        && ((l.kind == Expr::Kind::Ident && l.name == "zeta" && r.kind == Expr::Kind::Number && r.number == 1)
                                            || (r.kind == Expr::Kind::Ident && r.name == "zeta" && l.kind == Expr::Kind::Number && l.number == 1));
            if (zeta_minus_one && !env.count("zeta")) {
                if (!m_.mixed) {
                    return TermVal::of_value(ExtValue::infinity(rank()));
                }
                return TermVal::of_value(ExtValue::finite(Rational(1, p() - 1) * *m_.vp));
            }
        }
        switch (e.kind) {
            case Expr::Kind::Number: {
                if (!is_integer(e.number)) {
                    throw EvalError("non-integer field constant at position " + std::to_string(e.pos));
                }
                if (e.number == 0) {
                    return m_.field ? TermVal::exact(PatternSeries()) : TermVal::of_value(ExtValue::infinity(rank()));
                }
                if (m_.field) {
                    const long n = static_cast<long>(e.number.get_num().get_si() % p());
                    return TermVal::exact(constant_series(n));
                }
                return TermVal::of_value(
                    ExtValue::finite(Rational(p_adic_valuation(e.number, p())) * *m_.vp));
            }
            case Expr::Kind::Ident: {
                const auto it = env.find(e.name);
                if (it != env.end()) {
                    return element_term(it->second);
                }
                if (e.name == "p") {
                    return m_.field ? TermVal::exact(PatternSeries()) : TermVal::of_value(ExtValue::finite(*m_.vp));
                }
                if (e.name == "theta") {
                    if (m_.generators.empty()) {
                        throw EvalError("the model has no distinguished immediate element");
                    }
                    Element g;
                    g.kind = Element::Kind::Generator;
                    g.series = m_.generators.front().series;
                    return element_term(g);
                }
                if (e.name == "zeta") {
                    return m_.field ? TermVal::exact(constant_series(1)) : TermVal::of_value(ExtValue::finite(m_.group.zero()));
                }
                if (e.name == "t" || is_constant_name(e.name)) {
                    const std::size_t i = e.name == "t" ? 0 : std::stoul(e.name.substr(1));
                    if (i >= rank()) {
                        throw EvalError("no parameter " + e.name + " in rank " + std::to_string(rank()));
                    }
                    const GroupElement g = m_.group.basis(i);
                    if (m_.field) {
                        return TermVal::exact(lift(*m_.field, SeriesElement::monomial(g)));
                    }
                    return TermVal::of_value(ExtValue::finite(g));
                }
                throw EvalError("unbound variable '" + e.name + "'");
            }
            case Expr::Kind::Neg: {
                TermVal a = term(*e.lhs, env);
                if (a.kind == TermVal::Kind::Exact) {
                    return TermVal::exact(neg(*m_.field, a.series));
                }
                return a;
            }
            case Expr::Kind::Add:
            case Expr::Kind::Sub:
                return combine_sum(term(*e.lhs, env), term(*e.rhs, env), e.kind == Expr::Kind::Sub);
            case Expr::Kind::Mul: {
                const TermVal a = term(*e.lhs, env);
                const TermVal b = term(*e.rhs, env);
                if (a.kind == TermVal::Kind::Exact && b.kind == TermVal::Kind::Exact && a.series.is_finite()
                    && b.series.is_finite()) {
                    return TermVal::exact(lift(*m_.field, mul(*m_.field, a.series.finite_part(), b.series.finite_part())));
                }
                const auto va = value_of(a);
                const auto vb = value_of(b);
                if (!va || !vb) {
                    return TermVal::unknown();
                }
                if (va->inf > 0 || vb->inf > 0) {
                    return TermVal::of_value(ExtValue::infinity(rank()));
                }
                return TermVal::of_value(ExtValue::finite(va->g + vb->g));
            }
            case Expr::Kind::Div: {
                const TermVal a = term(*e.lhs, env);
                const TermVal b = term(*e.rhs, env);
                const auto vb = value_of(b);
                if (vb && vb->inf > 0) {
                    throw EvalError("division by zero at position " + std::to_string(e.pos));
                }
                if (a.kind == TermVal::Kind::Exact && b.kind == TermVal::Kind::Exact && a.series.is_finite()
                    && b.series.is_finite() && b.series.finite_part().terms().size() == 1) {
                    const auto &[g, c] = *b.series.finite_part().terms().begin();
                    const SeriesElement inverse = SeriesElement::monomial(-g, m_.field->residue.inv(c));
                    return TermVal::exact(lift(*m_.field, mul(*m_.field, a.series.finite_part(), inverse)));
                }
                const auto va = value_of(a);
                if (!va || !vb) {
                    return TermVal::unknown();
                }
                if (va->inf > 0) {
                    return TermVal::of_value(*va);
                }
                return TermVal::of_value(ExtValue::finite(va->g - vb->g));
            }
            case Expr::Kind::Pow: {
                const TermVal a = term(*e.lhs, env);
                const Expr &x = *e.rhs;
                const long k = x.kind == Expr::Kind::Ident ? p() : static_cast<long>(x.number.get_num().get_si());
                if (a.kind == TermVal::Kind::Exact) {
                    if (k == p()) {
                        return TermVal::exact(frobenius(*m_.field, a.series));
                    }
                    if (a.series.is_finite() && k >= 0) {
                        SeriesElement acc = constant_series(1).finite_part();
                        for (long i = 0; i < k; ++i) {
                            acc = mul(*m_.field, acc, a.series.finite_part());
                        }
                        return TermVal::exact(lift(*m_.field, acc));
                    }
                    if (a.series.is_finite() && a.series.finite_part().terms().size() == 1) {
                        const auto &[g, c] = *a.series.finite_part().terms().begin();
                        const Coef ci = m_.field->residue.pow(m_.field->residue.inv(c), static_cast<unsigned long>(-k));
                        return TermVal::exact(lift(*m_.field, SeriesElement::monomial(Rational(k) * g, ci)));
                    }
                }
                const auto va = value_of(a);
                if (!va) {
                    return TermVal::unknown();
                }
                if (va->inf > 0) {
                    if (k <= 0) {
                        throw EvalError("non-positive power of zero at position " + std::to_string(e.pos));
                    }
                    return TermVal::of_value(*va);
                }
                return TermVal::of_value(ExtValue::finite(Rational(k) * va->g));
            }
            case Expr::Kind::Val:
                throw EvalError("v(...) inside a field term at position " + std::to_string(e.pos));
        }
        return TermVal::unknown();
    }

    // ---- formulas

    Truth eval(const Formula &f, const Bindings &env)
    {
        switch (f.kind) {
            case Formula::Kind::True: return Truth::True;
            case Formula::Kind::False: return Truth::False;
            case Formula::Kind::Not: return k_not(eval(*f.a, env));
            case Formula::Kind::And: {
                const Truth a = eval(*f.a, env);
                return a == Truth::False ? a : k_and(a, eval(*f.b, env));
            }
            case Formula::Kind::Or: {
                const Truth a = eval(*f.a, env);
                return a == Truth::True ? a : k_or(a, eval(*f.b, env));
            }
            case Formula::Kind::Implies: {
                const Truth a = eval(*f.a, env);
                return a == Truth::False ? Truth::True : k_or(k_not(a), eval(*f.b, env));
            }
            case Formula::Kind::Compare: {
                const auto l = evaluate_linear(linear(f.lhs), env);
                const auto r = evaluate_linear(linear(f.rhs), env);
                if (!l || !r) {
                    return Truth::Unknown;
                }
                return truth(holds(compare(*l, *r), f.rel));
            }
            case Formula::Kind::TermEq: {
                const TermVal a = term(*f.lhs, env);
                const TermVal b = term(*f.rhs, env);
                if (a.kind == TermVal::Kind::Exact && b.kind == TermVal::Kind::Exact) {
                    return truth(a.series == b.series);
                }
                const auto va = value_of(a);
                const auto vb = value_of(b);
                if (va && vb && compare(*va, *vb) != 0) {
                    return Truth::False;
                }
                return Truth::Unknown;
            }
            case Formula::Kind::InK: return in_k(f.lhs, env);
            case Formula::Kind::Quant: return quantifier(f, env);
        }
        return Truth::Unknown;
    }

    Truth in_k(const ExprPtr &e, const Bindings &env) const
    {
        std::vector<std::pair<int, ExprPtr>> parts;
        flatten(e, 1, parts);
        // Declared relations: x^p in K (Kummer), x^p - x in K (Artin-Schreier).
        auto gen = [&](const Expr &x) { return ident_of(x) ? generator_of(*ident_of(x), env) : nullptr; };
        if (parts.size() == 1) {
            if (const auto z = pth_power_of(*parts[0].second, p()); z && generator_of(*z, env)) {
                const ImmediateElement *g = generator_of(*z, env);
                if (g->relation == ImmediateElement::Relation::Kummer) {
                    return Truth::True;
                }
            }
            if (gen(*parts[0].second) != nullptr) {
                return Truth::False;
            }
        }
        if (parts.size() == 2 && parts[0].first == -parts[1].first) {
            for (int swap = 0; swap < 2; ++swap) {
                const Expr &a = *parts[swap].second;
                const Expr &b = *parts[1 - swap].second;
                const auto z = pth_power_of(a, p());
                const ImmediateElement *g = gen(b);
                if (z && g && generator_of(*z, env) == g && g->relation == ImmediateElement::Relation::ArtinSchreier) {
                    return Truth::True;
                }
            }
        }
        const TermVal t = term(*e, env);
        if (t.kind == TermVal::Kind::Exact) {
            return truth(t.series.is_finite());
        }
        return Truth::Unknown;
    }

    Truth quantifier(const Formula &f, const Bindings &env)
    {
        const bool exists = f.quantifier == Quantifier::Exists;
        if (f.domain == Domain::LminusK) {
            if (m_.generators.empty()) {
                throw EvalError("domain L\\K needs a distinguished immediate element in the model");
            }
            Truth acc = exists ? Truth::False : Truth::True;
            for (std::size_t i = 0; i < m_.generators.size(); ++i) {
                Bindings inner = env;
                Element g;
                g.kind = Element::Kind::Generator;
                g.generator = i;
                g.series = m_.generators[i].series;
                inner[f.var] = g;
                const Truth t = eval(*f.a, inner);
                acc = exists ? k_or(acc, t) : k_and(acc, t);
                if (exists && t == Truth::True) {
                    witnesses_.push_back(f.var + " := " + m_.generators[i].name);
                }
            }
            return acc;
        }
        if (f.domain == Domain::K && opt_.oracle) {
            if (const auto r = oracle(f.quantifier, f.var, *f.a, env)) {
                used_oracle_ = true;
                return *r;
            }
        }
        used_bounded_ = true;
        std::vector<Element> domain = candidates();
        if (f.domain == Domain::L) {
            for (std::size_t i = 0; i < m_.generators.size(); ++i) {
                Element g;
                g.kind = Element::Kind::Generator;
                g.generator = i;
                g.series = m_.generators[i].series;
                domain.insert(domain.begin() + static_cast<long>(std::min<std::size_t>(1, domain.size())), g);
            }
            domain.resize(std::min(domain.size(), opt_.budget));
        }
        candidates_used_ = std::max(candidates_used_, domain.size());
        for (const Element &c : domain) {
            Bindings inner = env;
            inner[f.var] = c;
            const Truth t = eval(*f.a, inner);
            if (exists && t == Truth::True) {
                witnesses_.push_back(f.var + " := " + c.str());
                return Truth::True;
            }
            if (!exists && t == Truth::False) {
                witnesses_.push_back(f.var + " := " + c.str() + " (counterexample)");
                return Truth::False;
            }
        }
        // The domain is infinite; the finite search decides nothing else.
        return Truth::Unknown;
    }

    const std::vector<Element> &candidates()
    {
        if (!candidates_) {
            candidates_ = k_candidates(m_, opt_.budget);
        }
        return *candidates_;
    }

    // ---- segment oracle

    std::optional<Truth> oracle(Quantifier q, const std::string &var, const Formula &body, const Bindings &env)
    {
        const bool exists = q == Quantifier::Exists;
        if (!mentions(body, var)) {
            return eval(body, env);
        }
        auto split = [&](const Formula &f, Formula::Kind kind, std::vector<const Formula *> &free,
                         std::vector<const Formula *> &dep) {
            std::function<void(const Formula &)> walk = [&](const Formula &g) {
                if (g.kind == kind) {
                    walk(*g.a);
                    walk(*g.b);
                } else {
                    (mentions(g, var) ? dep : free).push_back(&g);
                }
            };
            walk(f);
        };
        switch (body.kind) {
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                const bool is_and = body.kind == Formula::Kind::And;
                std::vector<const Formula *> free;
                std::vector<const Formula *> dep;
                split(body, body.kind, free, dep);
                Truth acc = is_and ? Truth::True : Truth::False;
                for (const Formula *g : free) {
                    acc = is_and ? k_and(acc, eval(*g, env)) : k_or(acc, eval(*g, env));
                }
                // forall distributes over and, exists over or.
                if ((is_and && !exists) || (!is_and && exists)) {
                    for (const Formula *g : dep) {
                        const auto r = oracle(q, var, *g, env);
                        if (!r) {
                            return std::nullopt;
                        }
                        acc = is_and ? k_and(acc, *r) : k_or(acc, *r);
                    }
                    return acc;
                }
                if (dep.size() != 1) {
                    return std::nullopt;
                }
                const auto r = oracle(q, var, *dep.front(), env);
                if (!r) {
                    return std::nullopt;
                }
                return is_and ? k_and(acc, *r) : k_or(acc, *r);
            }
            case Formula::Kind::Implies: {
                if (!mentions(*body.a, var)) {
                    const auto r = oracle(q, var, *body.b, env);
                    if (!r) {
                        return std::nullopt;
                    }
                    return k_or(k_not(eval(*body.a, env)), *r);
                }
                if (!mentions(*body.b, var)) {
                    const Quantifier dual = exists ? Quantifier::Forall : Quantifier::Exists;
                    const auto r = oracle(dual, var, *body.a, env);
                    if (!r) {
                        return std::nullopt;
                    }
                    return k_or(k_not(*r), eval(*body.b, env));
                }
                return std::nullopt;
            }
            case Formula::Kind::Not: {
                const Quantifier dual = exists ? Quantifier::Forall : Quantifier::Exists;
                const auto r = oracle(dual, var, *body.a, env);
                return r ? std::optional<Truth>(k_not(*r)) : std::nullopt;
            }
            case Formula::Kind::Compare:
                return oracle_atom(exists, var, body, env);
            default:
                return std::nullopt;
        }
    }

    // exists/forall c in K : sum k_i v(t_i) REL sum ..., where exactly one t_i mentions c and
    // has a recognized shape in an immediate element z. Then v(t_i) = m * beta with beta
    // ranging over the approach set V = v(z - K), and the atom is a half-line condition on beta.
    std::optional<Truth> oracle_atom(bool exists, const std::string &var, const Formula &atom, const Bindings &env)
    {
        Linear lin = linear(atom.lhs);
        const Linear rhs = linear(atom.rhs);
        for (const auto &[k, e] : rhs.terms) {
            lin.terms.emplace_back(-k, e);
        }
        lin.constant -= rhs.constant;

        std::optional<std::pair<Rational, ExprPtr>> target;
        Linear rest;
        rest.constant = lin.constant;
        for (const auto &t : lin.terms) {
            if (mentions(*t.second, var)) {
                if (target) {
                    return std::nullopt;
                }
                target = t;
            } else {
                rest.terms.push_back(t);
            }
        }
        if (!target) {
            return std::nullopt;
        }
        auto immediate = [&](const std::string &n) { return n != var && generator_of(n, env) != nullptr; };
        const auto shape = match_shape(target->second, p(), immediate);
        if (!shape || shape->c != var) {
            return std::nullopt;
        }
        const ImmediateElement &z = *generator_of(shape->z, env);
        const Segment &v_set = z.approach;
        const GroupDescriptor &g = v_set.group();
        if (!(g == m_.group) || v_set.direction() != Direction::Initial) {
            return std::nullopt;
        }
        Rational mult = 1;
        if (shape->kind == Shape::Kind::ArtinSchreier) {
            // v(w^p - w) = p v(w) for v(w) < 0.
            if (!subset_of(v_set, Segment::element_cut(g, Direction::Initial, g.zero(), false))) {
                return std::nullopt;
            }
            mult = p();
        } else if (shape->kind == Shape::Kind::KummerPower) {
            mult = p();
            if (m_.mixed) {
                // (z - c)^p dominates the binomial cross terms while v(z - c) < v(p)/(p-1) + v(z).
                const GroupElement bound = Rational(1, p() - 1) * *m_.vp + z.value;
                if (!g.contains(bound) || !subset_of(v_set, Segment::element_cut(g, Direction::Initial, bound, false))) {
                    return std::nullopt;
                }
            }
        }
        const auto r = evaluate_linear(rest, env);
        if (!r) {
            return std::nullopt;
        }
        const Rational a = target->first * mult;
        if (r->inf != 0) {
            // The beta-term is finite, so the sign of r decides.
            return truth(holds(r->inf, atom.rel));
        }
        // a beta + r REL 0.
        const GroupElement gamma = Rational(Rational(-1) / a) * r->g;
        if (!g.contains(gamma)) {
            return std::nullopt;
        }
        const Rel rel = a < 0 ? flip(atom.rel) : atom.rel;
        if (exists) {
            return truth(exists_in(v_set, rel, gamma));
        }
        // forall beta: beta REL gamma  <=>  not exists beta: not (beta REL gamma).
        switch (rel) {
            case Rel::Lt: return truth(!exists_in(v_set, Rel::Ge, gamma));
            case Rel::Le: return truth(!exists_in(v_set, Rel::Gt, gamma));
            case Rel::Gt: return truth(!exists_in(v_set, Rel::Le, gamma));
            case Rel::Ge: return truth(!exists_in(v_set, Rel::Lt, gamma));
            case Rel::Eq: return truth(v_set.is_empty());
        }
        return std::nullopt;
    }

    static bool exists_in(const Segment &v, Rel rel, const GroupElement &gamma)
    {
        if (v.is_empty()) {
            return false;
        }
        const GroupDescriptor &g = v.group();
        switch (rel) {
            // Nonempty initial segments are unbounded below.
            case Rel::Lt:
            case Rel::Le:
                return true;
            case Rel::Gt: return !subset_of(v, Segment::element_cut(g, Direction::Initial, gamma, true));
            case Rel::Ge: return !subset_of(v, Segment::element_cut(g, Direction::Initial, gamma, false));
            case Rel::Eq: return v.contains(gamma);
        }
        return false;
    }

    const EvalModel &m_;
    EvalOptions opt_;
    std::optional<std::vector<Element>> candidates_;
    bool used_oracle_ = false;
    bool used_bounded_ = false;
    std::size_t candidates_used_ = 0;
    std::vector<std::string> witnesses_;
};

} // namespace

EvalResult evaluate(const Formula &f, const EvalModel &model, const Bindings &bindings, const EvalOptions &options)
{
    return Evaluator(model, options).run(f, bindings);
}

std::vector<Element> k_candidates(const EvalModel &model, std::size_t count)
{
    std::vector<Element> out;
    if (count == 0) {
        return out;
    }
    const GroupDescriptor &g = model.group;
    const long p = g.prime();
    const std::size_t n = g.rank();
    out.push_back(model.field ? series_element(PatternSeries()) : value_element(ExtValue::infinity(n)));

    std::set<GroupElement> seen;
    for (long h = 1; out.size() < count && h <= 32; ++h) {
        for (std::size_t i = 0; i < model.generators.size() && out.size() < count; ++i) {
            const ImmediateElement &gen = model.generators[i];
            const long j = h - 1;
            if (!gen.series && static_cast<std::size_t>(j) >= gen.schedule.size()) {
                continue;
            }
            Element e;
            e.kind = Element::Kind::SchedulePoint;
            e.generator = i;
            e.index = j;
            if (gen.series && model.field) {
                e.series = lift(*model.field, schedule_element(*gen.series, j));
            }
            out.push_back(std::move(e));
        }
        // Monomials with coordinates in (1/p^(h-1))Z, |coordinate| <= h, smallest first.
        const Integer den = integer_pow(p, static_cast<unsigned long>(h - 1));
        const Integer span = den * h;
        std::vector<GroupElement> fresh;
        std::vector<Integer> idx(n, -span);
        while (true) {
            std::vector<Rational> coords(n);
            for (std::size_t k = 0; k < n; ++k) {
                coords[k] = Rational(idx[k], den);
                coords[k].canonicalize();
            }
            GroupElement e(std::move(coords));
            if (!e.is_zero() && g.contains(e) && !seen.count(e)) {
                fresh.push_back(e);
            }
            std::size_t k = 0;
            while (k < n && idx[k] == span) {
                idx[k] = -span;
                ++k;
            }
            if (k == n) {
                break;
            }
            ++idx[k];
        }
        auto size = [](const GroupElement &e) {
            Rational m = 0;
            for (const Rational &c : e.coords()) {
                m = std::max(m, Rational(abs(c)));
            }
            return m;
        };
        std::stable_sort(fresh.begin(), fresh.end(), [&](const GroupElement &a, const GroupElement &b) {
            const Rational sa = size(a);
            const Rational sb = size(b);
            return sa != sb ? sa < sb : a < b;
        });
        for (const GroupElement &e : fresh) {
            seen.insert(e);
            if (out.size() < count) {
                out.push_back(model.field ? series_element(lift(*model.field, SeriesElement::monomial(e)))
                                          : value_element(ExtValue::finite(e)));
            }
        }
    }
    return out;
}

AgreementReport check_definition(const Formula &phi, const std::string &var, const Segment &direct,
                                 const EvalModel &model, const std::vector<GroupElement> &samples,
                                 const EvalOptions &options, bool throw_on_disagreement)
{
    const auto free = free_variables(phi);
    if (free.size() != 1 || free.front() != var) {
        throw EvalError("definition must have exactly the free variable '" + var + "'");
    }
    if (direct.direction() != Direction::Final) {
        throw PreconditionError("direct set must be a final segment of values");
    }
    AgreementReport report;
    report.budget = options.budget;
    for (const GroupElement &gamma : samples) {
        model.group.require(gamma);
        Bindings env;
        env[var] = model.field ? series_element(lift(*model.field, SeriesElement::monomial(gamma)))
                               : value_element(ExtValue::finite(gamma));
        const EvalResult r = evaluate(phi, model, env, options);
        ++report.samples;
        if (r.mode == EvalMode::Oracle) {
            ++report.oracle_decided;
        }
        if (r.value == Truth::Unknown) {
            ++report.unknown;
            continue;
        }
        const bool expected = direct.contains(gamma);
        if ((r.value == Truth::True) == expected) {
            ++report.agreements;
        } else {
            ++report.disagreements;
            report.disagreement_details.push_back("v(" + var + ") = " + gamma.str() + ": formula " + to_string(r.value)
                                                  + ", direct set " + direct.str() + " says "
                                                  + (expected ? "member" : "not a member"));
        }
    }
    if (throw_on_disagreement && report.disagreements > 0) {
        throw DefinabilityCheckFailure(print(phi) + ": " + report.disagreement_details.front());
    }
    return report;
}

std::vector<GroupElement> definability_samples(const Segment &direct, std::size_t count, std::uint64_t seed)
{
    const GroupDescriptor &g = direct.group();
    const long p = g.prime();
    const long den = p * p * p;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> wide(-4 * den, 4 * den);
    std::uniform_int_distribution<long> narrow(-2, 2);
    std::vector<GroupElement> out;
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 1000 * (count + 1)) {
            throw PreconditionError("could not draw samples inside the group " + std::to_string(g.rank()));
        }
        std::vector<Rational> coords(g.rank());
        const bool near = out.size() % 2 == 1;
        for (std::size_t i = 0; i < g.rank(); ++i) {
            coords[i] = Rational(wide(rng), den);
            if (near) {
                if (i < direct.level()) {
                    coords[i] = direct.shift()[i];
                    if (i + 1 == direct.level()) {
                        coords[i] += Rational(narrow(rng), den);
                    }
                }
            }
            coords[i].canonicalize();
        }
        GroupElement e(std::move(coords));
        if (g.contains(e)) {
            out.push_back(std::move(e));
        }
    }
    return out;
}

} // namespace vcoarse
