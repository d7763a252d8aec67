#include "growthlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "growthlab/xi_tower.hpp"

namespace growthlab {

namespace {

const double kE = std::exp(1.0);

Expr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_const(const Expr& e) { return e->kind == NodeKind::Const; }
bool is_const_value(const Expr& e, long long num, long long den = 1) {
    return is_const(e) && e->value == Rational(num, den);
}
bool small_rational(const Rational& r) {
    return std::llabs(r.num) <= 1000000000LL && r.den <= 1000000000LL;
}

} // namespace

Expr constant(const Rational& r) {
    Node n;
    n.kind = NodeKind::Const;
    n.value = r;
    return make(std::move(n));
}
Expr constant(long long v) { return constant(Rational(v)); }
Expr const_e() {
    Node n;
    n.kind = NodeKind::ConstE;
    return make(std::move(n));
}
Expr var() {
    Node n;
    n.kind = NodeKind::Var;
    return make(std::move(n));
}

namespace {
Expr binary(NodeKind k, const Expr& a, const Expr& b) {
    Node n;
    n.kind = k;
    n.kids = {a, b};
    return make(std::move(n));
}
Expr unary_indexed(NodeKind k, int index, const Expr& u) {
    Node n;
    n.kind = k;
    n.index = index;
    n.kids = {u};
    return make(std::move(n));
}
} // namespace

Expr add(const Expr& a, const Expr& b) { return binary(NodeKind::Add, a, b); }

// "0 - r" is the canonical spelling of a negative literal, so that exact
// form folds back into a single constant; nothing else is rewritten.
Expr sub(const Expr& a, const Expr& b) {
    if (is_const_value(a, 0) && is_const(b) && small_rational(b->value))
        return constant(-b->value);
    return binary(NodeKind::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) { return binary(NodeKind::Mul, a, b); }

// A quotient of two constants is a rational literal, not a division.
Expr div(const Expr& a, const Expr& b) {
    if (is_const(a) && is_const(b) && b->value.num != 0 &&
        small_rational(a->value) && small_rational(b->value))
        return constant(Rational(a->value.num * b->value.den,
                                 a->value.den * b->value.num));
    return binary(NodeKind::Div, a, b);
}

Expr pow(const Expr& base, const Expr& exponent) {
    return binary(NodeKind::Pow, base, exponent);
}

Expr expk(int k, const Expr& u) {
    if (k < 1) fail(ErrorKind::Domain, "ExpK index must be at least 1");
    return unary_indexed(NodeKind::ExpK, k, u);
}
Expr logk(int k, const Expr& u) {
    if (k < 1) fail(ErrorKind::Domain, "LogK index must be at least 1");
    return unary_indexed(NodeKind::LogK, k, u);
}
Expr xi_node(int n, const Expr& u) {
    if (n < 0) fail(ErrorKind::Domain, "Xi level must be nonnegative");
    return unary_indexed(NodeKind::Xi, n, u);
}
Expr xi_inv_node(int n, const Expr& u) {
    if (n < 0) fail(ErrorKind::Domain, "XiInv level must be nonnegative");
    return unary_indexed(NodeKind::XiInv, n, u);
}
Expr chi_node(int n, const Expr& u) {
    if (n < 2) fail(ErrorKind::Domain, "Chi level must be at least 2");
    return unary_indexed(NodeKind::Chi, n, u);
}
Expr frac_iter_node(const Rational& t, const Expr& u) {
    Node n;
    n.kind = NodeKind::FracIter;
    n.t = t;
    n.kids = {u};
    return make(std::move(n));
}
Expr named_node(NamedKind which, int k, const Expr& u) {
    if (which == NamedKind::Fk && k < 0)
        fail(ErrorKind::Domain, "fk index must be nonnegative");
    Node n;
    n.kind = NodeKind::Named;
    n.named = which;
    n.index = k;
    n.kids = {u};
    return make(std::move(n));
}
Expr gadget_node(int m, const Expr& F, const Expr& delta, const Expr& u) {
    if (m < 3) fail(ErrorKind::Domain, "gadget level must be at least 3");
    Node n;
    n.kind = NodeKind::Gadget;
    n.index = m;
    n.kids = {F, delta, u};
    return make(std::move(n));
}
Expr numeric_deriv_node(const Expr& u) {
    Node n;
    n.kind = NodeKind::NumericDeriv;
    n.kids = {u};
    return make(std::move(n));
}

bool equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->index != b->index || !(a->value == b->value) ||
        !(a->t == b->t) || a->named != b->named ||
        a->kids.size() != b->kids.size())
        return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!equal(a->kids[i], b->kids[i])) return false;
    return true;
}

// ---------------------------------------------------------------- printing

namespace {

// Precedence levels: 1 additive, 2 multiplicative, 3 power, 4 atom.
int prec(const Node& n) {
    switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Pow: return 3;
    case NodeKind::Const:
        if (n.value.num < 0) return 1;  // printed as 0 - r
        return n.value.den > 1 ? 2 : 4; // printed as p/q
    default: return 4;
    }
}

std::string render(const Expr& e, int ctx);

std::string call1(const char* name, int index, const Expr& u) {
    return std::string(name) + "(" + std::to_string(index) + ", " +
           render(u, 1) + ")";
}

std::string raw(const Expr& e) {
    const Node& n = *e;
    switch (n.kind) {
    case NodeKind::Const:
        if (n.value.num < 0) return "0 - " + (-n.value).str();
        return n.value.str();
    case NodeKind::ConstE: return "e";
    case NodeKind::Var: return "x";
    case NodeKind::Add: return render(n.kids[0], 1) + " + " + render(n.kids[1], 2);
    case NodeKind::Sub: return render(n.kids[0], 1) + " - " + render(n.kids[1], 2);
    case NodeKind::Mul: return render(n.kids[0], 2) + "*" + render(n.kids[1], 3);
    case NodeKind::Div: return render(n.kids[0], 2) + "/" + render(n.kids[1], 3);
    case NodeKind::Pow: return render(n.kids[0], 4) + "^" + render(n.kids[1], 4);
    case NodeKind::ExpK:
        if (n.index == 1) return "exp(" + render(n.kids[0], 1) + ")";
        return call1("ExpK", n.index, n.kids[0]);
    case NodeKind::LogK:
        if (n.index == 1) return "log(" + render(n.kids[0], 1) + ")";
        return call1("LogK", n.index, n.kids[0]);
    case NodeKind::Xi: return call1("Xi", n.index, n.kids[0]);
    case NodeKind::XiInv: return call1("XiInv", n.index, n.kids[0]);
    case NodeKind::Chi: return call1("Chi", n.index, n.kids[0]);
    case NodeKind::FracIter:
        return "FracIter(exp, " + n.t.str() + ", " + render(n.kids[0], 1) + ")";
    case NodeKind::Named:
        switch (n.named) {
        case NamedKind::Fk: return call1("fk", n.index, n.kids[0]);
        case NamedKind::G: return "g(" + render(n.kids[0], 1) + ")";
        case NamedKind::H: return "h(" + render(n.kids[0], 1) + ")";
        case NamedKind::Ell: return "ell(" + render(n.kids[0], 1) + ")";
        }
        break;
    case NodeKind::Gadget:
        return "gadget(" + std::to_string(n.index) + ", " +
               render(n.kids[0], 1) + ", " + render(n.kids[1], 1) + ", " +
               render(n.kids[2], 1) + ")";
    case NodeKind::NumericDeriv:
        // Diagnostic form only; numeric-derivative markers are not part of
        // the surface grammar.
        return "FDiff(" + render(n.kids[0], 1) + ")";
    }
    return "?";
}

std::string render(const Expr& e, int ctx) {
    std::string s = raw(e);
    if (prec(*e) < ctx) return "(" + s + ")";
    return s;
}

} // namespace

std::string print(const Expr& e) { return render(e, 1); }

// ----------------------------------------------------------------- parsing

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool peek_is(char c) {
        skip();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (peek_is(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail_here(const std::string& expected) {
        skip();
        fail_at_offset(pos, expected);
    }
    [[noreturn]] void fail_at_offset(size_t at, const std::string& expected) {
        throw Error(ErrorKind::Parse,
                    "expected " + expected + " at offset " + std::to_string(at),
                    at);
    }
    void expect(char c, const std::string& what) {
        if (!eat(c)) fail_here(what);
    }

    long long parse_uint(const std::string& what, int max_digits = 9) {
        skip();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start) fail_at_offset(start, what);
        if (pos - start > static_cast<size_t>(max_digits))
            fail_at_offset(start, what + " with at most " +
                                      std::to_string(max_digits) + " digits");
        return std::atoll(s.substr(start, pos - start).c_str());
    }

    Expr parse_number() {
        size_t start = pos;
        long long int_part = parse_uint("a number", 18);
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            size_t frac_start = pos;
            while (pos < s.size() &&
                   std::isdigit(static_cast<unsigned char>(s[pos])))
                ++pos;
            if (pos == frac_start) fail_at_offset(pos, "digits after the decimal point");
            size_t frac_len = pos - frac_start;
            if (pos - start > 18)
                fail_at_offset(start, "a number with at most 18 digits");
            long long den = 1;
            long long num = int_part;
            for (size_t i = 0; i < frac_len; ++i) {
                den *= 10;
                num = num * 10 + (s[frac_start + i] - '0');
            }
            return constant(Rational(num, den));
        }
        return constant(Rational(int_part));
    }

    Rational parse_rational_literal() {
        skip();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        long long num = parse_uint("a rational literal");
        long long den = 1;
        if (eat('/')) {
            size_t den_at = pos;
            den = parse_uint("a nonzero denominator");
            if (den == 0) fail_at_offset(den_at, "a nonzero denominator");
        }
        return Rational(neg ? -num : num, den);
    }

    std::string parse_name() {
        skip();
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    Expr parse_call(const std::string& name, size_t name_at) {
        expect('(', "'(' after " + name);
        Expr result;
        if (name == "exp" || name == "log" || name == "g" || name == "h" ||
            name == "ell") {
            Expr u = parse_expr();
            if (name == "exp") result = expk(1, u);
            else if (name == "log") result = logk(1, u);
            else if (name == "g") result = named_node(NamedKind::G, 0, u);
            else if (name == "h") result = named_node(NamedKind::H, 0, u);
            else result = named_node(NamedKind::Ell, 0, u);
        } else if (name == "ExpK" || name == "LogK" || name == "Xi" ||
                   name == "XiInv" || name == "Chi" || name == "fk") {
            size_t idx_at = pos;
            skip();
            idx_at = pos;
            long long idx = parse_uint("an integer index");
            expect(',', "',' after the index");
            Expr u = parse_expr();
            if ((name == "ExpK" || name == "LogK") && idx < 1)
                fail_at_offset(idx_at, "an index of at least 1");
            if (name == "Chi" && idx < 2)
                fail_at_offset(idx_at, "a level of at least 2");
            if (name == "ExpK") result = expk(static_cast<int>(idx), u);
            else if (name == "LogK") result = logk(static_cast<int>(idx), u);
            else if (name == "Xi") result = xi_node(static_cast<int>(idx), u);
            else if (name == "XiInv") result = xi_inv_node(static_cast<int>(idx), u);
            else if (name == "Chi") result = chi_node(static_cast<int>(idx), u);
            else result = named_node(NamedKind::Fk, static_cast<int>(idx), u);
        } else if (name == "FracIter") {
            skip();
            size_t fn_at = pos;
            std::string fn = parse_name();
            if (fn != "exp")
                fail_at_offset(fn_at, "'exp' (the only function with fractional iterates)");
            expect(',', "',' after the function name");
            Rational t = parse_rational_literal();
            expect(',', "',' after the iterate exponent");
            Expr u = parse_expr();
            result = frac_iter_node(t, u);
        } else if (name == "gadget") {
            skip();
            size_t m_at = pos;
            long long m = parse_uint("a level");
            if (m < 3) fail_at_offset(m_at, "a gadget level of at least 3");
            expect(',', "',' after the level");
            Expr F = parse_expr();
            expect(',', "',' after the reference function");
            Expr d = parse_expr();
            expect(',', "',' after the decay function");
            Expr u = parse_expr();
            result = gadget_node(static_cast<int>(m), F, d, u);
        } else {
            fail_at_offset(name_at, "a known function name");
        }
        expect(')', "')'");
        return result;
    }

    Expr parse_atom() {
        skip();
        if (pos >= s.size()) fail_here("a number, name, or '('");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t name_at = pos;
            std::string name = parse_name();
            if (name == "x" && !peek_is('(')) return var();
            if (name == "e" && !peek_is('(')) return const_e();
            return parse_call(name, name_at);
        }
        fail_here("a number, name, or '('");
    }

    Expr parse_factor() {
        Expr b = parse_atom();
        if (eat('^')) {
            Expr e = parse_atom();
            return pow(b, e);
        }
        return b;
    }

    Expr parse_term() {
        Expr e = parse_factor();
        while (true) {
            if (eat('*')) e = mul(e, parse_factor());
            else if (eat('/')) {
                skip();
                size_t rhs_at = pos;
                Expr rhs = parse_factor();
                if (is_const(e) && is_const_value(rhs, 0))
                    fail_at_offset(rhs_at, "a nonzero divisor");
                e = div(e, rhs);
            } else break;
        }
        return e;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        while (true) {
            if (eat('+')) e = add(e, parse_term());
            else if (eat('-')) e = sub(e, parse_term());
            else break;
        }
        return e;
    }

    Expr parse_all() {
        Expr e = parse_expr();
        skip();
        if (pos != s.size()) fail_here("end of input");
        return e;
    }
};

} // namespace

Expr parse(const std::string& text) { return Parser(text).parse_all(); }

std::optional<Expr> try_parse(const std::string& text, ParseDiagnostic& diag) {
    try {
        return parse(text);
    } catch (const Error& e) {
        diag.offset = e.offset().value_or(0);
        diag.message = e.what();
        diag.expected = e.what();
        const std::string prefix = "expected ";
        std::string w = e.what();
        size_t at = w.find(" at offset ");
        if (w.rfind(prefix, 0) == 0 && at != std::string::npos)
            diag.expected = w.substr(prefix.size(), at - prefix.size());
        return std::nullopt;
    }
}

// ------------------------------------------------------------ derivatives

bool differentiable(const Expr& e) {
    switch (e->kind) {
    case NodeKind::Chi:
    case NodeKind::FracIter:
    case NodeKind::Named:
    case NodeKind::Gadget:
    case NodeKind::NumericDeriv:
        return false;
    default:
        break;
    }
    for (const Expr& k : e->kids)
        if (!differentiable(k)) return false;
    return true;
}

namespace {

// Simplifying combinators used only while assembling derivatives, so the
// output is readable; parsed expressions are never rewritten.
Expr s_add(const Expr& a, const Expr& b) {
    if (is_const_value(a, 0)) return b;
    if (is_const_value(b, 0)) return a;
    if (is_const(a) && is_const(b) && small_rational(a->value) &&
        small_rational(b->value))
        return constant(rational_add(a->value, b->value));
    return add(a, b);
}
Expr s_sub(const Expr& a, const Expr& b) {
    if (is_const_value(b, 0)) return a;
    if (is_const(a) && is_const(b) && small_rational(a->value) &&
        small_rational(b->value))
        return constant(rational_add(a->value, -b->value));
    return sub(a, b);
}
Expr s_mul(const Expr& a, const Expr& b) {
    if (is_const_value(a, 0) || is_const_value(b, 0)) return constant(0LL);
    if (is_const_value(a, 1)) return b;
    if (is_const_value(b, 1)) return a;
    if (is_const(a) && is_const(b) && small_rational(a->value) &&
        small_rational(b->value))
        return constant(Rational(a->value.num * b->value.num,
                                 a->value.den * b->value.den));
    return mul(a, b);
}
Expr s_div(const Expr& a, const Expr& b) {
    if (is_const_value(a, 0)) return constant(0LL);
    if (is_const_value(b, 1)) return a;
    return div(a, b);
}
Expr s_pow(const Expr& u, const Rational& c) {
    if (c == Rational(1)) return u;
    if (c == Rational(0)) return constant(1LL);
    return pow(u, constant(c));
}

Expr derive(const Expr& e);

Expr derive_pow(const Expr& e) {
    const Expr& u = e->kids[0];
    const Expr& v = e->kids[1];
    if (is_const(v)) {
        Rational c = v->value;
        return s_mul(s_mul(constant(c), s_pow(u, rational_add(c, Rational(-1)))),
                     derive(u));
    }
    if (u->kind == NodeKind::ConstE) return s_mul(e, derive(v));
    // General rule: (u^v)' = u^v (v' log u + v u'/u).
    return s_mul(e, s_add(s_mul(derive(v), logk(1, u)),
                          s_div(s_mul(v, derive(u)), u)));
}

Expr derive(const Expr& e) {
    switch (e->kind) {
    case NodeKind::Const:
    case NodeKind::ConstE:
        return constant(0LL);
    case NodeKind::Var:
        return constant(1LL);
    case NodeKind::Add:
        return s_add(derive(e->kids[0]), derive(e->kids[1]));
    case NodeKind::Sub:
        return s_sub(derive(e->kids[0]), derive(e->kids[1]));
    case NodeKind::Mul:
        return s_add(s_mul(derive(e->kids[0]), e->kids[1]),
                     s_mul(e->kids[0], derive(e->kids[1])));
    case NodeKind::Div:
        return s_div(s_sub(s_mul(derive(e->kids[0]), e->kids[1]),
                           s_mul(e->kids[0], derive(e->kids[1]))),
                     s_pow(e->kids[1], Rational(2)));
    case NodeKind::Pow:
        return derive_pow(e);
    case NodeKind::ExpK: {
        // (e_k(u))' = u' * e_1(u) * e_2(u) * ... * e_k(u).
        Expr p = derive(e->kids[0]);
        for (int i = 1; i <= e->index; ++i) p = s_mul(p, expk(i, e->kids[0]));
        return p;
    }
    case NodeKind::LogK: {
        // (log_k u)' = u' / (u * log u * ... * log_{k-1} u).
        Expr denom = e->kids[0];
        for (int i = 1; i < e->index; ++i) denom = s_mul(denom, logk(i, e->kids[0]));
        return s_div(derive(e->kids[0]), denom);
    }
    case NodeKind::Xi:
        return s_div(derive(e->kids[0]), chi_node(e->index, e->kids[0]));
    case NodeKind::XiInv:
        return s_mul(derive(e->kids[0]),
                     chi_node(e->index, xi_inv_node(e->index, e->kids[0])));
    case NodeKind::Chi:
    case NodeKind::FracIter:
    case NodeKind::Named:
    case NodeKind::Gadget:
    case NodeKind::NumericDeriv:
        return numeric_deriv_node(e);
    }
    fail(ErrorKind::Unsupported, "unknown node kind in differentiate");
}

} // namespace

Expr differentiate(const Expr& e) { return derive(e); }

// ------------------------------------------------------------- evaluation

namespace {

Magnitude eval_core(const Expr& e, const Magnitude& x, const Tower& tower);

double eval_native(const Expr& e, double x, const Tower& tower) {
    Magnitude r = eval_core(e, Magnitude(x), tower);
    auto v = r.to_real();
    if (!v)
        fail(ErrorKind::Overflow, "value exceeded native range where a real is required");
    return *v;
}

Magnitude eval_core(const Expr& e, const Magnitude& x, const Tower& tower) {
    int cap = tower.height_cap();
    switch (e->kind) {
    case NodeKind::Const: return Magnitude(e->value.value());
    case NodeKind::ConstE: return Magnitude(kE);
    case NodeKind::Var: return x;
    case NodeKind::Add:
        return mag_add(eval_core(e->kids[0], x, tower),
                       eval_core(e->kids[1], x, tower), cap);
    case NodeKind::Sub:
        return mag_sub(eval_core(e->kids[0], x, tower),
                       eval_core(e->kids[1], x, tower), cap);
    case NodeKind::Mul:
        return mag_mul(eval_core(e->kids[0], x, tower),
                       eval_core(e->kids[1], x, tower), cap);
    case NodeKind::Div:
        return mag_div(eval_core(e->kids[0], x, tower),
                       eval_core(e->kids[1], x, tower), cap);
    case NodeKind::Pow:
        return mag_pow(eval_core(e->kids[0], x, tower),
                       eval_core(e->kids[1], x, tower), cap);
    case NodeKind::ExpK: {
        Magnitude v = eval_core(e->kids[0], x, tower);
        for (int i = 0; i < e->index; ++i) v = mag_exp(v, cap);
        return v;
    }
    case NodeKind::LogK: {
        Magnitude v = eval_core(e->kids[0], x, tower);
        for (int i = 0; i < e->index; ++i) v = mag_log(v);
        return v;
    }
    case NodeKind::Xi:
        return Magnitude(tower.xi_mag(e->index, eval_core(e->kids[0], x, tower)));
    case NodeKind::XiInv: {
        Magnitude t = eval_core(e->kids[0], x, tower);
        auto tv = t.to_real();
        if (!tv)
            fail(ErrorKind::HeightCap,
                 "tower-sized argument to an inverse tower function");
        return tower.xi_inv(e->index, *tv);
    }
    case NodeKind::Chi:
        return tower.chi_mag(e->index, eval_core(e->kids[0], x, tower));
    case NodeKind::FracIter:
        return tower.frac_iter_exp(e->t.value(), eval_core(e->kids[0], x, tower));
    case NodeKind::Named: {
        Magnitude u = eval_core(e->kids[0], x, tower);
        Expr body;
        switch (e->named) {
        case NamedKind::Fk: body = builder_fk(e->index); break;
        case NamedKind::G: body = builder_g(); break;
        case NamedKind::H: body = builder_h(); break;
        case NamedKind::Ell: body = builder_ell(); break;
        }
        return eval_core(body, u, tower);
    }
    case NodeKind::Gadget: {
        Magnitude y = eval_core(e->kids[2], x, tower);
        return gadget_forward(e->index, e->kids[0], e->kids[1], y, tower);
    }
    case NodeKind::NumericDeriv: {
        auto xv = x.to_real();
        if (!xv)
            fail(ErrorKind::Unsupported,
                 "numeric derivative requires a native-range point");
        double h = std::max(1e-6, 1e-8 * std::fabs(*xv));
        double hi = eval_native(e->kids[0], *xv + h, tower);
        double lo = eval_native(e->kids[0], *xv - h, tower);
        return Magnitude((hi - lo) / (2.0 * h));
    }
    }
    fail(ErrorKind::Unsupported, "unknown node kind in eval");
}

} // namespace

Magnitude eval_mag(const Expr& e, const Magnitude& x, const Tower* tower) {
    return eval_core(e, x, tower ? *tower : Tower::standard());
}

double eval_real(const Expr& e, double x, const Tower* tower) {
    return eval_native(e, x, tower ? *tower : Tower::standard());
}

TowerReal eval_tower(const Expr& e, const TowerReal& x, const Tower* tower) {
    const Tower& t = tower ? *tower : Tower::standard();
    Magnitude r = eval_core(e, Magnitude(x), t);
    return r.as_tower(t.height_cap());
}

} // namespace growthlab
