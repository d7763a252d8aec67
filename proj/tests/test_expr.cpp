#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "growthlab/expr.hpp"
#include "growthlab/xi_tower.hpp"

using namespace growthlab;

namespace {

const double kE = std::exp(1.0);

double rel_err(double got, double want) {
    double scale = std::max(std::fabs(want), 1e-300);
    return std::fabs(got - want) / scale;
}

// Oracle: central finite difference of an expression's own evaluation.
double fd_oracle(const Expr& e, double x) {
    double h = std::max(1e-6, 1e-8 * std::fabs(x));
    return (eval_real(e, x + h) - eval_real(e, x - h)) / (2.0 * h);
}

ErrorKind parse_error_kind(const std::string& text, size_t* offset = nullptr) {
    try {
        parse(text);
    } catch (const Error& err) {
        if (offset && err.offset()) *offset = *err.offset();
        return err.kind();
    }
    return ErrorKind::Unsupported; // sentinel: no error raised
}

} // namespace

TEST_CASE("parser produces the expected trees") {
    Expr a = parse("x + x/log(x)");
    Expr b = add(var(), div(var(), logk(1, var())));
    CHECK(equal(a, b));

    CHECK(equal(parse("exp(x)"), expk(1, var())));
    CHECK(equal(parse("exp(x)"), parse("ExpK(1, x)")));
    CHECK(equal(parse("log(x)"), parse("LogK(1, x)")));

    CHECK(equal(parse("XiInv(3, Xi(3, x) + 1/Xi(3, x))"), builder_g()));

    Expr named = parse("g(x)");
    CHECK(named->kind == NodeKind::Named);
    CHECK(named->named == NamedKind::G);
    CHECK_FALSE(equal(named, builder_g())); // reference node, not the expansion

    Expr fk = parse("fk(3, x)");
    CHECK(fk->kind == NodeKind::Named);
    CHECK(fk->index == 3);

    Expr fi = parse("FracIter(exp, -1/2, x)");
    CHECK(fi->kind == NodeKind::FracIter);
    CHECK(fi->t == Rational(-1, 2));
    CHECK(parse("FracIter(exp, 1/3, x)")->t == Rational(1, 3));

    CHECK(parse("2.5")->value == Rational(5, 2));
    CHECK(parse("0.125")->value == Rational(1, 8));
    CHECK(parse("7")->value == Rational(7));
    CHECK(parse("e")->kind == NodeKind::ConstE);
}

TEST_CASE("parse failures carry the leftmost offset") {
    size_t off = 0;
    CHECK(parse_error_kind("x + + 2", &off) == ErrorKind::Parse);
    CHECK(off == 4);

    off = 0;
    CHECK(parse_error_kind("x^2^3", &off) == ErrorKind::Parse);
    CHECK(off == 3);

    CHECK(parse_error_kind("") == ErrorKind::Parse);
    CHECK(parse_error_kind("ExpK(0, x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("LogK(0, x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("Chi(1, x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("gadget(2, x, x, x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("FracIter(log, 1/2, x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("foo(x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("x)") == ErrorKind::Parse);
    CHECK(parse_error_kind("(x + 1") == ErrorKind::Parse);

    off = 0;
    CHECK(parse_error_kind("1/0", &off) == ErrorKind::Parse);
    CHECK(off == 2);

    ParseDiagnostic diag;
    CHECK_FALSE(try_parse("x + + 2", diag).has_value());
    CHECK(diag.offset == 4);
    CHECK_FALSE(diag.message.empty());
    CHECK(try_parse("x + 2", diag).has_value());
}

TEST_CASE("print then parse reproduces every tree in the corpus") {
    std::vector<std::string> corpus = {
        "x",
        "e",
        "2",
        "5/3",
        "2.75",
        "x + 2",
        "x - 2",
        "0 - 3",
        "2*x",
        "x/2",
        "x^2",
        "e^x",
        "2^x",
        "x^(1/2)",
        "exp(x)",
        "log(x)",
        "ExpK(2, x)",
        "LogK(3, x)",
        "Xi(3, x)",
        "Xi(4, x)",
        "XiInv(3, x)",
        "XiInv(4, x)",
        "Chi(2, x)",
        "Chi(3, x)",
        "FracIter(exp, 1/2, x)",
        "FracIter(exp, -1/3, x)",
        "fk(0, x)",
        "fk(2, x)",
        "g(x)",
        "h(x)",
        "ell(x)",
        "x + x/log(x)",
        "(x + 1)*(x - 1)",
        "x*log(x)*LogK(2, x)",
        "Xi(3, x) + 1/Xi(3, x)",
        "XiInv(3, Xi(3, x) + 1)",
        "x/(1 + x)",
        "log(x)/x",
        "e*x + e^2",
        "exp(x + 1/2)",
        "gadget(4, Xi(3, x), 1/log(x), x)",
    };
    CHECK(corpus.size() >= 30);
    for (const auto& text : corpus) {
        CAPTURE(text);
        Expr e = parse(text);
        std::string printed = print(e);
        CAPTURE(printed);
        Expr reparsed = parse(printed);
        CHECK(equal(e, reparsed));
    }
    // Builder outputs also survive the rendering round trip.
    std::vector<Expr> built = {builder_fk(0), builder_fk(1), builder_fk(4),
                               builder_g(), builder_h(), builder_ell(),
                               between_gadget_unchecked(xi_node(3, var()),
                                                        div(constant(1), logk(1, var())), 4)};
    for (const auto& e : built) {
        std::string printed = print(e);
        CAPTURE(printed);
        CHECK(equal(e, parse(printed)));
    }
}

TEST_CASE("symbolic derivatives take the expected closed forms") {
    CHECK(equal(differentiate(parse("Xi(3, x)")), parse("1/Chi(3, x)")));
    CHECK(equal(differentiate(parse("XiInv(3, x)")), parse("Chi(3, XiInv(3, x))")));

    Expr d2 = differentiate(parse("x^2"));
    for (double x : {0.5, 1.0, 2.0, 7.5}) {
        CHECK(rel_err(eval_real(d2, x), 2.0 * x) < 1e-14);
    }
    Expr dexp = differentiate(parse("ExpK(2, x)"));
    // (e^(e^x))' = e^x * e^(e^x)
    for (double x : {0.2, 1.0, 1.5}) {
        double want = std::exp(x) * std::exp(std::exp(x));
        CHECK(rel_err(eval_real(dexp, x), want) < 1e-13);
    }
    Expr dlog2 = differentiate(parse("LogK(2, x)"));
    for (double x : {3.0, 10.0, 50.0}) {
        CHECK(rel_err(eval_real(dlog2, x), 1.0 / (x * std::log(x))) < 1e-13);
    }
}

TEST_CASE("differentiable flag marks trees with purely symbolic rules") {
    CHECK(differentiable(parse("x + exp(x)/log(x) - x^3")));
    CHECK(differentiable(parse("Xi(3, x)")));
    CHECK(differentiable(parse("XiInv(4, x)")));
    CHECK_FALSE(differentiable(parse("Chi(3, x)")));
    CHECK_FALSE(differentiable(parse("FracIter(exp, 1/2, x)")));
    CHECK_FALSE(differentiable(parse("g(x)")));
    CHECK_FALSE(differentiable(parse("gadget(4, Xi(3, x), 1/log(x), x)")));
    CHECK_FALSE(differentiable(differentiate(parse("g(x)"))));
}

TEST_CASE("symbolic derivatives match central finite differences") {
    struct Probe {
        std::string text;
        double lo, hi;
    };
    std::vector<Probe> exprs = {
        {"x^3 - 2*x + 1", 1.6, 12.0},
        {"exp(x)", 1.6, 12.0},
        {"log(x)", 1.6, 12.0},
        {"ExpK(2, x)", 1.6, 6.0},
        {"LogK(2, x)", 1.6, 12.0},
        {"x + x/log(x)", 1.6, 12.0},
        {"x^x", 1.6, 12.0},
        {"x^(1/2)", 1.6, 12.0},
        {"e^x/x", 1.6, 12.0},
        {"Xi(3, x)", 1.6, 12.0},
        // XiInv(3, .) leaves native range above t near 3.5; its glue
        // points sit at the integers.
        {"XiInv(3, x)", 0.1, 2.9},
    };
    for (const auto& probe : exprs) {
        Expr e = parse(probe.text);
        Expr d = differentiate(e);
        int checked = 0;
        for (int i = 0; i < 20; ++i) {
            // Log-spaced points clear of the glue points of the level-3
            // construction (e and e^e on the forward side, integers on
            // the inverse side).
            double x = probe.lo * std::pow(probe.hi / probe.lo, i / 19.0);
            if (std::fabs(x - kE) < 0.05 || std::fabs(x - std::exp(kE)) < 0.05) continue;
            if (std::fabs(x - std::round(x)) < 0.05) continue;
            double sym = eval_real(d, x);
            double fd = fd_oracle(e, x);
            CAPTURE(probe.text);
            CAPTURE(x);
            CHECK(rel_err(sym, fd) < 1e-5);
            ++checked;
        }
        CHECK(checked >= 14);
    }
}

TEST_CASE("nodes without symbolic rules fall back to numeric differentiation") {
    Expr d = differentiate(parse("g(x)"));
    double x = 20.0;
    double manual = fd_oracle(parse("g(x)"), x);
    CHECK(rel_err(eval_real(d, x), manual) < 1e-12);
    // The derivative of a fractional iterate is evaluable even though no
    // symbolic rule exists.
    Expr dfi = differentiate(parse("FracIter(exp, 1/2, x)"));
    CHECK(eval_real(dfi, 2.0) > 0.0);
}

TEST_CASE("evaluation reproduces closed-form values") {
    CHECK(rel_err(eval_real(parse("ExpK(2, x)"), 1.0), std::exp(kE)) < 1e-15);
    CHECK(rel_err(eval_real(parse("x + x/log(x)"), kE), 2.0 * kE) < 1e-14);
    CHECK(rel_err(eval_real(parse("e"), 5.0), kE) < 1e-16);
    CHECK(rel_err(eval_real(parse("fk(0, x)"), 5.0), 6.0) < 1e-15);
    CHECK(rel_err(eval_real(parse("fk(1, x)"), 2.0), 2.0 * kE) < 1e-13);
    CHECK(rel_err(eval_real(parse("g(x)"), kE), std::exp(kE)) < 1e-11);
    CHECK(rel_err(eval_real(parse("FracIter(exp, 1, x)"), 2.0), std::exp(2.0)) < 1e-12);
    CHECK(rel_err(eval_real(parse("x^(1/2)"), 9.0), 3.0) < 1e-14);
    CHECK(rel_err(eval_real(parse("2^x"), 10.0), 1024.0) < 1e-14);
}

TEST_CASE("domain violations are hard errors") {
    CHECK_THROWS_AS(eval_real(parse("log(x)"), -1.0), Error);
    CHECK_THROWS_AS(eval_real(parse("log(x)"), 0.0), Error);
    CHECK_THROWS_AS(eval_real(parse("1/(x - 1)"), 1.0), Error);
    CHECK_THROWS_AS(eval_real(parse("Xi(3, x)"), 0.5), Error);
    CHECK_THROWS_AS(eval_real(parse("XiInv(3, x)"), -0.5), Error);
    try {
        eval_real(parse("log(x)"), -1.0);
        CHECK(false);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::Domain);
    }
}

TEST_CASE("tower evaluation shifts heights exactly") {
    TowerReal t = TowerReal::normalize(5, 2.0);
    TowerReal r = eval_tower(parse("exp(x)"), t);
    CHECK(r.height() == 6);
    CHECK(r.mantissa() == 2.0);

    TowerReal r3 = eval_tower(parse("ExpK(3, x)"), TowerReal::from_real(1.2));
    TowerReal want = TowerReal::from_real(std::exp(std::exp(std::exp(1.2))));
    CHECK(r3.height() == want.height());
    CHECK(rel_err(r3.mantissa(), want.mantissa()) < 1e-12);

    TowerReal lg = eval_tower(parse("log(x)"), TowerReal::normalize(5, 2.0));
    CHECK(lg.height() == 4);
    CHECK(lg.mantissa() == 2.0);
}

TEST_CASE("native and tower evaluation agree on shared range") {
    std::vector<std::string> exprs = {
        "x + 2", "2*x", "x^2", "exp(x)", "log(x)", "x + x/log(x)",
        "Xi(3, x)", "ExpK(2, x)",
    };
    std::vector<double> points = {1.7, 4.0, 9.5, 33.0};
    int checked = 0;
    for (const auto& text : exprs) {
        Expr e = parse(text);
        for (double x : points) {
            double via_real = 0.0;
            try {
                via_real = eval_real(e, x);
            } catch (const Error&) {
                continue; // beyond native range at this point
            }
            if (via_real < 1.0) continue; // no tower representation below 1
            TowerReal t = TowerReal::from_real(x);
            TowerReal tv = eval_tower(e, t);
            auto back = tv.to_real();
            REQUIRE(back.has_value());
            CAPTURE(text);
            CAPTURE(x);
            CHECK(rel_err(*back, via_real) < 1e-10);
            ++checked;
        }
    }
    CHECK(checked >= 20);
}
