#pragma once

#include "growthlab/expr.hpp"
#include "growthlab/magnitude.hpp"

namespace growthlab {

class Tower;

enum class SeedKind { Reciprocal, LogLinear };

// Seed data G on the fundamental domain [a, f(a)] with the boundary
// condition G(f(a)) f'(a) = G(a). Reciprocal is G(x) = 1/x (valid when
// f(a) = a f'(a)); LogLinear makes log G linear in x, which meets the
// boundary condition for any increasing f.
class SeedFunction {
public:
    static SeedFunction reciprocal(double a, double top);
    static SeedFunction log_linear(double a, double top, double fprime_a);

    SeedKind kind() const { return kind_; }
    double a() const { return a_; }
    double top() const { return top_; }
    double g(double x) const;
    // Normalizer c with c * integral of G over [a, top] = 1.
    double c() const { return c_; }
    // F0(y) = c * integral of G over [a, y]; increasing from 0 to 1.
    double f0(double y) const;
    double f0_inverse(double r) const;

private:
    friend class AbelFunction;
    SeedFunction() = default;
    SeedKind kind_ = SeedKind::Reciprocal;
    double a_ = 1.0;
    double top_ = 2.0;
    double beta_ = 0.0; // LogLinear decay rate of G
    double c_ = 1.0;
};

// A C1 solution F of F(f(x)) = F(x) + 1 on [a, infinity), built from a
// seed on the fundamental domain and extended by the functional equation.
// Values are evaluated by descending x to [a, f(a)) with the inverse map.
class AbelFunction {
public:
    double eval(double x) const;
    // Exact path for f = exp at a = 1: height + F0(mantissa).
    double eval(const TowerReal& x) const;
    double eval_mag(const Magnitude& x) const;

    // t = k + r: k forward iterations of f from F0^{-1}(r). Escapes to a
    // TowerReal when f = exp at a = 1 and the value leaves native range.
    Magnitude inverse(double t) const;

    // F^{-1}(F(x) + t), the t-th iterate of f at x.
    Magnitude fractional_iterate(double t, double x) const;

    // F'(x) = c G(x), G extended by G(x) = G(f^{-1}x) / f'(f^{-1}x).
    double derivative(double x) const;

    const Expr& map() const { return f_; }
    const Expr& map_derivative() const { return fprime_; }
    double base() const { return a_; }
    double top() const { return top_; }
    const SeedFunction& seed() const { return seed_; }
    bool exact_exp() const { return exact_exp_; }

private:
    friend AbelFunction build_abel(const Expr&, double, SeedKind, const Expr&,
                                   const Tower*, long, int);
    AbelFunction() = default;

    double apply_f(double x) const;
    Magnitude apply_f_mag(const Magnitude& x) const;
    double apply_finv(double y) const;

    Expr f_, fprime_, finv_; // finv_ may be null: bracketed root finder
    double a_ = 1.0;
    double top_ = 2.0;
    SeedFunction seed_;
    const Tower* tower_ = nullptr; // context for tower-referencing maps
    long iter_cap_ = 1000000;
    int height_cap_ = TowerReal::kDefaultHeightCap;
    bool exact_exp_ = false;
};

// Construct the Abel function of f with base point a. Preconditions
// (f increasing, f(x) > x, f' > 0, seed validity) are checked by sampling
// the fundamental domain; violations raise Precondition errors. Points
// where f exceeds the representable range are skipped, not failures.
AbelFunction build_abel(const Expr& f, double a, SeedKind kind,
                        const Expr& f_inverse = nullptr,
                        const Tower* tower = nullptr,
                        long iteration_cap = 1000000,
                        int height_cap = TowerReal::kDefaultHeightCap);

} // namespace growthlab
