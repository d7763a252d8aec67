#include "growthlab/abel.hpp"

#include <cmath>

#include "growthlab/quadrature.hpp"
#include "growthlab/roots.hpp"
#include "growthlab/xi_tower.hpp"

namespace growthlab {

namespace {
const double kSeedTol = 1e-12;
}

SeedFunction SeedFunction::reciprocal(double a, double top) {
    SeedFunction s;
    s.kind_ = SeedKind::Reciprocal;
    s.a_ = a;
    s.top_ = top;
    s.c_ = 1.0 / std::log(top / a);
    return s;
}

SeedFunction SeedFunction::log_linear(double a, double top, double fprime_a) {
    SeedFunction s;
    s.kind_ = SeedKind::LogLinear;
    s.a_ = a;
    s.top_ = top;
    s.beta_ = std::log(fprime_a) / (top - a);
    s.c_ = 1.0 / integrate([&s](double x) { return s.g(x); }, a, top);
    return s;
}

double SeedFunction::g(double x) const {
    if (kind_ == SeedKind::Reciprocal) return 1.0 / x;
    return std::exp(-beta_ * (x - a_));
}

double SeedFunction::f0(double y) const {
    if (kind_ == SeedKind::Reciprocal) return c_ * std::log(y / a_);
    return c_ * integrate([this](double x) { return g(x); }, a_, y);
}

double SeedFunction::f0_inverse(double r) const {
    if (kind_ == SeedKind::Reciprocal) return a_ * std::exp(r / c_);
    return solve_bracketed([this](double y) { return f0(y); }, r, a_, top_);
}

double AbelFunction::apply_f(double x) const { return eval_real(f_, x, tower_); }

Magnitude AbelFunction::apply_f_mag(const Magnitude& x) const {
    return growthlab::eval_mag(f_, x, tower_);
}

double AbelFunction::apply_finv(double y) const {
    // The exponential map inverts in closed form; bisection would have to
    // evaluate exp at the bracket top, which overflows for large y.
    if (exact_exp_) return std::log(y);
    if (finv_) return eval_real(finv_, y, tower_);
    // f(z) > z makes [a, y] a bracket for f(z) = y whenever y >= f(a).
    // Fast-growing maps can leave the native range at interior bracket
    // points; since f is increasing, an overflow there already certifies
    // f(z) > y, so report it as +inf and let the search move down.
    return solve_bracketed(
        [this](double z) {
            try {
                return apply_f(z);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::Overflow ||
                    e.kind() == ErrorKind::HeightCap)
                    return HUGE_VAL;
                throw;
            }
        },
        y, a_, y);
}

double AbelFunction::eval(double x) const {
    if (x < a_) {
        // Iterated maps can land a hair under the base point; snap within
        // a tight slop, reject anything further out.
        if (x > a_ - 1e-9 * (std::fabs(a_) + 1.0)) x = a_;
        else fail_at(ErrorKind::Domain, "abel evaluation below the base point", x);
    }
    double y = x;
    long k = 0;
    while (y >= top_) {
        y = apply_finv(y);
        if (++k > iter_cap_)
            fail(ErrorKind::IterationBudget, "descent iteration budget exceeded");
    }
    if (y < a_) y = a_;
    return static_cast<double>(k) + seed_.f0(y);
}

double AbelFunction::eval(const TowerReal& x) const {
    if (exact_exp_) return static_cast<double>(x.height()) + seed_.f0(x.mantissa());
    auto r = x.to_real();
    if (r) return eval(*r);
    if (finv_) {
        // Descend in magnitude arithmetic until the value is native, then
        // hand off; each inverse application must shrink the tower. A step
        // absorbed by tower arithmetic will never make progress, so report
        // that as unsupported rather than burning the budget.
        Magnitude y(x);
        long k = 0;
        while (y.is_tower()) {
            Magnitude next = growthlab::eval_mag(finv_, y, tower_);
            if (next.is_tower() && growthlab::compare(next, y) == 0)
                fail(ErrorKind::Unsupported,
                     "inverse map cannot reduce a tower-sized argument");
            y = next;
            if (++k > iter_cap_)
                fail(ErrorKind::IterationBudget,
                     "descent iteration budget exceeded");
        }
        return static_cast<double>(k) + eval(y.real());
    }
    fail(ErrorKind::Unsupported,
         "tower evaluation requires the exponential map at base 1 or an "
         "inverse-map expression");
}

double AbelFunction::eval_mag(const Magnitude& x) const {
    if (x.is_real()) return eval(x.real());
    return eval(x.tower());
}

Magnitude AbelFunction::inverse(double t) const {
    if (t < 0.0)
        fail_at(ErrorKind::Domain, "abel inverse requires a nonnegative argument", t);
    double kd = std::floor(t);
    double r = t - kd;
    double x0 = seed_.f0_inverse(r);
    if (exact_exp_) {
        if (kd > static_cast<double>(height_cap_))
            fail(ErrorKind::HeightCap, "abel inverse beyond the tower height cap");
        return Magnitude(TowerReal::normalize(static_cast<int>(kd), x0, height_cap_));
    }
    if (kd > static_cast<double>(iter_cap_))
        fail(ErrorKind::IterationBudget, "ascent iteration budget exceeded");
    Magnitude x(x0);
    for (long i = 0; i < static_cast<long>(kd); ++i) x = apply_f_mag(x);
    return x;
}

Magnitude AbelFunction::fractional_iterate(double t, double x) const {
    double s = eval(x) + t;
    if (s < 0.0)
        fail_at(ErrorKind::Domain, "fractional iterate descends below the base point", s);
    return inverse(s);
}

double AbelFunction::derivative(double x) const {
    if (x < a_) {
        if (x > a_ - 1e-9 * (std::fabs(a_) + 1.0)) x = a_;
        else fail_at(ErrorKind::Domain, "abel derivative below the base point", x);
    }
    double y = x;
    double chain = 1.0;
    long k = 0;
    while (y >= top_) {
        y = apply_finv(y);
        chain *= eval_real(fprime_, y, tower_);
        if (++k > iter_cap_)
            fail(ErrorKind::IterationBudget, "descent iteration budget exceeded");
    }
    if (y < a_) y = a_;
    return seed_.c() * seed_.g(y) / chain;
}

AbelFunction build_abel(const Expr& f, double a, SeedKind kind,
                        const Expr& f_inverse, const Tower* tower,
                        long iteration_cap, int height_cap) {
    AbelFunction F;
    F.f_ = f;
    F.fprime_ = differentiate(f);
    F.finv_ = f_inverse;
    F.a_ = a;
    F.tower_ = tower;
    F.iter_cap_ = iteration_cap;
    F.height_cap_ = height_cap;

    double top = eval_real(f, a, tower);
    if (!(top > a))
        fail_at(ErrorKind::Precondition, "abel map must satisfy f(a) > a", a);
    F.top_ = top;
    double fprime_a = eval_real(F.fprime_, a, tower);
    if (!(fprime_a > 0.0))
        fail_at(ErrorKind::Precondition, "abel map must have f' > 0 at the base point", a);

    // Sample the fundamental domain: f above the identity, increasing,
    // with positive derivative. Points where f exceeds the representable
    // range are consistent with f(x) > x and are skipped.
    const int kSamples = 64;
    bool have_prev = false;
    Magnitude prev(0.0);
    for (int i = 0; i < kSamples; ++i) {
        double x = a + (top - a) * static_cast<double>(i) / (kSamples - 1);
        Magnitude fx(0.0);
        try {
            fx = growthlab::eval_mag(f, Magnitude(x), tower);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::HeightCap || e.kind() == ErrorKind::Overflow)
                continue;
            throw;
        }
        if (compare(fx, Magnitude(x)) <= 0)
            fail_at(ErrorKind::Precondition, "abel map must satisfy f(x) > x", x);
        if (have_prev && compare(fx, prev) <= 0)
            fail_at(ErrorKind::Precondition, "abel map must be strictly increasing", x);
        prev = fx;
        have_prev = true;
        try {
            double fp = eval_real(F.fprime_, x, tower);
            if (!(fp > 0.0))
                fail_at(ErrorKind::Precondition, "abel map must have f' > 0", x);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::HeightCap && e.kind() != ErrorKind::Overflow)
                throw;
        }
    }

    if (kind == SeedKind::Reciprocal) {
        if (!(a > 0.0))
            fail_at(ErrorKind::Precondition,
                    "reciprocal seed requires a positive base point", a);
        if (std::fabs(a * fprime_a - top) > kSeedTol * std::fabs(top))
            fail_at(ErrorKind::Precondition,
                    "reciprocal seed boundary condition f(a) = a f'(a) violated", a);
        F.seed_ = SeedFunction::reciprocal(a, top);
    } else {
        F.seed_ = SeedFunction::log_linear(a, top, fprime_a);
    }

    F.exact_exp_ = a == 1.0 && equal(f, expk(1, var()));
    return F;
}

} // namespace growthlab
