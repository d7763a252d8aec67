#include "growthlab/magnitude.hpp"

#include <cmath>
#include <limits>

namespace growthlab {

namespace {

const double kMaxExpArg = std::log(std::numeric_limits<double>::max());

// log of a beyond-native tower as a double, when that fits.
std::optional<double> tower_log_real(const TowerReal& t) {
    return TowerReal::normalize(t.height() - 1, t.mantissa()).to_real();
}

Magnitude exp_of_log(double s, int cap) {
    // Value e^s from its natural log; chooses the representation by size.
    if (s <= kMaxExpArg) return Magnitude(std::exp(s));
    return Magnitude(exp_t(TowerReal::from_real(s, cap), cap));
}

} // namespace

Magnitude::Magnitude(double x) : rep_(x) {
    if (!std::isfinite(x))
        fail(ErrorKind::Overflow, "magnitude must be finite");
}

Magnitude::Magnitude(const TowerReal& t) : rep_(t) {
    if (auto r = t.to_real()) rep_ = *r;
}

double Magnitude::real() const {
    if (!is_real())
        fail(ErrorKind::Overflow, "tower-sized value used where a native real is required");
    return std::get<double>(rep_);
}

std::optional<double> Magnitude::to_real() const {
    if (is_real()) return std::get<double>(rep_);
    return std::nullopt;
}

const TowerReal& Magnitude::tower() const {
    if (is_real())
        fail(ErrorKind::Domain, "native value has no tower representation slot");
    return std::get<TowerReal>(rep_);
}

TowerReal Magnitude::as_tower(int cap) const {
    if (is_real()) return TowerReal::from_real(std::get<double>(rep_), cap);
    return std::get<TowerReal>(rep_);
}

std::string Magnitude::str() const {
    if (is_real()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(rep_));
        return buf;
    }
    return std::get<TowerReal>(rep_).str();
}

int compare(const Magnitude& a, const Magnitude& b) {
    if (a.is_real() && b.is_real()) {
        double x = a.real(), y = b.real();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    if (a.is_real()) return -1; // tower side is always beyond double range
    if (b.is_real()) return 1;
    return compare(a.tower(), b.tower());
}

Magnitude mag_add(const Magnitude& a, const Magnitude& b, int cap) {
    if (a.is_real() && b.is_real()) {
        double s = a.real() + b.real();
        if (std::isfinite(s)) return Magnitude(s);
        if (a.real() > 0 && b.real() > 0)
            return Magnitude(add(TowerReal::from_real(a.real(), cap),
                                 TowerReal::from_real(b.real(), cap), cap).value);
        fail(ErrorKind::Overflow, "sum overflows below representable range");
    }
    if (a.is_tower() && b.is_tower())
        return Magnitude(add(a.tower(), b.tower(), cap).value);
    const Magnitude& t = a.is_tower() ? a : b;
    const Magnitude& d = a.is_tower() ? b : a;
    if (d.real() >= 1.0)
        return Magnitude(add(t.tower(), TowerReal::from_real(d.real(), cap), cap).value);
    // |d| < 1 against a beyond-native tower: below representable precision.
    return t;
}

Magnitude mag_sub(const Magnitude& a, const Magnitude& b, int cap) {
    int c = compare(a, b);
    if (c == 0) return Magnitude(0.0);
    if (a.is_real() && b.is_real()) {
        double s = a.real() - b.real();
        if (std::isfinite(s)) return Magnitude(s);
        fail(ErrorKind::Overflow, "difference overflows representable range");
    }
    if (c < 0)
        fail(ErrorKind::Overflow, "negative tower-sized difference not representable");
    // a is tower-sized and strictly dominant.
    const TowerReal& ta = a.tower();
    std::optional<double> lb;
    if (b.is_real()) {
        if (b.real() < 1.0) return a; // below precision against a huge minuend
        lb = std::log(b.real());
    } else {
        lb = tower_log_real(b.tower());
    }
    auto la = tower_log_real(ta);
    if (la && lb) {
        double r = std::exp(*lb - *la);
        if (r >= 1.0) return Magnitude(0.0); // equal to working precision
        return exp_of_log(*la + std::log1p(-r), cap);
    }
    // Operands so large that even their logs leave native range: any gap in
    // canonical form makes the smaller term vanish at working precision.
    return a;
}

Magnitude mag_mul(const Magnitude& a, const Magnitude& b, int cap) {
    if (a.is_real() && b.is_real()) {
        double p = a.real() * b.real();
        if (std::isfinite(p)) return Magnitude(p);
        if (a.real() > 0 && b.real() > 0)
            return Magnitude(mul(TowerReal::from_real(a.real(), cap),
                                 TowerReal::from_real(b.real(), cap), cap).value);
        fail(ErrorKind::Overflow, "negative product beyond representable range");
    }
    if (a.is_tower() && b.is_tower())
        return Magnitude(mul(a.tower(), b.tower(), cap).value);
    const Magnitude& t = a.is_tower() ? a : b;
    const Magnitude& d = a.is_tower() ? b : a;
    if (d.real() == 0.0) return Magnitude(0.0);
    if (d.real() < 0.0)
        fail(ErrorKind::Overflow, "negative product beyond representable range");
    auto lt = tower_log_real(t.tower());
    if (lt) return exp_of_log(*lt + std::log(d.real()), cap);
    // log of the tower operand is itself beyond native range; scaling by a
    // native factor is below representable precision there.
    return t;
}

Magnitude mag_div(const Magnitude& a, const Magnitude& b, int cap) {
    if (b.is_real() && b.real() == 0.0)
        fail(ErrorKind::Domain, "division by zero");
    if (a.is_real() && b.is_real()) {
        double q = a.real() / b.real();
        if (std::isfinite(q)) return Magnitude(q);
        if (a.real() > 0 && b.real() > 0)
            return exp_of_log(std::log(a.real()) - std::log(b.real()), cap);
        fail(ErrorKind::Overflow, "negative quotient beyond representable range");
    }
    if (a.is_real()) { // native / tower: underflows toward zero
        if (a.real() == 0.0) return Magnitude(0.0);
        auto lb = tower_log_real(b.tower());
        if (!lb) return Magnitude(a.real() < 0 ? -0.0 : 0.0);
        double mag = std::exp(std::log(std::abs(a.real())) - *lb);
        return Magnitude(a.real() < 0 ? -mag : mag);
    }
    const TowerReal& ta = a.tower();
    if (b.is_real()) {
        if (b.real() < 0.0)
            fail(ErrorKind::Overflow, "negative quotient beyond representable range");
        auto la = tower_log_real(ta);
        if (la) return exp_of_log(*la - std::log(b.real()), cap);
        return a; // dividing a doubly-huge value by a native one: below precision
    }
    int c = compare(ta, b.tower());
    if (c == 0) return Magnitude(1.0);
    auto la = tower_log_real(ta);
    auto lb = tower_log_real(b.tower());
    if (la && lb) return exp_of_log(*la - *lb, cap);
    if (c < 0) return Magnitude(0.0); // underflow
    return a;                         // dominant beyond log precision
}

Magnitude mag_pow(const Magnitude& a, const Magnitude& b, int cap) {
    if (a.is_real() && b.is_real()) {
        double base = a.real(), e = b.real();
        if (base == 0.0 && e <= 0.0) fail(ErrorKind::Domain, "0 raised to a non-positive power");
        if (base < 0.0 && e != std::floor(e))
            fail(ErrorKind::Domain, "negative base with non-integer exponent");
        double p = std::pow(base, e);
        if (std::isfinite(p)) return Magnitude(p);
        if (base > 0.0) return exp_of_log(e * std::log(base), cap);
        fail(ErrorKind::Overflow, "power beyond representable range");
    }
    if (a.is_tower() && b.is_real() && b.real() < 0.0)
        return mag_div(Magnitude(1.0), mag_pow(a, Magnitude(-b.real()), cap), cap);
    // Tower-sized base and/or exponent: go through exp(b * log a).
    Magnitude la = mag_log(a);
    if (b.is_tower() && compare(la, Magnitude(0.0)) <= 0)
        fail(ErrorKind::Domain, "tower-sized exponent requires base > 1");
    return mag_exp(mag_mul(b, la, cap), cap);
}

Magnitude mag_exp(const Magnitude& a, int cap) {
    if (a.is_real()) {
        if (a.real() <= kMaxExpArg) return Magnitude(std::exp(a.real()));
        return Magnitude(exp_t(TowerReal::from_real(a.real(), cap), cap));
    }
    return Magnitude(exp_t(a.tower(), cap));
}

Magnitude mag_log(const Magnitude& a) {
    if (a.is_real()) {
        if (a.real() <= 0.0)
            fail_at(ErrorKind::Domain, "log of a non-positive value", a.real());
        return Magnitude(std::log(a.real()));
    }
    return Magnitude(log_t(a.tower()));
}

} // namespace growthlab
