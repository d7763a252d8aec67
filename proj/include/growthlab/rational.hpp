#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "growthlab/error.hpp"

namespace growthlab {

// Exact rational with int64 parts. Used for literals in the expression
// language and for fractional iteration exponents; not a general-purpose
// arithmetic type.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) fail(ErrorKind::Domain, "rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }

    Rational operator-() const { return Rational(-num, den); }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline Rational rational_add(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

// Nearest rational with small denominator, or nullopt-like failure via flag.
// Used to present fitted catalog exponents exactly when they are simple.
inline bool snap_to_rational(double x, std::int64_t max_den, double tol, Rational& out) {
    for (std::int64_t d = 1; d <= max_den; ++d) {
        double scaled = x * static_cast<double>(d);
        double r = std::round(scaled);
        if (std::abs(scaled - r) <= tol * static_cast<double>(d)) {
            out = Rational(static_cast<std::int64_t>(r), d);
            return true;
        }
    }
    return false;
}

} // namespace growthlab
