#pragma once

#include <optional>
#include <string>
#include <variant>

#include "growthlab/tower_real.hpp"

namespace growthlab {

// A finite real of arbitrary size: a native double while the value fits,
// a TowerReal once it does not. Construction canonicalizes: a tower whose
// value is native-representable becomes a double, so the tower side always
// holds values strictly beyond double range (hence > any double).
class Magnitude {
public:
    Magnitude() : rep_(0.0) {}
    Magnitude(double x);
    Magnitude(const TowerReal& t);

    bool is_real() const { return std::holds_alternative<double>(rep_); }
    bool is_tower() const { return !is_real(); }

    double real() const; // throws Overflow if the value is tower-sized
    std::optional<double> to_real() const;
    const TowerReal& tower() const; // throws if the value is a native double

    // Tower form regardless of size; requires value >= 1.
    TowerReal as_tower(int cap = TowerReal::kDefaultHeightCap) const;

    std::string str() const;

private:
    std::variant<double, TowerReal> rep_;
};

int compare(const Magnitude& a, const Magnitude& b);

Magnitude mag_add(const Magnitude& a, const Magnitude& b, int cap = TowerReal::kDefaultHeightCap);
Magnitude mag_sub(const Magnitude& a, const Magnitude& b, int cap = TowerReal::kDefaultHeightCap);
Magnitude mag_mul(const Magnitude& a, const Magnitude& b, int cap = TowerReal::kDefaultHeightCap);
Magnitude mag_div(const Magnitude& a, const Magnitude& b, int cap = TowerReal::kDefaultHeightCap);
Magnitude mag_pow(const Magnitude& a, const Magnitude& b, int cap = TowerReal::kDefaultHeightCap);
Magnitude mag_exp(const Magnitude& a, int cap = TowerReal::kDefaultHeightCap);
Magnitude mag_log(const Magnitude& a);

} // namespace growthlab
