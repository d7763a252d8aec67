#pragma once

#include <optional>
#include <string>

#include "growthlab/error.hpp"

namespace growthlab {

// Level-index form of a (possibly astronomically large) real x >= 1:
// x = exp^height(mantissa) with mantissa in [1, e). Canonical forms compare
// lexicographically by (height, mantissa), which matches value order.
class TowerReal {
public:
    static constexpr int kDefaultHeightCap = 64;

    // Canonicalizes an arbitrary (height, value) pair. The value may lie
    // outside [1, e); the height may only grow up to `cap`.
    static TowerReal normalize(int height, double value, int cap = kDefaultHeightCap);
    static TowerReal from_real(double x, int cap = kDefaultHeightCap);

    int height() const { return height_; }
    double mantissa() const { return mantissa_; }

    // Native value if it fits in a double, nullopt beyond that.
    std::optional<double> to_real() const;

    std::string str() const; // textual form T[h;v], v with 17 significant digits

private:
    TowerReal(int h, double v) : height_(h), mantissa_(v) {}
    int height_;
    double mantissa_;

    friend TowerReal exp_t(const TowerReal&, int);
    friend TowerReal log_t(const TowerReal&);
};

// -1, 0, +1 as a < b, a == b, a > b. Exact on canonical forms.
int compare(const TowerReal& a, const TowerReal& b);

TowerReal exp_t(const TowerReal& x, int cap = TowerReal::kDefaultHeightCap);
TowerReal log_t(const TowerReal& x);

// Result of tower addition/multiplication. `absorbed` is set when the result
// is one operand unchanged because the other's contribution lies below
// representable precision in the result's log-coordinates.
struct TowerArith {
    TowerReal value;
    bool absorbed = false;
};

TowerArith add(const TowerReal& a, const TowerReal& b, int cap = TowerReal::kDefaultHeightCap);
TowerArith mul(const TowerReal& a, const TowerReal& b, int cap = TowerReal::kDefaultHeightCap);

// Parses the T[h;v] form produced by TowerReal::str().
TowerReal parse_tower(const std::string& text, int cap = TowerReal::kDefaultHeightCap);

} // namespace growthlab
