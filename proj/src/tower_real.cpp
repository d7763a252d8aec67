#include "growthlab/tower_real.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace growthlab {

namespace {

const double kE = std::exp(1.0);
// Largest x with exp(x) still finite in double precision.
const double kMaxExpArg = std::log(std::numeric_limits<double>::max());

} // namespace

TowerReal TowerReal::normalize(int height, double value, int cap) {
    if (!std::isfinite(value))
        fail(ErrorKind::Domain, "tower mantissa must be finite");
    int h = height;
    double v = value;
    // Fold the value into [1, e). Downward steps take a few iterations at
    // most; upward steps terminate because each one raises v above 1 or
    // exhausts the height.
    while (true) {
        if (v >= kE) {
            v = std::log(v);
            ++h;
            if (h > cap)
                fail(ErrorKind::HeightCap, "tower height cap exceeded in normalize");
        } else if (v < 1.0) {
            if (h <= 0)
                fail_at(ErrorKind::Domain, "tower value below 1 not representable", v);
            v = std::exp(v);
            --h;
        } else {
            break;
        }
    }
    if (h < 0)
        fail(ErrorKind::Domain, "negative tower height");
    if (h > cap)
        fail(ErrorKind::HeightCap, "tower height cap exceeded");
    return TowerReal(h, v);
}

TowerReal TowerReal::from_real(double x, int cap) {
    if (!(x >= 1.0))
        fail_at(ErrorKind::Domain, "from_real requires x >= 1", x);
    return normalize(0, x, cap);
}

std::optional<double> TowerReal::to_real() const {
    double v = mantissa_;
    for (int i = 0; i < height_; ++i) {
        if (v > kMaxExpArg) return std::nullopt;
        v = std::exp(v);
    }
    return v;
}

std::string TowerReal::str() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "T[%d;%.17g]", height_, mantissa_);
    return buf;
}

int compare(const TowerReal& a, const TowerReal& b) {
    if (a.height() != b.height()) return a.height() < b.height() ? -1 : 1;
    if (a.mantissa() != b.mantissa()) return a.mantissa() < b.mantissa() ? -1 : 1;
    return 0;
}

TowerReal exp_t(const TowerReal& x, int cap) {
    if (x.height_ + 1 > cap)
        fail(ErrorKind::HeightCap, "tower height cap exceeded in exp_t");
    return TowerReal(x.height_ + 1, x.mantissa_);
}

TowerReal log_t(const TowerReal& x) {
    if (x.height_ == 0)
        fail_at(ErrorKind::Domain, "log of a height-0 tower falls below 1", x.mantissa_);
    return TowerReal(x.height_ - 1, x.mantissa_);
}

namespace {

// log of a canonical tower as a plain double, when that fits.
std::optional<double> log_as_real(const TowerReal& x) {
    if (x.height() == 0) return std::log(x.mantissa());
    return TowerReal::normalize(x.height() - 1, x.mantissa()).to_real();
}

} // namespace

TowerArith add(const TowerReal& a0, const TowerReal& b0, int cap) {
    const TowerReal& a = compare(a0, b0) >= 0 ? a0 : b0;
    const TowerReal& b = compare(a0, b0) >= 0 ? b0 : a0;

    auto ra = a.to_real();
    auto rb = b.to_real();
    if (ra && rb && *ra <= std::numeric_limits<double>::max() - *rb) {
        double sum = *ra + *rb;
        // The smaller operand vanished below the dominant one's precision;
        // return the dominant operand bit-exactly and flag the absorption.
        if (sum == *ra) return {a, true};
        return {TowerReal::from_real(sum, cap), false};
    }

    if (a.height() - b.height() >= 2) {
        // Beyond the native range the smaller operand perturbs the sum's
        // log-coordinate by less than machine epsilon.
        return {a, true};
    }

    auto la = log_as_real(a);
    if (la) {
        auto lb = log_as_real(b);
        double c = std::log1p(std::exp(*lb - *la));
        double s = *la + c;
        if (s == *la) return {a, true};
        return {exp_t(TowerReal::from_real(s, cap), cap), false};
    }
    // log(a) itself is beyond native range; adding at most log(2) to it is
    // below representable precision.
    return {a, true};
}

TowerArith mul(const TowerReal& a0, const TowerReal& b0, int cap) {
    const TowerReal& a = compare(a0, b0) >= 0 ? a0 : b0;
    const TowerReal& b = compare(a0, b0) >= 0 ? b0 : a0;

    auto ra = a.to_real();
    auto rb = b.to_real();
    if (ra && rb && *ra <= std::numeric_limits<double>::max() / *rb) {
        double prod = *ra * *rb;
        if (prod == *ra) {
            bool unit = b.height() == 0 && b.mantissa() == 1.0;
            return {a, !unit};
        }
        return {TowerReal::from_real(prod, cap), false};
    }

    auto la = log_as_real(a);
    if (la) {
        auto lb = log_as_real(b);
        double s = *la + *lb;
        if (s == *la) return {a, *lb != 0.0};
        return {exp_t(TowerReal::from_real(s, cap), cap), false};
    }
    if (a.height() - b.height() >= 2) {
        // With log(a) beyond native range, log(b) is at most loglog(a)-sized,
        // a relative perturbation below machine epsilon.
        return {a, true};
    }
    // Both factors are towers of nearly equal, not-even-log-representable
    // size: multiply one level down.
    TowerArith sum = add(log_t(a), log_t(b), cap);
    return {exp_t(sum.value, cap), sum.absorbed};
}

TowerReal parse_tower(const std::string& text, int cap) {
    int h = 0;
    double v = 0.0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "T[%d;%lf]%n", &h, &v, &consumed) != 2 ||
        consumed != static_cast<int>(text.size()))
        fail(ErrorKind::Parse, "expected tower literal T[h;v]: " + text);
    return TowerReal::normalize(h, v, cap);
}

} // namespace growthlab
