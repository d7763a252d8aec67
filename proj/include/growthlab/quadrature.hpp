#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "growthlab/error.hpp"

namespace growthlab {

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1], positive half.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
// Weights of the embedded 7-point Gauss rule, matching the odd-index nodes
// above plus the midpoint.
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
std::pair<double, double> kronrod_panel(F& f, double lo, double hi) {
    double c = 0.5 * (lo + hi);
    double h = 0.5 * (hi - lo);
    double fc = f(c);
    double resk = kKronrodWeights[7] * fc;
    double resg = kGaussWeights[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * kKronrodNodes[j];
        double pair_sum = f(c - x) + f(c + x);
        resk += kKronrodWeights[j] * pair_sum;
        if (j % 2 == 1) resg += kGaussWeights[j / 2] * pair_sum;
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

} // namespace detail

// Adaptive quadrature of f over [a, b] to an absolute tolerance, by
// bisecting Gauss-Kronrod panels whose error estimate exceeds their share.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                 int max_panels = 20000) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        fail(ErrorKind::Domain, "quadrature endpoints must be finite");
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    struct Panel {
        double lo, hi, tol;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, abs_tol});
    double total = 0.0;
    int used = 0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        if (++used > max_panels)
            fail(ErrorKind::IterationBudget,
                 "quadrature subdivision budget exhausted");
        auto [value, err] = detail::kronrod_panel(f, p.lo, p.hi);
        if (!std::isfinite(value))
            fail(ErrorKind::Domain, "integrand not finite inside interval");
        double width = p.hi - p.lo;
        if (err <= p.tol ||
            width <= 1e-15 * (std::fabs(p.lo) + std::fabs(p.hi) + 1.0)) {
            total += value;
            continue;
        }
        double mid = 0.5 * (p.lo + p.hi);
        stack.push_back({p.lo, mid, 0.5 * p.tol});
        stack.push_back({mid, p.hi, 0.5 * p.tol});
    }
    return sign * total;
}

} // namespace growthlab
