#pragma once

#include <cmath>

#include "growthlab/error.hpp"

namespace growthlab {

// Solve f(x) = target for increasing f on a bracket [lo, hi] with
// f(lo) <= target <= f(hi), by bisection with secant acceleration.
// Tolerance is relative to the root's magnitude.
template <class F>
double solve_bracketed(F&& f, double target, double lo, double hi,
                       double rel_tol = 1e-12, int max_iter = 200) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo > 0.0 || fhi < 0.0)
        fail(ErrorKind::Precondition,
             "bracket does not enclose the target; function not increasing "
             "as declared");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int i = 0; i < max_iter; ++i) {
        double tol = rel_tol * (std::fabs(lo) + std::fabs(hi) + 1.0);
        if (hi - lo <= tol) break;
        // Secant proposal from the bracket endpoints, clamped away from
        // the edges; fall back to the midpoint when it degenerates.
        double x = lo - flo * (hi - lo) / (fhi - flo);
        double margin = 0.01 * (hi - lo);
        if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
        double fx = f(x) - target;
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return 0.5 * (lo + hi);
}

// Invert increasing f at target, growing the bracket geometrically from
// [lo, hi0] until f exceeds the target.
template <class F>
double invert_increasing(F&& f, double target, double lo, double hi0,
                         double rel_tol = 1e-12, int max_grow = 200) {
    double hi = hi0 > lo ? hi0 : lo + 1.0;
    double step = hi - lo;
    int grow = 0;
    while (f(hi) < target) {
        if (++grow > max_grow)
            fail(ErrorKind::IterationBudget,
                 "bracket growth budget exhausted inverting function");
        step *= 2.0;
        hi = lo + step;
        if (!std::isfinite(hi))
            fail(ErrorKind::Overflow, "bracket grew beyond native range");
    }
    return solve_bracketed(f, target, lo, hi, rel_tol);
}

} // namespace growthlab
