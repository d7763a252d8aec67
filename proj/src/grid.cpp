#include "growthlab/grid.hpp"

#include <cmath>

#include "growthlab/xi_tower.hpp"

namespace growthlab {

namespace {

double abscissa(double lo, double hi, int i, int count) {
    if (count == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(count - 1);
}

void fill_point(const SweepFn& fn, double lo, double hi, int i, int count,
                SweepPoint& out) {
    out.x = abscissa(lo, hi, i, count);
    try {
        out.value = fn(out.x);
        out.ok = true;
    } catch (const Error& e) {
        out.value = 0.0;
        out.ok = false;
        out.error = e.kind();
    }
}

void check_range(double lo, double hi, int count) {
    if (count < 1)
        fail(ErrorKind::Precondition, "sweep needs at least one point");
    if (!(hi >= lo)) fail(ErrorKind::Precondition, "sweep range is reversed");
}

} // namespace

std::vector<SweepPoint> sweep_serial(const SweepFn& fn, double lo, double hi,
                                     int count) {
    check_range(lo, hi, count);
    std::vector<SweepPoint> out(count);
    for (int i = 0; i < count; ++i) fill_point(fn, lo, hi, i, count, out[i]);
    return out;
}

std::vector<SweepPoint> sweep_parallel(const SweepFn& fn, double lo, double hi,
                                       int count) {
    check_range(lo, hi, count);
    std::vector<SweepPoint> out(count);
    // Dynamic batches: descent depth varies wildly across a range, and
    // points near the top of a domain cost far more than seed points.
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < count; ++i) fill_point(fn, lo, hi, i, count, out[i]);
    return out;
}

SweepSummary summarize(const std::vector<SweepPoint>& points) {
    SweepSummary s;
    s.total = static_cast<int>(points.size());
    for (const SweepPoint& p : points) {
        if (!p.ok) {
            ++s.failures;
            continue;
        }
        if (std::fabs(p.value) >= s.max_abs) {
            s.max_abs = std::fabs(p.value);
            s.max_x = p.x;
        }
    }
    return s;
}

bool sweeps_identical(const std::vector<SweepPoint>& a,
                      const std::vector<SweepPoint>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].x != b[i].x || a[i].ok != b[i].ok) return false;
        if (a[i].ok && a[i].value != b[i].value) return false;
        if (!a[i].ok && a[i].error != b[i].error) return false;
    }
    return true;
}

SweepFn abel_residual(const AbelFunction& F) {
    return [&F](double x) {
        Magnitude fx = eval_mag(F.map(), Magnitude(x));
        return F.eval_mag(fx) - F.eval(x) - 1.0;
    };
}

SweepFn tower_residual(const Tower& tower, int n) {
    if (n < 3 || n > tower.max_level())
        fail(ErrorKind::Precondition,
             "tower relation needs a constructed level");
    return [&tower, n](double x) {
        return tower.xi(n, x) - tower.xi(n, tower.xi(n - 1, x)) - 1.0;
    };
}

} // namespace growthlab
