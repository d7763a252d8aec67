#pragma once

#include <functional>
#include <vector>

#include "growthlab/abel.hpp"
#include "growthlab/error.hpp"

namespace growthlab {

class Tower;

// One evaluated grid point. Points where the function raised a typed
// error carry its kind instead of a value, so a sweep over a partially
// representable range is a result, not a failure.
struct SweepPoint {
    double x = 0.0;
    double value = 0.0;
    bool ok = false;
    ErrorKind error = ErrorKind::Domain;
};

using SweepFn = std::function<double(double)>;

// Evaluate fn at count uniform points spanning [lo, hi], both ends
// included. The parallel variant distributes points across threads; each
// point writes only its own slot and the abscissas are computed by the
// same arithmetic, so its output is bit-identical to the serial one.
std::vector<SweepPoint> sweep_serial(const SweepFn& fn, double lo, double hi,
                                     int count);
std::vector<SweepPoint> sweep_parallel(const SweepFn& fn, double lo, double hi,
                                       int count);

struct SweepSummary {
    double max_abs = 0.0; // largest |value| among evaluated points
    double max_x = 0.0;   // where it occurred
    int failures = 0;
    int total = 0;
};

SweepSummary summarize(const std::vector<SweepPoint>& points);

bool sweeps_identical(const std::vector<SweepPoint>& a,
                      const std::vector<SweepPoint>& b);

// Residuals the property grids keep sweeping: the Abel identity of a
// constructed function, and the tower relation at level n.
SweepFn abel_residual(const AbelFunction& F);
SweepFn tower_residual(const Tower& tower, int n);

} // namespace growthlab
