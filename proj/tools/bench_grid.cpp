// Compares the serial and parallel sweep kernels on representative
// workloads, checks they agree bit for bit, and prints the timings.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "growthlab/grid.hpp"
#include "growthlab/xi_tower.hpp"

using namespace growthlab;

namespace {

struct Workload {
    std::string name;
    SweepFn fn;
    double lo;
    double hi;
};

} // namespace

int main(int argc, char** argv) {
    int points = argc > 1 ? std::atoi(argv[1]) : 20000;
    if (points < 2) {
        std::fprintf(stderr, "usage: %s [points >= 2]\n", argv[0]);
        return 2;
    }

    const Tower& tower = Tower::standard();
    const AbelFunction& xi3 = tower.level(3);

    std::vector<Workload> workloads;
    workloads.push_back({"tower relation n=3", tower_residual(tower, 3),
                         std::exp(1.0) + 0.01, 20.0});
    workloads.push_back({"tower relation n=5", tower_residual(tower, 5),
                         std::exp(1.0) + 0.01, 30.0});
    workloads.push_back({"abel residual exp", abel_residual(xi3), 1.0, 20.0});
    workloads.push_back({"half-iterate law",
                         [&tower](double x) {
                             Magnitude half = tower.frac_iter_exp(0.5, Magnitude(x));
                             Magnitude twice = tower.frac_iter_exp(0.5, half);
                             return (twice.real() - std::exp(x)) / std::exp(x);
                         },
                         1.0, 3.0});

    std::printf("%-20s %8s %12s %12s %9s %12s %6s\n", "workload", "points",
                "serial ms", "parallel ms", "speedup", "max |r|", "fails");

    bool all_match = true;
    for (const Workload& w : workloads) {
        double t0 = omp_get_wtime();
        auto serial = sweep_serial(w.fn, w.lo, w.hi, points);
        double t1 = omp_get_wtime();
        auto parallel = sweep_parallel(w.fn, w.lo, w.hi, points);
        double t2 = omp_get_wtime();

        bool match = sweeps_identical(serial, parallel);
        all_match = all_match && match;
        SweepSummary s = summarize(serial);
        double ser_ms = (t1 - t0) * 1e3;
        double par_ms = (t2 - t1) * 1e3;
        std::printf("%-20s %8d %12.2f %12.2f %8.2fx %12.3e %6d%s\n",
                    w.name.c_str(), points, ser_ms, par_ms,
                    par_ms > 0.0 ? ser_ms / par_ms : 0.0, s.max_abs,
                    s.failures, match ? "" : "  MISMATCH");
    }

    if (!all_match) {
        std::fprintf(stderr, "serial and parallel sweeps disagree\n");
        return 1;
    }
    std::printf("threads: %d, all workloads bit-identical\n",
                omp_get_max_threads());
    return 0;
}
