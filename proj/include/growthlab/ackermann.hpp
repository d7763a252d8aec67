#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/abel.hpp"
#include "growthlab/magnitude.hpp"

namespace growthlab {

// Result of an exact Ackermann computation: the value itself while it fits
// the bit budget, a level-index estimate carrying the base-2 tower height,
// or a marker that the value blew the budget.
struct AckValue {
    enum class Kind { Exact, TowerEstimate, TooLarge };

    Kind kind = Kind::TooLarge;
    mpz_class exact;            // Kind::Exact
    TowerReal approx = TowerReal::from_real(1.0); // Kind::TowerEstimate
    long base2_height = 0;      // annotation for the estimate

    bool is_exact() const { return kind == Kind::Exact; }
    bool too_large() const { return kind == Kind::TooLarge; }

    // Decimal text up to max_digits digits, otherwise leading digits plus
    // digit and bit counts; estimates render the tower with its base-2
    // height, too-large renders as a marker.
    std::string render(std::size_t max_digits = 10000) const;
};

// Exact values of the two-variable recursion
//   A(m, 0) = 2,  A(0, n) = n + 2,  A(m, n + 1) = A(m - 1, A(m, n)),
// computed by iterating the recursion row by row with big integers and a
// memo table. Results whose bit length would exceed the budget come back
// as the too-large value, never as an error.
class AckermannTable {
public:
    explicit AckermannTable(long bit_budget = 1L << 20);

    AckValue exact(long m, long n);

    long bit_budget() const { return bit_budget_; }

private:
    AckValue row_value(long m, const mpz_class& n);
    bool memo_get(long m, long n, AckValue& out);
    void memo_put(long m, long n, const AckValue& v);

    long bit_budget_;
    std::map<std::pair<long, long>, AckValue> memo_;
    std::mutex memo_lock_;
};

// One-shot convenience over a fresh table.
AckValue ack_exact(long m, long n, long bit_budget = 1L << 20);

// Level-index estimate of A(3, n) = 2^2^...^2 (n + 2 twos) - 2, converted
// to the base-e representation by rescaling the top of the tower; the
// dropped -2 and the within-mantissa rounding are below 1e-12 relative in
// the log coordinate once the value leaves native range.
AckValue ack_tower_estimate(long n, int height_cap = TowerReal::kDefaultHeightCap);

// The continuous extension: increasing functions G_m with
//   G_0(x) = x - 2,  G_1(x) = x/2 - 1,  G_2(x) = log2(x + 2) - 2,
// and for m >= 3 the Abel function of the previous level's inverse,
//   G_m(G_{m-1}^{-1}(x)) = G_m(x) + 1,
// seeded log-linearly on the fundamental domain. A_m = G_m^{-1} extends
// Ackermann's m-th row to real arguments.
class GFamily {
public:
    explicit GFamily(int max_m = 5, long iter_cap = 100000,
                     int height_cap = TowerReal::kDefaultHeightCap);

    int max_m() const { return max_m_; }
    // Start of G_m's domain (and of the fundamental domain at m >= 3).
    double base(int m) const;
    // Top of the fundamental domain, G_{m-1}^{-1}(base); 2 for every m >= 3.
    double top(int m) const;

    double g(int m, double x) const;
    double g_mag(int m, const Magnitude& x) const;
    Magnitude a(int m, double t) const;

    // Derivative of G_m, by the seed on the fundamental domain and the
    // chain rule above it; used to glue successive levels.
    double g_derivative(int m, double x) const;

    // G_m(x) - G_m(G_{m-1}(x)) - 1; zero wherever both sides are defined.
    double relation_residual(int m, const Magnitude& x) const;

    // Underlying Abel machinery for level 3 (the only level whose map is
    // an expression).
    const AbelFunction& level3() const;

private:
    struct Level {
        double a;
        SeedFunction seed;
        double fprime_a;       // derivative of G_{m-1}^{-1} at a
    };

    void check_level(int m) const;

    int max_m_;
    long iter_cap_;
    int height_cap_;
    std::shared_ptr<const AbelFunction> g3_;
    std::vector<Level> levels_; // index m - 4
};

} // namespace growthlab
