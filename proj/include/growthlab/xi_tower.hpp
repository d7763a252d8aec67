#pragma once

#include <string>
#include <vector>

#include "growthlab/abel.hpp"
#include "growthlab/expr.hpp"
#include "growthlab/magnitude.hpp"

namespace growthlab {

struct TowerConfig {
    int max_level = 6;
    // Seed for each level n >= 3; levels without an entry use Reciprocal.
    std::vector<SeedKind> seeds;
    long iteration_cap = 1000000;
    int height_cap = TowerReal::kDefaultHeightCap;

    SeedKind seed_for(int level) const;
    static TowerConfig from_json_text(const std::string& text);
    static TowerConfig from_json_file(const std::string& path);
};

// The tower of slow functions: Xi_0(x) = x - e, Xi_1(x) = x/e,
// Xi_2(x) = log x, and for n >= 3 the Abel function of Xi_{n-1}^{-1} at
// base point 1. With the default Reciprocal seed every level equals log
// on [1, e). Immutable after construction; safe for concurrent use.
class Tower {
public:
    explicit Tower(const TowerConfig& config);
    static const Tower& standard();

    const TowerConfig& config() const { return config_; }
    int max_level() const { return config_.max_level; }
    int height_cap() const { return config_.height_cap; }

    double xi(int n, double x) const;
    double xi(int n, const TowerReal& x) const;
    double xi_mag(int n, const Magnitude& x) const;

    // Inverse of xi(n, .); for n = 3 escapes to a TowerReal beyond native
    // range, for n >= 4 ascends through the level below.
    Magnitude xi_inv(int n, double t) const;

    // chi_n = 1/Xi_n'; chi_2(x) = x, base case on [1, e), and the
    // recursion chi_n(x) = chi_{n-1}(x) chi_n(Xi_{n-1}(x)) above it.
    double chi(int n, double x) const;
    Magnitude chi_mag(int n, const Magnitude& x) const;

    // The t-th iterate of exp at x via level 3.
    Magnitude frac_iter_exp(double t, const Magnitude& x) const;

    const AbelFunction& level(int n) const; // 3 <= n <= max_level

private:
    TowerConfig config_;
    std::vector<AbelFunction> levels_; // index 0 holds level 3
};

// ASTs of the named example functions.
Expr builder_fk(int k);  // e_k(log_k x + 1); k = 0 gives x + 1
Expr builder_g();        // XiInv(3, Xi(3,x) + 1/Xi(3,x))
Expr builder_h();        // XiInv(3, Xi(3,x) + 1/XiInv(3, Xi(3,x)/2))
Expr builder_ell();      // XiInv(3, Xi(3,x) + 1/XiInv(4, Xi(4,x) - 1/2))

// The inverse-specified squeeze function: the increasing function whose
// inverse is XiInv(m, Xi(m,x) - (1+delta(x))/Chi(m, F(x))). Checks by
// sampling that F is increasing and delta positive and decreasing.
Expr between_gadget(const Expr& F, const Expr& delta, int m);
// Construction seam without the sampling checks (degenerate test hook).
Expr between_gadget_unchecked(const Expr& F, const Expr& delta, int m);

// Forward evaluation of a gadget node by monotone root finding in
// Xi_m-coordinates.
Magnitude gadget_forward(int m, const Expr& F, const Expr& delta,
                         const Magnitude& y, const Tower& tower);

} // namespace growthlab
