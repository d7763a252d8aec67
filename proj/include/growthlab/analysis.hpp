#pragma once

#include <memory>
#include <string>
#include <vector>

#include "growthlab/abel.hpp"
#include "growthlab/expr.hpp"
#include "growthlab/xi_tower.hpp"

namespace growthlab {

// Sampling schedule in Abel coordinates: points are x_j = Xi_level^{-1}(j)
// for j = j0, j0 + dj, ... up to jmax. Growth limits converge only along
// iterated-exponential scales, so schedules advance in the coordinate, not
// in x itself.
struct Schedule {
    int level = 3;
    double j0 = 2.0;
    double dj = 1.0;
    double jmax = 40.0;

    Schedule() = default;
    Schedule(int level, double j0, double dj, double jmax);

    std::vector<double> coords() const;
};

enum class OrderStatus {
    Converged,
    DivergedToInfinity,
    TendingToZero,
    Inconclusive,
};

const char* to_string(OrderStatus s);

struct OrderSample {
    double coord;    // schedule coordinate j (or a direct abscissa for
                     // evidence grids); identifies x_j = Xi_level^{-1}(j)
    double residual; // F(f(x_j)) - F(x_j), clamped to +-1e300 when the
                     // difference has no native representation
};

struct OrderEstimate {
    OrderStatus status = OrderStatus::Inconclusive;
    double value = 0.0; // the limit lambda; meaningful when Converged
    double tolerance = 1e-3;
    std::vector<OrderSample> samples;
};

// Order of f with respect to F: the limit of F(f(x)) - F(x) along the
// schedule. Converged requires the last three residuals to agree pairwise
// within tol and the tail not to be slowly drifting. Evaluation errors
// propagate with the failing schedule coordinate attached.
OrderEstimate order(const Expr& f, const Expr& F, const Schedule& sched,
                    double tol = 1e-3, const Tower& tower = Tower::standard());
OrderEstimate order(const Expr& f, int level, const Schedule& sched,
                    double tol = 1e-3, const Tower& tower = Tower::standard());
OrderEstimate order(const Expr& f, const AbelFunction& F, const Schedule& sched,
                    double tol = 1e-3, const Tower& tower = Tower::standard());

enum class CompareVerdict {
    Precedes,     // f grows strictly slower than g
    Succeeds,     // f grows strictly faster than g
    GapVanishing, // Xi_3 gap stays below tol: same growth at desk scale
    Inconclusive,
};

const char* to_string(CompareVerdict v);

// Sign and trend of Xi_3(f(x_j)) - Xi_3(g(x_j)): a persistent gap of at
// least tol over the last five samples decides the verdict.
CompareVerdict compare(const Expr& f, const Expr& g, const Schedule& sched,
                       double tol = 1e-3,
                       const Tower& tower = Tower::standard());

enum class Membership { Accepted, Rejected, Inconclusive };

const char* to_string(Membership m);

struct BMembership {
    Membership verdict = Membership::Inconclusive;
    int level = 0;                    // the n that was tested
    std::vector<OrderSample> ratios;  // (j, f'(x_j) chi_n(x_j) / chi_n(f(x_j)))
};

// Tests (Xi_n o f)' ~ Xi_n': the ratio f'(x_j) chi_n(x_j) / chi_n(f(x_j))
// must sit within tol of 1 over the last three samples. Requires a symbolic
// derivative of f.
BMembership in_b(const Expr& f, int n, const Schedule& sched, double tol = 1e-2,
                 const Tower& tower = Tower::standard());

enum class StepFamily {
    LogPower,         // F = (log_d x)^alpha / lambda, d = 0..3 (d = 0 reads x)
    ScaledXi,         // F = Xi_level / lambda
    XiExact,          // F = Xi_level, the terminal tower step
    ConstructedAbel,  // F built numerically from the map itself
};

const char* to_string(StepFamily f);

struct ChainStep {
    StepFamily family = StepFamily::LogPower;
    int index = 0;       // log depth d for LogPower, tower level for the
                         // Xi families, unused for ConstructedAbel
    double alpha = 1.0;  // LogPower exponent
    double lambda = 1.0; // scale: order of f_r against the unscaled catalog F
    double base = 0.0;   // base point a of a constructed Abel function
    OrderEstimate evidence; // order of f_r against this step's F; must be
                            // Converged with value within 1e-2 of 1
    std::shared_ptr<const AbelFunction> abel; // ConstructedAbel only

    std::string describe() const;
};

enum class ClassStatus {
    VerifiedAtDepth,
    BudgetExhausted,
    NotFiniteClass,
};

const char* to_string(ClassStatus s);

struct ClassResult {
    ClassStatus status = ClassStatus::BudgetExhausted;
    int n = -1; // class index; -1 unless VerifiedAtDepth
    int k = 0;  // chain depth; always equals chain.size()
    std::vector<ChainStep> chain;
};

// Chain classifier. At each depth r it matches f_r against the catalog
// (powers of iterated logs, scaled tower functions), terminates when the
// order against some Xi_{m+1} is exactly 1 (then n = m - r, k = r + 1) or
// when f_r coincides with Xi_m^{-1} on a grid (k = r), and otherwise falls
// back to a numerically constructed Abel function. Recurses on
// f_{r+1} = F_{r+1}^{-1}. Numeric evidence only, never proof.
ClassResult classify(const Expr& f, const Schedule& sched, int max_depth = 4,
                     int max_level = 5,
                     const Tower& tower = Tower::standard());

struct ProfileEntry {
    int level = 0;
    OrderEstimate estimate;
};

// Orders of f against Xi_1 .. Xi_max_level, each on a default schedule at
// the level best suited for sampling (clamped to coordinate levels 2..3).
std::vector<ProfileEntry> order_profile(const Expr& f, int max_level = 5,
                                        double tol = 1e-3,
                                        const Tower& tower = Tower::standard());

} // namespace growthlab
