#include "growthlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>

#include "growthlab/error.hpp"
#include "growthlab/magnitude.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

namespace {

std::string num_str(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.6g", v);
    return std::string(b);
}

Error at_coordinate(const Error& e, double j) {
    return Error(e.kind(),
                 std::string(e.what()) + " at schedule coordinate j = " + num_str(j), j);
}

// Trend-based status decision over the sampled residuals. The window is the
// last five samples; convergence additionally demands the tail is not a slow
// monotone drift, which is how order-zero maps masquerade as converged.
OrderEstimate settle(std::vector<OrderSample> samples, double tol) {
    OrderEstimate est;
    est.tolerance = tol;
    est.samples = std::move(samples);
    const auto& v = est.samples;
    const std::size_t n = v.size();
    if (n < 3) return est;

    const std::size_t w = std::min<std::size_t>(5, n);
    auto rw = [&](std::size_t i) { return v[n - w + i].residual; };
    const double last = v[n - 1].residual;

    bool nondec = true, inc = true, dec = true;
    for (std::size_t i = 0; i + 1 < w; ++i) {
        if (rw(i + 1) < rw(i)) nondec = false;
        if (rw(i + 1) <= rw(i)) inc = false;
        if (rw(i + 1) >= rw(i)) dec = false;
    }
    if (last > 1e6 && nondec) {
        est.status = OrderStatus::DivergedToInfinity;
        return est;
    }

    double maxpair = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = i + 1; k < 3; ++k)
            maxpair = std::max(maxpair,
                               std::abs(v[n - 3 + i].residual - v[n - 3 + k].residual));
    const bool drifting = (inc || dec) && std::abs(last - rw(0)) >= 0.5 * tol;
    if (maxpair < tol && !drifting) {
        est.status = OrderStatus::Converged;
        est.value = last;
        return est;
    }

    bool small3 = true;
    for (int i = 0; i < 3; ++i)
        small3 = small3 && std::abs(v[n - 3 + i].residual) <= tol;
    bool absnoninc = true, absdec = true;
    for (std::size_t i = 0; i + 1 < w; ++i) {
        if (std::abs(rw(i + 1)) > std::abs(rw(i))) absnoninc = false;
        if (std::abs(rw(i + 1)) >= std::abs(rw(i))) absdec = false;
    }
    if (small3 && absnoninc) {
        est.status = OrderStatus::TendingToZero;
        return est;
    }
    if (absdec) {
        // least-squares slope of log|r| against log j over the window;
        // a clear power-law decay counts as tending to zero
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < w; ++i) {
            double j = v[n - w + i].coord, r = std::abs(rw(i));
            if (!(j > 0.0) || !(r > 0.0)) continue;
            double x = std::log(j), y = std::log(r);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2) {
            double den = cnt * sxx - sx * sx;
            if (std::abs(den) > 1e-30 &&
                (cnt * sxy - sx * sy) / den <= -0.5) {
                est.status = OrderStatus::TendingToZero;
                return est;
            }
        }
    }
    return est;
}

void check_schedule(const Schedule& sched, const Tower& tower) {
    if (sched.level > tower.max_level())
        fail(ErrorKind::Precondition, "schedule level exceeds the tower");
}

// Xi coordinate of a magnitude, with values beyond the representable range
// reported as +infinity rather than an error: f outgrowing the tower cap is
// itself order information.
double xi_coord_or_inf(const Tower& tower, int level, const Magnitude& m) {
    try {
        return tower.xi_mag(level, m);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Overflow || e.kind() == ErrorKind::HeightCap)
            return 1e300;
        throw;
    }
}

template <class Resid>
OrderEstimate run_order(const Expr& f, const Schedule& sched, double tol,
                        const Tower& tower, Resid&& resid) {
    check_schedule(sched, tower);
    std::vector<OrderSample> samples;
    for (double j : sched.coords()) {
        try {
            Magnitude x = tower.xi_inv(sched.level, j);
            Magnitude y = eval_mag(f, x, &tower);
            samples.push_back({j, resid(y, x)});
        } catch (const Error& e) {
            throw at_coordinate(e, j);
        }
    }
    return settle(std::move(samples), tol);
}

} // namespace

Schedule::Schedule(int level_, double j0_, double dj_, double jmax_)
    : level(level_), j0(j0_), dj(dj_), jmax(jmax_) {
    if (level < 0) fail(ErrorKind::Precondition, "schedule level must be nonnegative");
    if (!(j0 < jmax)) fail(ErrorKind::Precondition, "schedule start must precede its end");
    if (!(dj > 0.0)) fail(ErrorKind::Precondition, "schedule step must be positive");
    if ((jmax - j0) / dj > 100000.0)
        fail(ErrorKind::Precondition, "schedule has too many points");
}

std::vector<double> Schedule::coords() const {
    std::vector<double> out;
    for (double j = j0; j <= jmax + 1e-9; j += dj) out.push_back(j);
    return out;
}

const char* to_string(OrderStatus s) {
    switch (s) {
    case OrderStatus::Converged: return "converged";
    case OrderStatus::DivergedToInfinity: return "diverged_to_infinity";
    case OrderStatus::TendingToZero: return "tending_to_zero";
    case OrderStatus::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

const char* to_string(CompareVerdict v) {
    switch (v) {
    case CompareVerdict::Precedes: return "precedes";
    case CompareVerdict::Succeeds: return "succeeds";
    case CompareVerdict::GapVanishing: return "gap-vanishing";
    case CompareVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

const char* to_string(Membership m) {
    switch (m) {
    case Membership::Accepted: return "accepted";
    case Membership::Rejected: return "rejected";
    case Membership::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

const char* to_string(StepFamily f) {
    switch (f) {
    case StepFamily::LogPower: return "log-power";
    case StepFamily::ScaledXi: return "scaled-xi";
    case StepFamily::XiExact: return "xi";
    case StepFamily::ConstructedAbel: return "constructed-abel";
    }
    return "log-power";
}

const char* to_string(ClassStatus s) {
    switch (s) {
    case ClassStatus::VerifiedAtDepth: return "verified-at-depth";
    case ClassStatus::BudgetExhausted: return "budget-exhausted";
    case ClassStatus::NotFiniteClass: return "not-finite-class";
    }
    return "budget-exhausted";
}

std::string ChainStep::describe() const {
    switch (family) {
    case StepFamily::LogPower: {
        static const char* names[] = {"x", "log x", "loglog x", "logloglog x"};
        std::string head;
        if (index == 0)
            head = alpha == 1.0 ? "x" : "x^" + num_str(alpha);
        else {
            std::string b = index <= 3 ? names[index]
                                       : "log^" + std::to_string(index) + " x";
            head = alpha == 1.0 ? b : "(" + b + ")^" + num_str(alpha);
        }
        return head + " / " + num_str(lambda);
    }
    case StepFamily::ScaledXi:
        return "Xi_" + std::to_string(index) + " / " + num_str(lambda);
    case StepFamily::XiExact:
        return "Xi_" + std::to_string(index);
    case StepFamily::ConstructedAbel:
        return "Abel function of the map at base " + num_str(base);
    }
    return "";
}

OrderEstimate order(const Expr& f, const Expr& F, const Schedule& sched,
                    double tol, const Tower& tower) {
    return run_order(f, sched, tol, tower,
                     [&](const Magnitude& y, const Magnitude& x) {
                         Magnitude d = mag_sub(eval_mag(F, y, &tower),
                                               eval_mag(F, x, &tower));
                         if (auto r = d.to_real()) return *r;
                         return compare(d, Magnitude(0.0)) > 0 ? 1e300 : -1e300;
                     });
}

OrderEstimate order(const Expr& f, int level, const Schedule& sched,
                    double tol, const Tower& tower) {
    if (level < 0 || level > tower.max_level())
        fail(ErrorKind::Precondition, "order level outside the tower");
    return run_order(f, sched, tol, tower,
                     [&](const Magnitude& y, const Magnitude& x) {
                         double fy = xi_coord_or_inf(tower, level, y);
                         double fx = xi_coord_or_inf(tower, level, x);
                         if (fy >= 1e300 && fx >= 1e300) {
                             int c = compare(y, x);
                             return c > 0 ? 1e300 : (c < 0 ? -1e300 : 0.0);
                         }
                         if (fy >= 1e300) return 1e300;
                         if (fx >= 1e300) return -1e300;
                         return fy - fx;
                     });
}

OrderEstimate order(const Expr& f, const AbelFunction& F, const Schedule& sched,
                    double tol, const Tower& tower) {
    return run_order(f, sched, tol, tower,
                     [&](const Magnitude& y, const Magnitude& x) {
                         return F.eval_mag(y) - F.eval_mag(x);
                     });
}

CompareVerdict compare(const Expr& f, const Expr& g, const Schedule& sched,
                       double tol, const Tower& tower) {
    check_schedule(sched, tower);
    std::vector<double> gaps;
    for (double j : sched.coords()) {
        try {
            Magnitude x = tower.xi_inv(sched.level, j);
            double a = tower.xi_mag(3, eval_mag(f, x, &tower));
            double b = tower.xi_mag(3, eval_mag(g, x, &tower));
            gaps.push_back(a - b);
        } catch (const Error& e) {
            throw at_coordinate(e, j);
        }
    }
    if (gaps.empty()) return CompareVerdict::Inconclusive;
    const std::size_t w = std::min<std::size_t>(5, gaps.size());
    bool pos = true, neg = true, van = true;
    for (std::size_t i = gaps.size() - w; i < gaps.size(); ++i) {
        if (!(gaps[i] >= tol)) pos = false;
        if (!(gaps[i] <= -tol)) neg = false;
        if (!(std::abs(gaps[i]) < tol)) van = false;
    }
    if (pos) return CompareVerdict::Succeeds;
    if (neg) return CompareVerdict::Precedes;
    if (van) return CompareVerdict::GapVanishing;
    return CompareVerdict::Inconclusive;
}

BMembership in_b(const Expr& f, int n, const Schedule& sched, double tol,
                 const Tower& tower) {
    check_schedule(sched, tower);
    if (n < 0 || n > tower.max_level())
        fail(ErrorKind::Precondition, "membership level outside the tower");
    if (!differentiable(f))
        fail(ErrorKind::Unsupported, "membership test needs a derivative of f");
    Expr fp = differentiate(f);
    BMembership out;
    out.level = n;
    for (double j : sched.coords()) {
        try {
            Magnitude x = tower.xi_inv(sched.level, j);
            Magnitude y = eval_mag(f, x, &tower);
            Magnitude num = mag_mul(eval_mag(fp, x, &tower), tower.chi_mag(n, x));
            Magnitude rho = mag_div(num, tower.chi_mag(n, y));
            double r;
            if (auto rr = rho.to_real())
                r = *rr;
            else
                r = compare(rho, Magnitude(1.0)) > 0 ? 1e300 : 0.0;
            out.ratios.push_back({j, r});
        } catch (const Error& e) {
            throw at_coordinate(e, j);
        }
    }
    if (out.ratios.size() < 3) return out;
    bool close = true, far = true;
    for (std::size_t i = out.ratios.size() - 3; i < out.ratios.size(); ++i) {
        double d = std::abs(out.ratios[i].residual - 1.0);
        if (!(d <= tol)) close = false;
        if (!(d >= 10.0 * tol)) far = false;
    }
    if (close)
        out.verdict = Membership::Accepted;
    else if (far)
        out.verdict = Membership::Rejected;
    return out;
}

// ---------------------------------------------------------------------------
// classification

namespace {

Rational approx_rational(double v) {
    Rational r;
    if (snap_to_rational(v, 64, 1e-9, r)) return r;
    const std::int64_t den = std::int64_t(1) << 29;
    return Rational(std::int64_t(std::llround(v * double(den))), den);
}

// The running map f_r of the chain search. The catalog inverses are kept in
// structured form so that Xi coordinates of their values can be computed in
// Abel coordinates instead of materializing towers.
struct ChainFn {
    enum class Kind { Plain, ExpIter, ScaledXiInv, AbelInv };

    Kind kind = Kind::Plain;
    Expr expr;            // Plain
    int depth = 0;        // ExpIter: number of exponentials
    double lambda = 1.0;  // ExpIter, ScaledXiInv
    double alpha = 1.0;   // ExpIter
    int level = 0;        // ScaledXiInv
    std::shared_ptr<const AbelFunction> abel; // AbelInv

    static ChainFn plain(Expr e) {
        ChainFn f;
        f.kind = Kind::Plain;
        f.expr = std::move(e);
        return f;
    }
    static ChainFn exp_iter(int d, double lam, double a) {
        ChainFn f;
        f.kind = Kind::ExpIter;
        f.depth = d;
        f.lambda = lam;
        f.alpha = a;
        return f;
    }
    static ChainFn scaled_xi_inv(int m, double lam) {
        ChainFn f;
        f.kind = Kind::ScaledXiInv;
        f.level = m;
        f.lambda = lam;
        return f;
    }
    static ChainFn abel_inv(std::shared_ptr<const AbelFunction> F) {
        ChainFn f;
        f.kind = Kind::AbelInv;
        f.abel = std::move(F);
        return f;
    }

    bool native_scannable() const {
        return kind == Kind::Plain || kind == Kind::ExpIter;
    }

    Magnitude value(const Magnitude& x, const Tower& tower) const {
        switch (kind) {
        case Kind::Plain:
            return eval_mag(expr, x, &tower);
        case Kind::ExpIter: {
            Magnitude t = mag_mul(Magnitude(lambda), x);
            if (alpha != 1.0) t = mag_pow(t, Magnitude(1.0 / alpha));
            for (int i = 0; i < depth; ++i) t = mag_exp(t);
            return t;
        }
        case Kind::ScaledXiInv: {
            auto s = mag_mul(Magnitude(lambda), x).to_real();
            if (!s)
                fail(ErrorKind::Overflow,
                     "scaled tower coordinate is not representable");
            return tower.xi_inv(level, *s);
        }
        case Kind::AbelInv: {
            auto s = x.to_real();
            if (!s)
                fail(ErrorKind::Unsupported,
                     "numeric Abel inverse needs a native coordinate");
            return abel->inverse(*s);
        }
        }
        return Magnitude(0.0);
    }

    // Xi_target(f(x)). For a scaled tower inverse this walks the Abel
    // relation Xi_{L+1}(z) = 1 + Xi_{L+1}(Xi_L(z)) upward from the known
    // coordinate, so no tower value is ever materialized.
    double xi_value(int target, const Magnitude& x, const Tower& tower) const {
        if (kind == Kind::ScaledXiInv && target >= level) {
            auto s0 = mag_mul(Magnitude(lambda), x).to_real();
            if (!s0)
                fail(ErrorKind::Overflow,
                     "scaled tower coordinate is not representable");
            if (target == level) return *s0;
            double s = 1.0 + tower.xi(level + 1, *s0);
            for (int L = level + 1; L < target; ++L)
                s = 1.0 + tower.xi(L + 1, s);
            return s;
        }
        return tower.xi_mag(target, value(x, tower));
    }

    std::optional<Expr> to_expr() const {
        switch (kind) {
        case Kind::Plain:
            return expr;
        case Kind::ExpIter: {
            Expr arg = mul(constant(approx_rational(lambda)), var());
            if (alpha != 1.0)
                arg = pow(arg, constant(approx_rational(1.0 / alpha)));
            return depth == 0 ? arg : expk(depth, arg);
        }
        case Kind::ScaledXiInv:
            return xi_inv_node(level,
                               mul(constant(approx_rational(lambda)), var()));
        case Kind::AbelInv:
            return std::nullopt;
        }
        return std::nullopt;
    }
};

// A map that sits at or below the identity at its largest evaluable
// checkpoint cannot lie in the hierarchy above x.
bool stays_at_or_below_identity(const ChainFn& fn, const Tower& tower) {
    bool below = false, any = false;
    for (double q : {2.0, 5.0, 8.0}) {
        double x = std::exp(q);
        try {
            below = compare(fn.value(Magnitude(x), tower), Magnitude(x)) <= 0;
            any = true;
        } catch (const Error&) {
        }
    }
    return any && below;
}

std::vector<double> coincidence_grid(int m) {
    switch (m) {
    case 3: return {2.0, 10.0, 30.0};
    case 4: return {1.4, 1.9, 2.4};
    case 5: return {1.35, 1.6, 1.85};
    default: return {1.35, 1.5, 1.65};
    }
}

bool coincides_with_xi_inv(const ChainFn& fn, int m, const Tower& tower) {
    for (double t : coincidence_grid(m)) {
        try {
            double got = fn.xi_value(m, Magnitude(t), tower);
            if (std::abs(got - t) > 1e-9 * std::max(1.0, std::abs(t)))
                return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

struct DeltaSample {
    double q; // native scan coordinate, x = e^q
    double a; // log_d f(x)
    double b; // log_d x
};

// Native shift samples log_d f(e^q) - log_d e^q with q = 2..120. Samples the
// arithmetic cannot resolve (the shift below the rounding floor of the
// operands) are dropped rather than reported as zero.
std::vector<DeltaSample> delta_scan(const ChainFn& fn, int d, const Tower& tower) {
    std::vector<DeltaSample> out;
    for (int qi = 2; qi <= 120; ++qi) {
        const double q = qi;
        try {
            double x = std::exp(q);
            Magnitude am = fn.value(Magnitude(x), tower);
            for (int i = 0; i < d; ++i) am = mag_log(am);
            auto ar = am.to_real();
            if (!ar) continue;
            double b = d == 0 ? x
                     : d == 1 ? q
                     : d == 2 ? std::log(q)
                              : std::log(std::log(q));
            double delta = *ar - b;
            if (!(std::abs(delta) >=
                  1e-10 * std::max({std::abs(*ar), std::abs(b), 1.0})))
                continue;
            out.push_back({q, *ar, b});
        } catch (const Error&) {
            continue;
        }
    }
    return out;
}

bool step_evidence_ok(const OrderEstimate& ev) {
    return ev.status == OrderStatus::Converged &&
           std::abs(ev.value - 1.0) <= 1e-2;
}

// Constant shift at depth d: F = log_d x / lambda.
bool additive_match(const std::vector<DeltaSample>& ds, double& lambda,
                    OrderEstimate& evidence) {
    std::vector<OrderSample> s;
    s.reserve(ds.size());
    for (const auto& e : ds) s.push_back({e.q, e.a - e.b});
    OrderEstimate est = settle(std::move(s), 1e-3);
    if (est.status != OrderStatus::Converged || est.value < 1e-2) return false;
    lambda = est.value;
    std::vector<OrderSample> ev;
    ev.reserve(ds.size());
    for (const auto& e : ds) ev.push_back({e.q, (e.a - e.b) / lambda});
    evidence = settle(std::move(ev), 1e-2);
    return step_evidence_ok(evidence);
}

// Power-law shift at depth d: F = (log_d x)^alpha / lambda, alpha fitted
// from the tail slope of log delta against log u and snapped to a small
// rational grid.
bool power_match(const std::vector<DeltaSample>& all, double& alpha,
                 double& lambda, OrderEstimate& evidence) {
    std::vector<DeltaSample> ds;
    for (const auto& e : all)
        if (e.b >= 1.05 && e.a - e.b > 0.0) ds.push_back(e);
    if (ds.size() < 8) return false;

    const std::size_t pairs = std::min<std::size_t>(16, ds.size() - 1);
    double smin = 1e300, smax = -1e300, ssum = 0.0;
    for (std::size_t i = ds.size() - 1 - pairs; i + 1 < ds.size(); ++i) {
        double dx = std::log(ds[i + 1].b) - std::log(ds[i].b);
        if (!(dx > 0.0)) return false;
        double sl = (std::log(ds[i + 1].a - ds[i + 1].b) -
                     std::log(ds[i].a - ds[i].b)) / dx;
        smin = std::min(smin, sl);
        smax = std::max(smax, sl);
        ssum += sl;
    }
    if (smax - smin > 0.1) return false;
    const double pbar = ssum / double(pairs);
    if (pbar > 0.95) return false;

    static const double grid[] = {0.25,      1.0 / 3.0, 0.5, 2.0 / 3.0,
                                  0.75,      1.0,       4.0 / 3.0, 1.5,
                                  2.0,       2.5,       3.0, 4.0};
    double best = 0.0, bd = 1e300;
    for (double g : grid) {
        double d = std::abs(1.0 - pbar - g);
        if (d < bd) {
            bd = d;
            best = g;
        }
    }
    if (bd > 0.08) return false;
    alpha = best;

    std::vector<OrderSample> ls;
    for (const auto& e : ds) {
        double lam = alpha * std::exp(std::log(e.a - e.b) +
                                      (alpha - 1.0) * std::log(e.b));
        ls.push_back({e.q, lam});
    }
    OrderEstimate lest = settle(std::move(ls), 1e-3);
    if (lest.status != OrderStatus::Converged || lest.value < 1e-2) return false;
    lambda = lest.value;

    std::vector<OrderSample> ev;
    for (const auto& e : ds) {
        double lb = alpha * std::log(e.b);
        if (lb > 700.0) continue;
        double r = std::exp(lb) * std::expm1(alpha * std::log(e.a / e.b)) / lambda;
        ev.push_back({e.q, r});
    }
    evidence = settle(std::move(ev), 1e-2);
    return step_evidence_ok(evidence);
}

bool delta_step(const ChainFn& cur, const Tower& tower, ChainStep& step,
                ChainFn& next) {
    for (int d = 0; d <= 3; ++d) {
        auto ds = delta_scan(cur, d, tower);
        if (ds.size() < 3) continue;
        double lambda = 0.0, alpha = 0.0;
        OrderEstimate ev;
        if (additive_match(ds, lambda, ev)) {
            step = ChainStep{};
            step.family = StepFamily::LogPower;
            step.index = d;
            step.alpha = 1.0;
            step.lambda = lambda;
            step.evidence = std::move(ev);
            next = ChainFn::exp_iter(d, lambda, 1.0);
            return true;
        }
        if (power_match(ds, alpha, lambda, ev)) {
            step = ChainStep{};
            step.family = StepFamily::LogPower;
            step.index = d;
            step.alpha = alpha;
            step.lambda = lambda;
            step.evidence = std::move(ev);
            next = ChainFn::exp_iter(d, lambda, alpha);
            return true;
        }
    }
    return false;
}

// Order of f_r against Xi_target. Tower-safe kinds are sampled on the
// schedule's coordinates (absorption makes the residuals exact); structured
// inverses are sampled natively, their Xi coordinates computed by cascade.
OrderEstimate xi_probe(const ChainFn& fn, int target, const Schedule& sched,
                       const Tower& tower) {
    std::vector<OrderSample> s;
    for (double j : sched.coords()) {
        if (fn.native_scannable()) {
            Magnitude x = tower.xi_inv(sched.level, j);
            s.push_back({j, fn.xi_value(target, x, tower) -
                                tower.xi_mag(target, x)});
        } else {
            if (j > 700.0) break;
            double x = std::exp(j);
            s.push_back({j, fn.xi_value(target, Magnitude(x), tower) -
                                tower.xi(target, x)});
        }
    }
    return settle(std::move(s), 1e-3);
}

bool fallback_step(const ChainFn& cur, const Tower& tower, ChainStep& step,
                   ChainFn& next) {
    auto ex = cur.to_expr();
    if (!ex) return false;
    static const double bases[] = {1.5, 2.718281828459045, 5.0, 10.0, 100.0};
    for (double a : bases) {
        try {
            auto F = std::make_shared<const AbelFunction>(
                build_abel(*ex, a, SeedKind::LogLinear, nullptr, &tower, 512,
                           tower.height_cap()));
            const double top = F->top();
            std::vector<OrderSample> ev;
            bool bad = false;
            for (double fr : {0.05, 0.10, 0.15, 0.20, 0.25}) {
                double x = a + (top - a) * fr;
                try {
                    double r = F->eval_mag(cur.value(Magnitude(x), tower)) -
                               F->eval(x);
                    // Quadrature loses a few digits near the integrand's
                    // branch kinks, so the residual gate is looser than the
                    // solver tolerances; a wrong construction misses by O(1).
                    if (std::abs(r - 1.0) > 1e-6) {
                        bad = true;
                        break;
                    }
                    ev.push_back({x, r});
                } catch (const Error&) {
                    continue;
                }
            }
            if (bad || ev.size() < 3) continue;
            OrderEstimate est = settle(std::move(ev), 1e-2);
            if (!step_evidence_ok(est)) continue;
            step = ChainStep{};
            step.family = StepFamily::ConstructedAbel;
            step.base = a;
            step.evidence = std::move(est);
            step.abel = F;
            next = ChainFn::abel_inv(F);
            return true;
        } catch (const Error&) {
            continue;
        }
    }
    return false;
}

} // namespace

ClassResult classify(const Expr& f, const Schedule& sched, int max_depth,
                     int max_level, const Tower& tower) {
    check_schedule(sched, tower);
    if (max_depth < 1)
        fail(ErrorKind::Precondition, "class search needs a positive depth budget");
    if (max_level < 3 || max_level + 1 > tower.max_level())
        fail(ErrorKind::Precondition, "class search level budget outside the tower");

    ClassResult res;
    ChainFn cur = ChainFn::plain(f);

    if (stays_at_or_below_identity(cur, tower)) {
        res.status = ClassStatus::NotFiniteClass;
        return res;
    }

    for (int r = 0; r <= max_depth; ++r) {
        for (int m = 3; m <= max_level; ++m) {
            if (coincides_with_xi_inv(cur, m, tower)) {
                res.status = ClassStatus::VerifiedAtDepth;
                res.n = m - r;
                res.k = r;
                return res;
            }
        }
        if (r == max_depth) break;

        bool found = false;
        ChainStep step;
        ChainFn next;

        if (cur.native_scannable() && delta_step(cur, tower, step, next))
            found = true;

        if (!found) {
            const int lo = cur.kind == ChainFn::Kind::ScaledXiInv
                               ? std::max(3, cur.level + 1)
                               : 3;
            const int hi = std::min(max_level + 1, tower.max_level());
            for (int t = lo; t <= hi && !found; ++t) {
                OrderEstimate est;
                try {
                    est = xi_probe(cur, t, sched, tower);
                } catch (const Error&) {
                    continue;
                }
                if (est.status == OrderStatus::DivergedToInfinity ||
                    est.status == OrderStatus::Inconclusive)
                    continue;
                if (est.status == OrderStatus::TendingToZero) break;
                const double lam = est.value;
                if (std::abs(lam) < 1e-2) break;
                Rational snap;
                const bool snapped = snap_to_rational(lam, 6, 1e-2, snap);
                if (snapped && snap.num == 1 && snap.den == 1) {
                    ChainStep terminal;
                    terminal.family = StepFamily::XiExact;
                    terminal.index = t;
                    terminal.evidence = std::move(est);
                    res.chain.push_back(std::move(terminal));
                    res.status = ClassStatus::VerifiedAtDepth;
                    res.n = t - 1 - r;
                    res.k = r + 1;
                    return res;
                }
                const double lamhat = snapped ? snap.value() : lam;
                std::vector<OrderSample> ev;
                ev.reserve(est.samples.size());
                for (const auto& smp : est.samples)
                    ev.push_back({smp.coord, smp.residual / lamhat});
                OrderEstimate verif = settle(std::move(ev), 1e-2);
                if (!step_evidence_ok(verif)) continue;
                step = ChainStep{};
                step.family = StepFamily::ScaledXi;
                step.index = t;
                step.lambda = lamhat;
                step.evidence = std::move(verif);
                next = ChainFn::scaled_xi_inv(t, lamhat);
                found = true;
            }
        }

        if (!found && fallback_step(cur, tower, step, next)) found = true;

        if (!found) {
            res.k = int(res.chain.size());
            res.status = res.chain.empty() ? ClassStatus::NotFiniteClass
                                           : ClassStatus::BudgetExhausted;
            return res;
        }
        res.chain.push_back(std::move(step));
        cur = std::move(next);
    }

    res.k = int(res.chain.size());
    res.status = ClassStatus::BudgetExhausted;
    return res;
}

std::vector<ProfileEntry> order_profile(const Expr& f, int max_level, double tol,
                                        const Tower& tower) {
    if (max_level < 1 || max_level > tower.max_level())
        fail(ErrorKind::Precondition, "profile level outside the tower");
    std::vector<ProfileEntry> out;
    for (int m = 1; m <= max_level; ++m) {
        Schedule s(std::clamp(m, 2, 3), 2.0, 1.0, 40.0);
        out.push_back({m, order(f, m, s, tol, tower)});
    }
    return out;
}

} // namespace growthlab
