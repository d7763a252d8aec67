#include "growthlab/ackermann.hpp"

#include <cmath>

namespace growthlab {

namespace {

AckValue make_exact(mpz_class v) {
    AckValue a;
    a.kind = AckValue::Kind::Exact;
    a.exact = std::move(v);
    return a;
}

std::size_t bit_length(const mpz_class& v) {
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

} // namespace

std::string AckValue::render(std::size_t max_digits) const {
    if (kind == Kind::TooLarge) return "(too large for the bit budget)";
    if (kind == Kind::TowerEstimate)
        return approx.str() + " (base-2 tower height " +
               std::to_string(base2_height) + ")";
    std::string s = exact.get_str();
    if (s.size() <= max_digits) return s;
    return s.substr(0, 12) + "... (" + std::to_string(s.size()) +
           " digits, " + std::to_string(bit_length(exact)) + " bits)";
}

AckermannTable::AckermannTable(long bit_budget) : bit_budget_(bit_budget) {
    if (bit_budget < 8)
        fail(ErrorKind::Precondition,
             "bit budget too small to hold the base cases");
}

AckValue AckermannTable::exact(long m, long n) {
    if (m < 0 || n < 0)
        fail(ErrorKind::Domain, "ackermann arguments must be nonnegative");
    return row_value(m, mpz_class(n));
}

bool AckermannTable::memo_get(long m, long n, AckValue& out) {
    std::lock_guard<std::mutex> hold(memo_lock_);
    auto it = memo_.find({m, n});
    if (it == memo_.end()) return false;
    out = it->second;
    return true;
}

void AckermannTable::memo_put(long m, long n, const AckValue& v) {
    std::lock_guard<std::mutex> hold(memo_lock_);
    memo_.emplace(std::make_pair(m, n), v);
}

AckValue AckermannTable::row_value(long m, const mpz_class& n) {
    bool small = n.fits_slong_p();
    long nl = small ? n.get_si() : 0;
    AckValue out; // defaults to too-large
    if (small && memo_get(m, nl, out)) return out;

    if (m == 0) {
        mpz_class v = n + 2;
        if (bit_length(v) <= static_cast<std::size_t>(bit_budget_))
            out = make_exact(std::move(v));
    } else if (n == 0) {
        out = make_exact(2);
    } else if (m == 1) {
        // n successor steps, each adding A(0, k) - k = 2; summed at once.
        mpz_class v = 2 * n + 2;
        if (bit_length(v) <= static_cast<std::size_t>(bit_budget_))
            out = make_exact(std::move(v));
    } else if (m == 2) {
        // Each step doubles and adds two, so step k has k + 2 bits; the
        // budget is known before iterating.
        if (n <= bit_budget_ - 2) {
            mpz_class v = 2;
            for (long i = 0; i < n.get_si(); ++i) v = 2 * v + 2;
            out = make_exact(std::move(v));
        }
    } else {
        // Walk the row upward: A(m, k+1) = A(m-1, A(m, k)). The inner row
        // reports too-large as soon as the budget breaks, which bounds the
        // walk for every m >= 3.
        mpz_class v = 2;
        bool blew = false;
        for (mpz_class i = 0; i < n; ++i) {
            AckValue step = row_value(m - 1, v);
            if (!step.is_exact()) {
                blew = true;
                break;
            }
            v = std::move(step.exact);
        }
        if (!blew) out = make_exact(std::move(v));
    }

    if (small) memo_put(m, nl, out);
    return out;
}

AckValue ack_exact(long m, long n, long bit_budget) {
    AckermannTable table(bit_budget);
    return table.exact(m, n);
}

AckValue ack_tower_estimate(long n, int height_cap) {
    if (n < 0)
        fail(ErrorKind::Domain, "ackermann arguments must be nonnegative");
    long h = n + 2; // base-2 tower height
    AckValue out;
    out.kind = AckValue::Kind::TowerEstimate;
    out.base2_height = h;
    if (h <= 4) {
        double exact_small[] = {2.0, 14.0, 65534.0};
        out.approx = TowerReal::from_real(exact_small[h - 2], height_cap);
        return out;
    }
    // Peel logs off 2^2^...^2 - 2 until the remaining base-2 tower is
    // native: ln^j of it equals 2^^(h-j) * ln 2 + c, where the trailing -2
    // vanishes at this scale, c starts at 0 and stabilizes at ln ln 2 after
    // one peel (the correction term divides by at least 2^65536).
    long j = h - 4;
    if (j > static_cast<long>(height_cap) + 4)
        fail(ErrorKind::HeightCap,
             "tower estimate exceeds the representable height");
    double c = j > 1 ? std::log(std::log(2.0)) : 0.0;
    double z = 65536.0 * std::log(2.0) + c;
    out.approx = TowerReal::normalize(static_cast<int>(j), z, height_cap);
    return out;
}

GFamily::GFamily(int max_m, long iter_cap, int height_cap)
    : max_m_(max_m), iter_cap_(iter_cap), height_cap_(height_cap) {
    if (max_m < 2)
        fail(ErrorKind::Precondition,
             "the family needs at least the closed-form levels");
    if (iter_cap < 1)
        fail(ErrorKind::Precondition, "iteration cap must be positive");
    if (max_m_ >= 3) {
        // Level 3 is the Abel function of A_2(y) = 2^(y+2) - 2, the only
        // level whose map is an expression with an expressible inverse.
        Expr two = constant(2);
        Expr f = sub(pow(two, add(var(), two)), two);
        Expr finv = sub(div(logk(1, add(var(), two)), logk(1, two)), two);
        g3_ = std::make_shared<const AbelFunction>(build_abel(
            f, 0.0, SeedKind::LogLinear, finv, nullptr, iter_cap_, height_cap_));
    }
    for (int m = 4; m <= max_m_; ++m) {
        // The map of level m is A_{m-1}, whose derivative at the base point
        // is the reciprocal of G_{m-1}'(2); levels below m are complete, so
        // the derivative recursion is available.
        double fp = 1.0 / g_derivative(m - 1, 2.0);
        levels_.push_back(Level{1.0, SeedFunction::log_linear(1.0, 2.0, fp), fp});
    }
}

void GFamily::check_level(int m) const {
    if (m < 0 || m > max_m_)
        fail(ErrorKind::Unsupported,
             "extension level outside the configured range");
}

double GFamily::base(int m) const {
    check_level(m);
    if (m <= 2) return 2.0; // the anchor with G_m = 0
    return m == 3 ? 0.0 : 1.0;
}

double GFamily::top(int m) const {
    check_level(m);
    if (m < 3)
        fail(ErrorKind::Unsupported,
             "closed-form levels have no fundamental domain");
    return m == 3 ? g3_->top() : 2.0;
}

const AbelFunction& GFamily::level3() const {
    if (!g3_)
        fail(ErrorKind::Unsupported, "level 3 is beyond the configured maximum");
    return *g3_;
}

double GFamily::g(int m, double x) const {
    check_level(m);
    switch (m) {
    case 0: return x - 2.0;
    case 1: return 0.5 * x - 1.0;
    case 2:
        if (x <= -2.0)
            fail_at(ErrorKind::Domain, "level 2 needs an argument above -2", x);
        return std::log2(x + 2.0) - 2.0;
    case 3: return g3_->eval(x);
    default: break;
    }
    const Level& level = levels_[m - 4];
    if (x < level.a) {
        if (x > level.a - 1e-9 * (std::fabs(level.a) + 1.0)) x = level.a;
        else fail_at(ErrorKind::Domain, "evaluation below the level base point", x);
    }
    double y = x;
    long k = 0;
    while (y >= 2.0) {
        y = g(m - 1, y);
        if (++k > iter_cap_)
            fail(ErrorKind::IterationBudget, "level descent budget exceeded");
    }
    if (y < level.a) y = level.a;
    return static_cast<double>(k) + level.seed.f0(y);
}

double GFamily::g_mag(int m, const Magnitude& x) const {
    check_level(m);
    if (x.is_real()) return g(m, x.real());
    if (m <= 2) {
        // The closed forms go through magnitude arithmetic; a log brings
        // tower arguments back to native range, the linear levels do not.
        Magnitude two(2.0);
        Magnitude v = m == 2
                          ? mag_sub(mag_div(mag_log(mag_add(x, two, height_cap_)),
                                            Magnitude(std::log(2.0)), height_cap_),
                                    two, height_cap_)
                          : (m == 1 ? mag_sub(mag_div(x, two, height_cap_),
                                              Magnitude(1.0), height_cap_)
                                    : mag_sub(x, two, height_cap_));
        return v.real();
    }
    if (m == 3) return g3_->eval_mag(x);
    const Level& level = levels_[m - 4];
    Magnitude y = x;
    long k = 0;
    while (y.is_tower() || y.real() >= 2.0) {
        y = Magnitude(g_mag(m - 1, y));
        if (++k > iter_cap_)
            fail(ErrorKind::IterationBudget, "level descent budget exceeded");
    }
    double yr = y.real() < level.a ? level.a : y.real();
    return static_cast<double>(k) + level.seed.f0(yr);
}

double GFamily::g_derivative(int m, double x) const {
    check_level(m);
    switch (m) {
    case 0: return 1.0;
    case 1: return 0.5;
    case 2:
        if (x <= -2.0)
            fail_at(ErrorKind::Domain, "level 2 needs an argument above -2", x);
        return 1.0 / ((x + 2.0) * std::log(2.0));
    case 3: return g3_->derivative(x);
    default: break;
    }
    const Level& level = levels_[m - 4];
    if (x < level.a) {
        if (x > level.a - 1e-9 * (std::fabs(level.a) + 1.0)) x = level.a;
        else fail_at(ErrorKind::Domain, "derivative below the level base point", x);
    }
    // G_m'(x) = G_m'(G_{m-1}(x)) G_{m-1}'(x) down to the seeded domain.
    double acc = 1.0;
    double y = x;
    long k = 0;
    while (y >= 2.0) {
        acc *= g_derivative(m - 1, y);
        y = g(m - 1, y);
        if (++k > iter_cap_)
            fail(ErrorKind::IterationBudget, "level descent budget exceeded");
    }
    if (y < level.a) y = level.a;
    return acc * level.seed.c() * level.seed.g(y);
}

Magnitude GFamily::a(int m, double t) const {
    check_level(m);
    switch (m) {
    case 0: return Magnitude(t + 2.0);
    case 1: return Magnitude(2.0 * (t + 1.0));
    case 2:
        return mag_sub(mag_pow(Magnitude(2.0), Magnitude(t + 2.0), height_cap_),
                       Magnitude(2.0), height_cap_);
    case 3: return g3_->inverse(t);
    default: break;
    }
    if (t < 0.0)
        fail_at(ErrorKind::Domain,
                "the extension inverse needs a nonnegative argument", t);
    const Level& level = levels_[m - 4];
    double kd = std::floor(t);
    if (kd > static_cast<double>(iter_cap_))
        fail(ErrorKind::IterationBudget, "ascent iteration budget exceeded");
    Magnitude y(level.seed.f0_inverse(t - kd));
    for (long i = 0; i < static_cast<long>(kd); ++i) {
        if (y.is_tower())
            fail(ErrorKind::HeightCap,
                 "ascent exceeds the representable tower height");
        y = a(m - 1, y.real());
    }
    return y;
}

double GFamily::relation_residual(int m, const Magnitude& x) const {
    check_level(m);
    if (m < 1)
        fail(ErrorKind::Unsupported,
             "the relation links a level to its predecessor");
    double whole = g_mag(m, x);
    double inner = g_mag(m - 1, x);
    return whole - g(m, inner) - 1.0;
}

} // namespace growthlab
