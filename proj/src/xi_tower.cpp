#include "growthlab/xi_tower.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "growthlab/roots.hpp"

namespace growthlab {

namespace {
const double kE = std::exp(1.0);
}

SeedKind TowerConfig::seed_for(int level) const {
    if (level < 3) fail(ErrorKind::Domain, "seeds are defined for levels >= 3");
    size_t idx = static_cast<size_t>(level - 3);
    return idx < seeds.size() ? seeds[idx] : SeedKind::Reciprocal;
}

TowerConfig TowerConfig::from_json_text(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        fail(ErrorKind::Parse, "tower configuration must be a JSON object");
    TowerConfig cfg;
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        const auto& val = item.value();
        if (key == "max_level") {
            if (!val.is_number_integer())
                fail(ErrorKind::Parse, "max_level must be an integer");
            cfg.max_level = val.get<int>();
        } else if (key == "iteration_cap") {
            if (!val.is_number_integer())
                fail(ErrorKind::Parse, "iteration_cap must be an integer");
            cfg.iteration_cap = val.get<long>();
        } else if (key == "height_cap") {
            if (!val.is_number_integer())
                fail(ErrorKind::Parse, "height_cap must be an integer");
            cfg.height_cap = val.get<int>();
        } else if (key == "seeds") {
            if (!val.is_object())
                fail(ErrorKind::Parse, "seeds must be an object keyed by level");
            for (const auto& entry : val.items()) {
                const std::string& lvl = entry.key();
                bool digits = !lvl.empty() && lvl.size() <= 2 &&
                              lvl.find_first_not_of("0123456789") == std::string::npos;
                if (!digits)
                    fail(ErrorKind::Parse, "seed level must be an integer: " + lvl);
                int level = std::stoi(lvl);
                if (level < 3)
                    fail(ErrorKind::Parse, "seeds are configurable for levels >= 3");
                if (!entry.value().is_string())
                    fail(ErrorKind::Parse, "seed kind must be a string");
                std::string name = entry.value().get<std::string>();
                SeedKind kind = SeedKind::Reciprocal;
                if (name == "Reciprocal") kind = SeedKind::Reciprocal;
                else if (name == "LogLinear") kind = SeedKind::LogLinear;
                else fail(ErrorKind::Parse, "unknown seed kind: " + name);
                size_t idx = static_cast<size_t>(level - 3);
                if (cfg.seeds.size() <= idx)
                    cfg.seeds.resize(idx + 1, SeedKind::Reciprocal);
                cfg.seeds[idx] = kind;
            }
        } else {
            fail(ErrorKind::Parse, "unknown tower configuration key: " + key);
        }
    }
    if (cfg.max_level < 3 || cfg.max_level > 9)
        fail(ErrorKind::Parse, "max_level must be between 3 and 9");
    if (cfg.iteration_cap < 1)
        fail(ErrorKind::Parse, "iteration_cap must be positive");
    if (cfg.height_cap < 4)
        fail(ErrorKind::Parse, "height_cap must be at least 4");
    if (static_cast<int>(cfg.seeds.size()) + 2 > cfg.max_level)
        fail(ErrorKind::Parse, "seed level exceeds max_level");
    return cfg;
}

TowerConfig TowerConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Domain, "cannot read tower configuration file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

Tower::Tower(const TowerConfig& config) : config_(config) {
    if (config_.max_level < 3 || config_.max_level > 9)
        fail(ErrorKind::Domain, "tower max_level must be between 3 and 9");
    if (config_.iteration_cap < 1)
        fail(ErrorKind::Domain, "tower iteration cap must be positive");
    if (config_.height_cap < 4)
        fail(ErrorKind::Domain, "tower height cap must be at least 4");
    levels_.reserve(static_cast<size_t>(config_.max_level - 2));
    for (int n = 3; n <= config_.max_level; ++n) {
        // Level n is the Abel function of the inverse of the level below;
        // levels built so far serve as the evaluation context.
        Expr f = (n == 3) ? expk(1, var()) : xi_inv_node(n - 1, var());
        Expr finv = (n == 3) ? logk(1, var()) : xi_node(n - 1, var());
        levels_.push_back(build_abel(f, 1.0, config_.seed_for(n), finv, this,
                                     config_.iteration_cap, config_.height_cap));
    }
}

const Tower& Tower::standard() {
    static const Tower t{TowerConfig{}};
    return t;
}

double Tower::xi(int n, double x) const {
    if (n < 0 || n > config_.max_level ||
        (n >= 3 && static_cast<size_t>(n - 3) >= levels_.size()))
        fail(ErrorKind::Unsupported, "tower level out of range");
    if (!std::isfinite(x)) fail_at(ErrorKind::Domain, "xi requires a finite argument", x);
    if (n == 0) return x - kE;
    if (n == 1) return x / kE;
    if (n == 2) {
        if (!(x > 0.0))
            fail_at(ErrorKind::Domain, "logarithm requires a positive argument", x);
        return std::log(x);
    }
    return levels_[static_cast<size_t>(n - 3)].eval(x);
}

double Tower::xi(int n, const TowerReal& x) const {
    if (n < 0 || n > config_.max_level ||
        (n >= 3 && static_cast<size_t>(n - 3) >= levels_.size()))
        fail(ErrorKind::Unsupported, "tower level out of range");
    if (auto r = x.to_real()) return xi(n, *r);
    if (n <= 2) fail(ErrorKind::Overflow, "value exceeds native range at this level");
    if (n == 3) return levels_[0].eval(x);
    // Abel relation: Xi_n(x) = 1 + Xi_n(Xi_{n-1}(x)) once x is above e,
    // which any tower beyond native range is.
    return 1.0 + xi(n, xi(n - 1, x));
}

double Tower::xi_mag(int n, const Magnitude& x) const {
    if (x.is_real()) return xi(n, x.real());
    return xi(n, x.tower());
}

Magnitude Tower::xi_inv(int n, double t) const {
    if (n < 0 || n > config_.max_level ||
        (n >= 3 && static_cast<size_t>(n - 3) >= levels_.size()))
        fail(ErrorKind::Unsupported, "tower level out of range");
    if (!(t >= 0.0))
        fail_at(ErrorKind::Domain, "xi_inv requires a nonnegative argument", t);
    if (n == 0) return Magnitude(t + kE);
    if (n == 1) return Magnitude(kE * t);
    if (n == 2) return mag_exp(Magnitude(t), config_.height_cap);
    return levels_[static_cast<size_t>(n - 3)].inverse(t);
}

double Tower::chi(int n, double x) const {
    if (n < 2 || n > config_.max_level ||
        (n >= 3 && static_cast<size_t>(n - 3) >= levels_.size()))
        fail(ErrorKind::Unsupported, "tower level out of range");
    if (x < 1.0) {
        // Descent through log can land a hair under 1; snap a tight slop.
        if (x > 1.0 - 1e-9) x = 1.0;
        else fail_at(ErrorKind::Domain, "chi requires x >= 1", x);
    }
    if (n == 2) return x;
    if (x < kE) return 1.0 / levels_[static_cast<size_t>(n - 3)].derivative(x);
    double r = chi(n - 1, x) * chi(n, xi(n - 1, x));
    if (!std::isfinite(r)) fail_at(ErrorKind::Overflow, "chi exceeds native range", x);
    return r;
}

Magnitude Tower::chi_mag(int n, const Magnitude& x) const {
    if (n < 2 || n > config_.max_level ||
        (n >= 3 && static_cast<size_t>(n - 3) >= levels_.size()))
        fail(ErrorKind::Unsupported, "tower level out of range");
    if (x.is_real() && x.real() < kE) return Magnitude(chi(n, x.real()));
    if (n == 2) return x;
    Magnitude inner_arg =
        (n - 1 == 2) ? mag_log(x) : Magnitude(xi_mag(n - 1, x));
    Magnitude lower = chi_mag(n - 1, x);
    Magnitude inner = chi_mag(n, inner_arg);
    return mag_mul(lower, inner, config_.height_cap);
}

Magnitude Tower::frac_iter_exp(double t, const Magnitude& x) const {
    double s = xi_mag(3, x) + t;
    if (s < 0.0)
        fail_at(ErrorKind::Domain, "fractional iterate descends below the base point", s);
    return xi_inv(3, s);
}

const AbelFunction& Tower::level(int n) const {
    if (n < 3 || static_cast<size_t>(n - 3) >= levels_.size())
        fail(ErrorKind::Unsupported, "tower level out of range");
    return levels_[static_cast<size_t>(n - 3)];
}

Expr builder_fk(int k) {
    if (k < 0) fail(ErrorKind::Domain, "fk requires k >= 0");
    if (k == 0) return add(var(), constant(1));
    return expk(k, add(logk(k, var()), constant(1)));
}

Expr builder_g() {
    Expr s = xi_node(3, var());
    return xi_inv_node(3, add(s, div(constant(1), s)));
}

Expr builder_h() {
    Expr s = xi_node(3, var());
    Expr den = xi_inv_node(3, div(s, constant(2)));
    return xi_inv_node(3, add(s, div(constant(1), den)));
}

Expr builder_ell() {
    Expr s3 = xi_node(3, var());
    Expr den = xi_inv_node(4, sub(xi_node(4, var()), constant(Rational{1, 2})));
    return xi_inv_node(3, add(s3, div(constant(1), den)));
}

Expr between_gadget_unchecked(const Expr& F, const Expr& delta, int m) {
    if (m < 3) fail(ErrorKind::Unsupported, "gadget level must be at least 3");
    return gadget_node(m, F, delta, var());
}

Expr between_gadget(const Expr& F, const Expr& delta, int m) {
    const Tower& tw = Tower::standard();
    if (m < 3 || m > tw.max_level())
        fail(ErrorKind::Unsupported, "gadget level out of range");
    // Sample log-spaced points; the reference function must increase and
    // the perturbation must stay positive and decrease.
    const int kPts = 16;
    double prev_f = 0.0;
    double prev_d = 0.0;
    for (int i = 0; i < kPts; ++i) {
        double x = 10.0 * std::pow(10.0, 3.0 * i / (kPts - 1));
        double fv = eval_real(F, x, &tw);
        double dv = eval_real(delta, x, &tw);
        if (!(dv > 0.0))
            fail_at(ErrorKind::Precondition, "gadget delta must be positive", x);
        if (i > 0) {
            if (!(fv > prev_f))
                fail_at(ErrorKind::Precondition,
                        "gadget reference function must be increasing", x);
            if (dv > prev_d)
                fail_at(ErrorKind::Precondition, "gadget delta must be decreasing", x);
        }
        prev_f = fv;
        prev_d = dv;
    }
    return gadget_node(m, F, delta, var());
}

Magnitude gadget_forward(int m, const Expr& F, const Expr& delta,
                         const Magnitude& y, const Tower& tower) {
    int cap = tower.height_cap();
    double sy = tower.xi_mag(m, y);
    auto corr_at = [&](const Magnitude& z) {
        Magnitude one_plus = mag_add(Magnitude(1.0), eval_mag(delta, z, &tower), cap);
        Magnitude ch = tower.chi_mag(m, eval_mag(F, z, &tower));
        auto c = mag_div(one_plus, ch, cap).to_real();
        return c ? *c : 0.0; // tower-sized chi: the correction vanishes
    };
    // The correction decreases along s, so the root of s - corr(z(s)) = sy
    // lies in [sy, sy + corr(y)]; this bracket never leaves the
    // representable range when y itself is representable.
    double corr0 = corr_at(y);
    if (corr0 == 0.0) return tower.xi_inv(m, sy);
    auto phi = [&](double s) {
        return s - corr_at(tower.xi_inv(m, s));
    };
    double s = solve_bracketed(phi, sy, sy, sy + corr0);
    return tower.xi_inv(m, s);
}

} // namespace growthlab
