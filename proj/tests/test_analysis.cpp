#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <string>

#include "growthlab/abel.hpp"
#include "growthlab/analysis.hpp"
#include "growthlab/error.hpp"
#include "growthlab/expr.hpp"
#include "growthlab/xi_tower.hpp"

using namespace growthlab;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

ErrorKind error_kind_of(const std::function<void()>& thunk) {
    try {
        thunk();
    } catch (const Error& err) {
        return err.kind();
    }
    return ErrorKind::Unsupported; // sentinel: nothing thrown
}

Expr scaled_x(long long c) { return mul(constant(c), var()); }

// Every recorded step must carry converged order-one evidence, and the
// reported depth must equal the chain length.
void check_chain_invariants(const ClassResult& res) {
    CHECK(res.k == static_cast<int>(res.chain.size()));
    for (const auto& st : res.chain) {
        CAPTURE(st.describe());
        CHECK(st.evidence.status == OrderStatus::Converged);
        CHECK(std::fabs(st.evidence.value - 1.0) <= 1e-2);
    }
}

} // namespace

TEST_CASE("schedule validation and coordinates") {
    Schedule d;
    CHECK(d.level == 3);
    CHECK(d.j0 == 2.0);
    CHECK(d.dj == 1.0);
    CHECK(d.jmax == 40.0);
    CHECK(d.coords().size() == 39);

    Schedule s(2, 2.0, 0.5, 4.0);
    auto cs = s.coords();
    REQUIRE(cs.size() == 5);
    CHECK(cs.front() == 2.0);
    CHECK(cs.back() == 4.0);

    CHECK(error_kind_of([] { Schedule(3, 40.0, 1.0, 2.0); }) ==
          ErrorKind::Precondition);
    CHECK(error_kind_of([] { Schedule(3, 2.0, 0.0, 40.0); }) ==
          ErrorKind::Precondition);
    CHECK(error_kind_of([] { Schedule(-1, 2.0, 1.0, 40.0); }) ==
          ErrorKind::Precondition);
    CHECK(error_kind_of([] { Schedule(3, 0.0, 1e-7, 50.0); }) ==
          ErrorKind::Precondition);
    // A level beyond the tower is caught when the schedule is used.
    CHECK(error_kind_of([] {
              order(var(), 3, Schedule(7, 2.0, 1.0, 40.0));
          }) == ErrorKind::Precondition);
    CHECK(error_kind_of([] { order(var(), 9, Schedule()); }) ==
          ErrorKind::Precondition);
}

TEST_CASE("status names") {
    CHECK(std::string(to_string(OrderStatus::Converged)) == "converged");
    CHECK(std::string(to_string(OrderStatus::DivergedToInfinity)) ==
          "diverged_to_infinity");
    CHECK(std::string(to_string(OrderStatus::TendingToZero)) ==
          "tending_to_zero");
    CHECK(std::string(to_string(OrderStatus::Inconclusive)) == "inconclusive");
    CHECK(std::string(to_string(CompareVerdict::Precedes)) == "precedes");
    CHECK(std::string(to_string(CompareVerdict::Succeeds)) == "succeeds");
    CHECK(std::string(to_string(CompareVerdict::GapVanishing)) ==
          "gap-vanishing");
    CHECK(std::string(to_string(Membership::Accepted)) == "accepted");
    CHECK(std::string(to_string(Membership::Rejected)) == "rejected");
    CHECK(std::string(to_string(ClassStatus::VerifiedAtDepth)) ==
          "verified-at-depth");
    CHECK(std::string(to_string(ClassStatus::BudgetExhausted)) ==
          "budget-exhausted");
    CHECK(std::string(to_string(ClassStatus::NotFiniteClass)) ==
          "not-finite-class");
    CHECK(std::string(to_string(StepFamily::XiExact)) == "xi");
}

TEST_CASE("orders of scalings and powers against explicit gauges") {
    Schedule s2(2, 2.0, 1.0, 40.0);
    Expr lg = logk(1, var());
    Expr llg = logk(2, var());

    OrderEstimate o3 = order(scaled_x(3), lg, s2);
    REQUIRE(o3.status == OrderStatus::Converged);
    CHECK(std::fabs(o3.value - kLog3) <= 1e-12);
    CHECK(o3.samples.size() == 39);

    OrderEstimate osq = order(pow(var(), constant(2)), llg, s2);
    REQUIRE(osq.status == OrderStatus::Converged);
    CHECK(std::fabs(osq.value - kLog2) <= 1e-12);

    // order is additive under composition: the catalog composites land on
    // the sum of the factor orders.
    OrderEstimate o5 = order(scaled_x(5), lg, s2);
    OrderEstimate o15 = order(scaled_x(15), lg, s2);
    REQUIRE(o5.status == OrderStatus::Converged);
    REQUIRE(o15.status == OrderStatus::Converged);
    CHECK(std::fabs(o15.value - o3.value - o5.value) <= 3e-3);

    OrderEstimate oc2 = order(pow(var(), constant(2)), llg, s2);
    OrderEstimate oc3 = order(pow(var(), constant(3)), llg, s2);
    OrderEstimate oc6 = order(pow(var(), constant(6)), llg, s2);
    REQUIRE(oc3.status == OrderStatus::Converged);
    REQUIRE(oc6.status == OrderStatus::Converged);
    CHECK(std::fabs(oc6.value - oc2.value - oc3.value) <= 3e-3);
}

TEST_CASE("orders against tower levels are exact at tower scale") {
    Schedule s3(3, 2.0, 1.0, 40.0);

    OrderEstimate oe = order(expk(1, var()), 3, s3);
    REQUIRE(oe.status == OrderStatus::Converged);
    CHECK(std::fabs(oe.value - 1.0) <= 1e-12);

    OrderEstimate oee = order(expk(2, var()), 3, s3);
    REQUIRE(oee.status == OrderStatus::Converged);
    CHECK(std::fabs(oee.value - 2.0) <= 1e-12);

    for (auto [num, den] : {std::pair<int, int>{1, 3}, {1, 2}, {2, 3}}) {
        Expr f = frac_iter_node(Rational(num, den), var());
        OrderEstimate est = order(f, 3, s3, 1e-3);
        CAPTURE(num);
        CAPTURE(den);
        REQUIRE(est.status == OrderStatus::Converged);
        CHECK(std::fabs(est.value - double(num) / den) <= 1e-6);
    }

    // Composing fractional iterates adds the exponents.
    Expr half = frac_iter_node(Rational(1, 2), var());
    Expr third = frac_iter_node(Rational(1, 3), var());
    Expr chain = frac_iter_node(Rational(1, 2),
                                frac_iter_node(Rational(1, 3), var()));
    OrderEstimate oh = order(half, 3, s3);
    OrderEstimate ot = order(third, 3, s3);
    OrderEstimate oc = order(chain, 3, s3);
    REQUIRE(oc.status == OrderStatus::Converged);
    CHECK(std::fabs(oc.value - 5.0 / 6.0) <= 1e-6);
    CHECK(std::fabs(oc.value - oh.value - ot.value) <= 3e-3);
}

TEST_CASE("order against a constructed Abel function is one") {
    const Tower& tw = Tower::standard();
    struct Item {
        Expr f;
        double a;
        SeedKind seed;
        Schedule sched;
    };
    std::vector<Item> items;
    items.push_back({scaled_x(2), 1.0, SeedKind::Reciprocal,
                     Schedule(2, 2.0, 1.0, 40.0)});
    items.push_back({add(var(), constant(1)), 0.0, SeedKind::LogLinear,
                     Schedule(2, 2.0, 1.0, 10.0)});
    items.push_back({pow(var(), constant(2)), 2.0, SeedKind::LogLinear,
                     Schedule(2, 2.0, 1.0, 40.0)});
    items.push_back({expk(1, var()), 1.0, SeedKind::Reciprocal,
                     Schedule(3, 2.0, 1.0, 40.0)});
    for (const auto& it : items) {
        AbelFunction F = build_abel(it.f, it.a, it.seed, nullptr, &tw);
        OrderEstimate est = order(it.f, F, it.sched);
        CAPTURE(it.a);
        REQUIRE(est.status == OrderStatus::Converged);
        CHECK(std::fabs(est.value - 1.0) <= 1e-9);
    }
}

TEST_CASE("errors carry the failing schedule coordinate") {
    try {
        order(expk(3, var()), 3, Schedule(3, 60.0, 1.0, 70.0));
        FAIL("expected a height cap error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HeightCap);
        CHECK(e.at() == 62.0);
        CHECK(std::string(e.what()).find("schedule coordinate") !=
              std::string::npos);
    }
}

TEST_CASE("order profile locates the finite level") {
    auto prof = order_profile(expk(2, var()), 4);
    REQUIRE(prof.size() == 4);
    CHECK(prof[0].level == 1);
    CHECK(prof[0].estimate.status == OrderStatus::DivergedToInfinity);
    CHECK(prof[1].estimate.status == OrderStatus::DivergedToInfinity);
    REQUIRE(prof[2].estimate.status == OrderStatus::Converged);
    CHECK(std::fabs(prof[2].estimate.value - 2.0) <= 1e-12);
    CHECK(prof[3].estimate.status == OrderStatus::TendingToZero);

    // A sub-tower perturbation has order zero against every level: the
    // level 3 residuals shrink instead of settling.
    auto gp = order_profile(builder_g(), 3);
    REQUIRE(gp.size() == 3);
    CHECK(gp[0].estimate.status == OrderStatus::DivergedToInfinity);
    // At level 2 the residual grows without bound but is still only in the
    // hundreds at the end of the window, short of the divergence sentinel.
    CHECK(gp[1].estimate.status == OrderStatus::Inconclusive);
    CHECK(gp[2].estimate.status == OrderStatus::TendingToZero);

    auto ip = order_profile(var(), 4);
    for (const auto& entry : ip) {
        CAPTURE(entry.level);
        REQUIRE(entry.estimate.status == OrderStatus::Converged);
        CHECK(std::fabs(entry.estimate.value) <= 1e-12);
    }

    CHECK(error_kind_of([] { order_profile(var(), 9); }) ==
          ErrorKind::Precondition);
}

TEST_CASE("comparison verdicts at tower scale") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    CHECK(compare(builder_g(), builder_h(), s3) == CompareVerdict::Succeeds);
    CHECK(compare(builder_h(), builder_g(), s3) == CompareVerdict::Precedes);
    CHECK(compare(builder_g(), builder_g(), s3) ==
          CompareVerdict::GapVanishing);
    // The tower-of-logs map loses to g even though it wins at small
    // native arguments; the trailing window decides.
    CHECK(compare(builder_fk(3), builder_g(), s3) == CompareVerdict::Precedes);
    CHECK(compare(builder_g(), builder_fk(3), s3) == CompareVerdict::Succeeds);
}

TEST_CASE("membership ratios for the derivative classes") {
    Schedule s2(2, 2.0, 1.0, 40.0);
    Schedule s3(3, 2.0, 1.0, 40.0);

    BMembership shift = in_b(add(var(), constant(1)), 2, s2);
    CHECK(shift.verdict == Membership::Accepted);
    CHECK(shift.level == 2);
    REQUIRE(!shift.ratios.empty());
    CHECK(std::fabs(shift.ratios.back().residual - 1.0) <= 1e-12);

    BMembership ex3 = in_b(expk(1, var()), 3, s3);
    CHECK(ex3.verdict == Membership::Accepted);

    BMembership sq2 = in_b(pow(var(), constant(2)), 2, s2);
    CHECK(sq2.verdict == Membership::Rejected);
    CHECK(std::fabs(sq2.ratios.back().residual - 2.0) <= 1e-12);

    // Sample exp on a native window: once f(x) reaches tower scale the
    // product f'(x) chi(x) absorbs its native factor and the ratio
    // collapses to one, hiding the violation.
    BMembership ex2 = in_b(expk(1, var()), 2, Schedule(2, 2.0, 1.0, 6.5));
    CHECK(ex2.verdict == Membership::Rejected);

    // x^2 does lie in the level 3 class, but the ratio converges too
    // slowly to accept inside the sampled window.
    BMembership sq3 = in_b(pow(var(), constant(2)), 3, s2);
    CHECK(sq3.verdict != Membership::Accepted);

    CHECK(error_kind_of([&] { in_b(var(), 9, s2); }) ==
          ErrorKind::Precondition);
}

TEST_CASE("classification of shift maps climbs to the third level") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(add(var(), constant(2)), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 0);
    CHECK(res.k == 3);
    REQUIRE(res.chain.size() == 3);
    CHECK(res.chain[0].family == StepFamily::LogPower);
    CHECK(res.chain[0].index == 0);
    CHECK(res.chain[0].alpha == 1.0);
    CHECK(std::fabs(res.chain[0].lambda - 2.0) <= 1e-4);
    CHECK(res.chain[0].describe() == "x / 2");
    CHECK(res.chain[1].family == StepFamily::LogPower);
    CHECK(res.chain[1].index == 1);
    CHECK(std::fabs(res.chain[1].lambda - kLog2) <= 1e-9);
    CHECK(res.chain[2].family == StepFamily::XiExact);
    CHECK(res.chain[2].index == 3);
    check_chain_invariants(res);
}

TEST_CASE("classification of a square root perturbation") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    Expr f = add(var(), pow(var(), constant(Rational(1, 2))));
    ClassResult res = classify(f, s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 0);
    CHECK(res.k == 4);
    REQUIRE(res.chain.size() == 4);
    CHECK(res.chain[0].family == StepFamily::LogPower);
    CHECK(res.chain[0].index == 0);
    CHECK(res.chain[0].alpha == 0.5);
    CHECK(std::fabs(res.chain[0].lambda - 0.5) <= 1e-4);
    CHECK(res.chain[1].index == 2);
    CHECK(res.chain[1].alpha == 1.0);
    // The depth-two shift settles visibly below log 2.
    CHECK(std::fabs(res.chain[1].lambda - 0.68734) <= 5e-4);
    CHECK(std::fabs(res.chain[1].lambda - kLog2) >= 4e-3);
    CHECK(res.chain[2].family == StepFamily::ScaledXi);
    CHECK(res.chain[2].index == 3);
    CHECK(res.chain[2].lambda == 2.0);
    CHECK(res.chain[2].describe() == "Xi_3 / 2");
    CHECK(res.chain[3].family == StepFamily::XiExact);
    CHECK(res.chain[3].index == 4);
    check_chain_invariants(res);
}

TEST_CASE("classification of a log-density perturbation") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    Expr f = add(var(), div(var(), logk(1, var())));
    ClassResult res = classify(f, s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 1);
    CHECK(res.k == 2);
    REQUIRE(res.chain.size() == 2);
    CHECK(res.chain[0].family == StepFamily::LogPower);
    CHECK(res.chain[0].index == 1);
    CHECK(res.chain[0].alpha == 2.0);
    CHECK(std::fabs(res.chain[0].lambda - 1.99171) <= 3e-4);
    CHECK(res.chain[1].family == StepFamily::XiExact);
    CHECK(res.chain[1].index == 3);
    check_chain_invariants(res);
}

TEST_CASE("classification of doubling") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(scaled_x(2), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 1);
    CHECK(res.k == 2);
    REQUIRE(res.chain.size() == 2);
    CHECK(res.chain[0].index == 1);
    CHECK(res.chain[0].alpha == 1.0);
    CHECK(std::fabs(res.chain[0].lambda - kLog2) <= 1e-12);
    CHECK(res.chain[1].family == StepFamily::XiExact);
    CHECK(res.chain[1].index == 3);
    check_chain_invariants(res);
}

TEST_CASE("classification of the square map") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(pow(var(), constant(2)), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 1);
    CHECK(res.k == 3);
    REQUIRE(res.chain.size() == 3);
    CHECK(res.chain[0].index == 2);
    CHECK(std::fabs(res.chain[0].lambda - kLog2) <= 1e-12);
    CHECK(res.chain[1].family == StepFamily::ScaledXi);
    CHECK(res.chain[1].index == 3);
    CHECK(res.chain[1].lambda == 2.0);
    CHECK(res.chain[2].family == StepFamily::XiExact);
    CHECK(res.chain[2].index == 4);
    check_chain_invariants(res);
}

TEST_CASE("classification of the self-power map") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(pow(var(), logk(1, var())), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 1);
    CHECK(res.k == 3);
    REQUIRE(res.chain.size() == 3);
    CHECK(res.chain[0].index == 3);
    CHECK(res.chain[0].alpha == 1.0);
    CHECK(std::fabs(res.chain[0].lambda - kLog2) <= 1e-12);
    CHECK(res.chain[1].family == StepFamily::ScaledXi);
    CHECK(res.chain[1].index == 3);
    CHECK(res.chain[1].lambda == 3.0);
    CHECK(res.chain[2].family == StepFamily::XiExact);
    CHECK(res.chain[2].index == 4);
    check_chain_invariants(res);
}

TEST_CASE("classification of the half exponential") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(frac_iter_node(Rational(1, 2), var()), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 2);
    CHECK(res.k == 2);
    REQUIRE(res.chain.size() == 2);
    CHECK(res.chain[0].family == StepFamily::ScaledXi);
    CHECK(res.chain[0].index == 3);
    CHECK(res.chain[0].lambda == 0.5);
    CHECK(res.chain[1].family == StepFamily::XiExact);
    CHECK(res.chain[1].index == 4);
    check_chain_invariants(res);
}

TEST_CASE("classification of the exponential") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(expk(1, var()), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 2);
    CHECK(res.k == 1);
    REQUIRE(res.chain.size() == 1);
    CHECK(res.chain[0].family == StepFamily::XiExact);
    CHECK(res.chain[0].index == 3);
    CHECK(res.chain[0].describe() == "Xi_3");
    check_chain_invariants(res);
}

TEST_CASE("tower inverses classify by coincidence") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(xi_inv_node(4, var()), s3);
    CHECK(res.status == ClassStatus::VerifiedAtDepth);
    CHECK(res.n == 4);
    CHECK(res.k == 0);
    CHECK(res.chain.empty());
}

TEST_CASE("maps at or below the identity are outside the hierarchy") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult lg = classify(logk(1, var()), s3);
    CHECK(lg.status == ClassStatus::NotFiniteClass);
    CHECK(lg.n == -1);
    CHECK(lg.k == 0);
    CHECK(lg.chain.empty());
    ClassResult id = classify(var(), s3);
    CHECK(id.status == ClassStatus::NotFiniteClass);
}

TEST_CASE("slow perturbations exhaust the budget with an Abel step") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(builder_g(), s3);
    CHECK(res.status == ClassStatus::BudgetExhausted);
    CHECK(res.n == -1);
    CHECK(res.k == 1);
    REQUIRE(res.chain.size() == 1);
    CHECK(res.chain[0].family == StepFamily::ConstructedAbel);
    CHECK(res.chain[0].base == 5.0);
    REQUIRE(res.chain[0].abel != nullptr);
    CHECK(res.chain[0].abel->base() == 5.0);
    CHECK(res.chain[0].describe() == "Abel function of the map at base 5");
    check_chain_invariants(res);
}

TEST_CASE("tower-coordinate squaring also falls back to an Abel step") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    Expr f = xi_inv_node(3, pow(xi_node(3, var()), constant(2)));
    ClassResult res = classify(f, s3);
    CHECK(res.status == ClassStatus::BudgetExhausted);
    CHECK(res.k == 1);
    REQUIRE(res.chain.size() == 1);
    CHECK(res.chain[0].family == StepFamily::ConstructedAbel);
    CHECK(res.chain[0].base == 5.0);
    check_chain_invariants(res);
}

TEST_CASE("classification respects its budgets") {
    Schedule s3(3, 2.0, 1.0, 40.0);
    ClassResult res = classify(add(var(), constant(2)), s3, 1, 5);
    CHECK(res.status == ClassStatus::BudgetExhausted);
    CHECK(res.k == 1);
    CHECK(res.n == -1);
    REQUIRE(res.chain.size() == 1);
    CHECK(res.chain[0].family == StepFamily::LogPower);

    CHECK(error_kind_of([&] { classify(var(), s3, 0, 5); }) ==
          ErrorKind::Precondition);
    CHECK(error_kind_of([&] { classify(var(), s3, 4, 6); }) ==
          ErrorKind::Precondition);
    CHECK(error_kind_of([&] { classify(var(), s3, 4, 2); }) ==
          ErrorKind::Precondition);
}
