#include <doctest.h>

#include <cmath>

#include "crwb/automata.hpp"
#include "crwb/rng.hpp"
#include "crwb/ultradiscrete.hpp"

using crwb::ExtendedReal;
using crwb::SeededRng;
using crwb::UdBurgersFull;
using crwb::UdField;
using crwb::UdHistory;

namespace {

const ExtendedReal kBot = ExtendedReal::bottom();

UdField ud(std::vector<double> xs) {
    std::vector<ExtendedReal> v;
    v.reserve(xs.size());
    for (double x : xs) v.emplace_back(x);
    return UdField(std::move(v));
}

UdField random_int_ud(SeededRng& rng, int n, int lo, int hi) {
    std::vector<ExtendedReal> v;
    v.reserve(n);
    for (int j = 0; j < n; ++j)
        v.emplace_back(static_cast<double>(rng.uniform_int(lo, hi)));
    return UdField(std::move(v));
}

}  // namespace

TEST_CASE("max-plus diffusion step examples") {
    // memoryless: bottoms propagate and the two-neighbour max survives
    {
        std::vector<ExtendedReal> fc{ExtendedReal(0.0), kBot, kBot};
        const UdHistory h(UdField(3, ExtendedReal(0.0)), UdField(fc), kBot);
        const UdField next = crwb::step_ud_diffusion(h).curr();
        CHECK(next[0] == kBot);
        CHECK(next[1] == ExtendedReal(0.0));
        CHECK(next[2] == ExtendedReal(0.0));
    }
    // the memory term R + F(n-1) can dominate
    {
        const UdHistory h(UdField(3, ExtendedReal(5.0)), UdField(3, ExtendedReal(0.0)),
                          ExtendedReal(0.0));
        const UdField next = crwb::step_ud_diffusion(h).curr();
        for (int j = 0; j < 3; ++j) CHECK(next[j] == ExtendedReal(5.0));
    }
    // constants are fixed points when R <= 0
    {
        const UdHistory h(UdField(4, ExtendedReal(2.0)), UdField(4, ExtendedReal(2.0)),
                          ExtendedReal(-1.0));
        CHECK(crwb::step_ud_diffusion(h).curr().values() ==
              UdField(4, ExtendedReal(2.0)).values());
    }
}

TEST_CASE("memoryless diffusion equals the two-argument max form") {
    SeededRng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 24));
        const UdHistory h(random_int_ud(rng, n, -5, 5), random_int_ud(rng, n, -5, 5), kBot);
        const UdField next = crwb::step_ud_diffusion(h).curr();
        for (int j = 0; j < n; ++j)
            CHECK(next[j] == crwb::max(h.curr()[j - 1], h.curr()[j + 1]));
    }
}

TEST_CASE("max-plus ratio transform examples") {
    {
        const auto [u, v] = crwb::ud_cole_hopf(ud({0, 1, 2}), ud({1, 2, 3}), 2.0);
        CHECK(u.values() == ud({2, 2, -1}).values());
        CHECK(v.values() == ud({2, 2, 2}).values());
    }
    {
        const auto [u, v] = crwb::ud_cole_hopf(UdField(3, ExtendedReal(1.0)),
                                               UdField(3, ExtendedReal(4.0)), 3.0);
        for (int j = 0; j < 3; ++j) {
            CHECK(u[j] == ExtendedReal(1.5));
            CHECK(v[j] == ExtendedReal(4.5));
        }
    }
    // a bottom site turns the difference into +inf (dropped-from-min marker)
    {
        std::vector<ExtendedReal> fc{kBot, ExtendedReal(1.0), ExtendedReal(0.0)};
        const auto [u, v] = crwb::ud_cole_hopf(UdField(fc), ud({0, 0, 0}), 0.5);
        CHECK(u[0].is_top());       // F(1) - F(0) with F(0) = -inf
        CHECK(u[1].is_finite());
        CHECK(v[0].is_top());
    }
    // both operands bottom is indeterminate
    {
        std::vector<ExtendedReal> fc{kBot, kBot, ExtendedReal(0.0)};
        CHECK_THROWS_AS(crwb::ud_cole_hopf(UdField(fc), UdField(fc), 1.0),
                        crwb::IndeterminateForm);
    }
}

TEST_CASE("full ratio step examples") {
    // table row 19 neighbourhood embedded at j=1, L=1, R=0: U' = 1
    {
        const UdBurgersFull s(ud({1, 0, 0, 0}), ud({1, 1, 1, 1}), ud({1, 1, 0, 1}), 1.0,
                              ExtendedReal(0.0));
        const UdBurgersFull next = crwb::step_ud_burgers_full(s);
        CHECK(next.u()[1] == ExtendedReal(1.0));
    }
    // translation-invariant fixed point
    {
        const UdBurgersFull s(UdField(5, ExtendedReal(1.0)), UdField(5, ExtendedReal(1.0)),
                              UdField(5, ExtendedReal(1.0)), 2.0, ExtendedReal(0.0));
        const UdBurgersFull next = crwb::step_ud_burgers_full(s);
        CHECK(next.u().values() == UdField(5, ExtendedReal(1.0)).values());
    }
}

TEST_CASE("memoryless full step ignores the v history entirely") {
    SeededRng rng(62);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 16));
        const double cap = static_cast<double>(rng.uniform_int(1, 3));
        const UdField u = random_int_ud(rng, n, 0, static_cast<int>(cap));
        const UdBurgersFull a(u, random_int_ud(rng, n, -3, 3), random_int_ud(rng, n, -3, 3), cap,
                              kBot);
        const UdBurgersFull b(u, random_int_ud(rng, n, -3, 3), random_int_ud(rng, n, -3, 3), cap,
                              kBot);
        const UdField ua = crwb::step_ud_burgers_full(a).u();
        const UdField ub = crwb::step_ud_burgers_full(b).u();
        CHECK(ua.values() == ub.values());
        // and the update collapses to the two-argument min form
        for (int j = 0; j < n; ++j) {
            const ExtendedReal expected =
                u[j] + crwb::min(u[j - 1], ExtendedReal(cap) - u[j]) -
                crwb::min(u[j], ExtendedReal(cap) - u[j + 1]);
            CHECK(ua[j] == expected);
        }
    }
}

TEST_CASE("transform and step commute exactly on the max-plus side") {
    SeededRng rng(63);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(4, 32));
        const double cap = static_cast<double>(rng.uniform_int(1, 3));
        const ExtendedReal r = rng.uniform_int(0, 3) == 0
                                   ? kBot
                                   : ExtendedReal(static_cast<double>(rng.uniform_int(-2, 2)));
        UdHistory hist(random_int_ud(rng, n, -3, 3), random_int_ud(rng, n, -3, 3), r);
        UdHistory advanced = crwb::step_ud_diffusion(hist);
        auto [u0, v0] = crwb::ud_cole_hopf(hist.curr(), advanced.curr(), cap);
        auto [u_unused, v_prev] = crwb::ud_cole_hopf(hist.prev(), hist.curr(), cap);
        (void)u_unused;
        UdBurgersFull ratio(std::move(u0), std::move(v0), std::move(v_prev), cap, r);
        for (int t = 0; t < 50; ++t) {
            ratio = crwb::step_ud_burgers_full(ratio);
            const UdHistory next = crwb::step_ud_diffusion(advanced);
            const auto [u_ref, v_ref] = crwb::ud_cole_hopf(advanced.curr(), next.curr(), cap);
            REQUIRE(ratio.u().values() == u_ref.values());
            REQUIRE(ratio.v().values() == v_ref.values());
            advanced = next;
        }
    }
}

TEST_CASE("memory elimination: shift, round-trip, trajectory equivalence") {
    {
        const UdBurgersFull s(ud({0, 1}), UdField(2, ExtendedReal(3.0)),
                              UdField(2, ExtendedReal(3.0)), 1.0, ExtendedReal(2.0));
        const UdBurgersFull reduced = crwb::reduce_memory(s);
        CHECK(reduced.v().values() == UdField(2, ExtendedReal(1.0)).values());
        CHECK(reduced.memory() == ExtendedReal(0.0));
        // unshift reproduces the original exactly
        for (int j = 0; j < 2; ++j)
            CHECK(reduced.v()[j] + s.memory() == s.v()[j]);
    }
    {
        const UdBurgersFull s(ud({0}), ud({0}), ud({0}), 1.0, kBot);
        CHECK_THROWS_AS(crwb::reduce_memory(s), crwb::RNotFinite);
    }

    // 50 steps, L=3, N=16: the reduced-variable automaton step tracks the
    // full step sitewise after shifting by R
    SeededRng rng(64);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 16;
        const double cap = 3.0;
        const double r = static_cast<double>(rng.uniform_int(-2, 2));
        std::vector<double> u(n), vt(n), vtp(n);
        for (int j = 0; j < n; ++j) {
            u[j] = static_cast<double>(rng.uniform_int(0, 3));
            vt[j] = static_cast<double>(rng.uniform_int(0, 3));
            vtp[j] = static_cast<double>(rng.uniform_int(0, 3));
        }
        UdBurgersFull full(
            ud(std::vector<double>(u)),
            crwb::field_map(crwb::PeriodicField<double>(vt),
                            [&](double x) { return ExtendedReal(x + r); }),
            crwb::field_map(crwb::PeriodicField<double>(vtp),
                            [&](double x) { return ExtendedReal(x + r); }),
            cap, ExtendedReal(r));
        crwb::UdBurgersState reduced(crwb::PeriodicField<double>(u),
                                     crwb::PeriodicField<double>(vt),
                                     crwb::PeriodicField<double>(vtp), cap);
        for (int t = 0; t < 50; ++t) {
            full = crwb::step_ud_burgers_full(full);
            reduced = crwb::step_ud_burgers_reduced(reduced);
            for (int j = 0; j < n; ++j) {
                REQUIRE(full.u()[j] == ExtendedReal(reduced.occupancy()[j]));
                REQUIRE(full.v()[j] == ExtendedReal(reduced.inflow_limit()[j] + r));
            }
        }
    }
}

TEST_CASE("inflow evaluation") {
    const crwb::PeriodicField<double> u(std::vector<double>{1.0, 0.0});
    const crwb::PeriodicField<double> vt(std::vector<double>{1.0, 1.0});
    CHECK(crwb::inflow_at(u, vt, 1.0, 1) == 1.0);  // min(1, 1, 1)

    const crwb::PeriodicField<double> empty_left(std::vector<double>{0.0, 0.0});
    CHECK(crwb::inflow_at(empty_left, vt, 1.0, 1) == 0.0);

    const crwb::PeriodicField<double> vt0(std::vector<double>{0.0, 0.0});
    CHECK(crwb::inflow_at(u, vt0, 1.0, 1) == 0.0);

    const UdField uu = ud({1, 0});
    const UdField vv = ud({1, 1});
    CHECK(crwb::inflow_at(uu, vv, 1.0, 1) == ExtendedReal(1.0));
}

TEST_CASE("persistence solvers") {
    CHECK(crwb::solve_p_diffusion(kBot, 0.1) == 0.5);
    CHECK(crwb::solve_p_burgers(kBot, 0.1) == 0.5);

    // K = 3 for the diffusion definition: p = 1/3, and back-substitution holds
    {
        const double eps = 0.7;
        const double p = crwb::solve_p_diffusion(ExtendedReal(eps * std::log(3.0)), eps);
        CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK((1.0 - 2.0 * p) / (p * p) == doctest::Approx(3.0).epsilon(1e-12));
    }
    // K = 2 for the ratio definition: p = 1/4
    {
        const double eps = 0.3;
        const double p = crwb::solve_p_burgers(ExtendedReal(eps * std::log(2.0)), eps);
        CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
        CHECK((1.0 - 2.0 * p) / p == doctest::Approx(2.0).epsilon(1e-12));
    }
    // p decreases monotonically toward 0 as K grows
    {
        double prev = 0.5;
        for (double r = 0.0; r <= 6.0; r += 1.0) {
            const double p = crwb::solve_p_diffusion(ExtendedReal(r), 0.5);
            CHECK(p > 0.0);
            CHECK(p <= prev);
            prev = p;
        }
    }
    // eps -> 0 with fixed R < 0 drives K -> 0, p -> 1/2
    {
        const double p = crwb::solve_p_burgers(ExtendedReal(-1.0), 1e-4);
        CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK_THROWS_AS(crwb::solve_p_diffusion(ExtendedReal(0.0), 0.0), crwb::OutOfRange);
}

TEST_CASE("limit verifier on the reference diffusion instance") {
    const UdHistory h(UdField(4, ExtendedReal(0.0)), ud({0, -1, -2, -1}), ExtendedReal(0.0));
    const std::vector<double> schedule{1.0, 0.5, 0.25, 0.1, 0.05, 0.01};
    const crwb::LimitReport rep = crwb::verify_limit_diffusion(h, schedule);
    REQUIRE(rep.max_abs_error.size() == schedule.size());
    for (std::size_t i = 0; i + 1 < rep.max_abs_error.size(); ++i)
        CHECK(rep.max_abs_error[i + 1] < rep.max_abs_error[i]);
    CHECK(rep.max_abs_error.back() <= 0.05);
    CHECK(rep.converged);
    CHECK(rep.rate_constant > 0.0);
}

TEST_CASE("limit verifier on constant memoryless fields hits the exact tie gap") {
    // Both sides are translation invariant, but the discrete step mapped back
    // through f = p^n e^{F/eps} sits exactly eps*log(2) above the max-plus
    // value (the two neighbour terms tie), so the error is the pure
    // log-sum-exp gap at every eps.
    const UdHistory h(UdField(5, ExtendedReal(1.0)), UdField(5, ExtendedReal(1.0)), kBot);
    const crwb::LimitReport rep =
        crwb::verify_limit_diffusion(h, crwb::default_epsilon_schedule());
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
        CHECK(rep.max_abs_error[i] ==
              doctest::Approx(rep.epsilons[i] * std::log(2.0)).epsilon(1e-12));
    CHECK(rep.converged);
}

TEST_CASE("limit verifier on random integer ratio instances") {
    SeededRng rng(65);
    const auto schedule = crwb::default_epsilon_schedule();
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 12;
        const ExtendedReal r = trial % 4 == 0
                                   ? kBot
                                   : ExtendedReal(static_cast<double>(rng.uniform_int(-1, 1)));
        const UdBurgersFull s(random_int_ud(rng, n, 0, 2), random_int_ud(rng, n, 0, 2),
                              random_int_ud(rng, n, 0, 2), 2.0, r);
        const crwb::LimitReport rep = crwb::verify_limit_burgers(s, schedule);
        CHECK(rep.converged);
        CHECK(rep.max_abs_error.back() <= 0.01 * std::log(3.0) + 1e-6);
    }
}

TEST_CASE("limit verifier rejects bad schedules") {
    const UdHistory h(UdField(3, ExtendedReal(0.0)), UdField(3, ExtendedReal(0.0)), kBot);
    CHECK_THROWS_AS(crwb::verify_limit_diffusion(h, {}), crwb::OutOfRange);
    CHECK_THROWS_AS(crwb::verify_limit_diffusion(h, {0.5, 0.5}), crwb::OutOfRange);
    CHECK_THROWS_AS(crwb::verify_limit_diffusion(h, {0.5, -0.1}), crwb::OutOfRange);
    CHECK_THROWS_AS(crwb::verify_limit_diffusion(h, {0.1, 0.5}), crwb::OutOfRange);
}
