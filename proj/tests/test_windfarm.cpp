#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "ffs/windfarm.hpp"

using namespace windffs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("turbine inertia constant from the rotor inertia") {
    const TurbineParams p;
    const double w = 1484.153 * 2.0 * std::numbers::pi / 60.0;
    CHECK_THAT(p.h_wt(), WithinRel(0.5 * 1993.285 * w * w / 5e6, 1e-14));
}

TEST_CASE("operating speeds from wind speed") {
    const TurbineModel m;
    const double table[][2] = {{6.5, 0.7852}, {7.5, 0.9063}, {8.5, 1.0387}, {9.5, 1.1619}, {10.5, 1.2}};
    for (const auto& row : table) CHECK_THAT(m.mppt_speed(row[0]), WithinRel(row[1], 0.02));
    CHECK(m.mppt_speed(10.5) == 1.2);
    CHECK(m.mppt_speed(3.0) == 0.7);
}

TEST_CASE("MPPT operating point is an equilibrium") {
    for (double v : {6.5, 7.5, 8.5, 9.0, 9.5}) {
        const WindFarm f(20, v);
        const WindFarmState s = f.initial_state();
        CHECK_THAT(f.aero_power(s.omega), WithinRel(s.p0, 1e-9));
        CHECK_THAT(f.tracking_power(s.omega), WithinRel(s.p0, 1e-9));
        CHECK_THAT(f.omega_dot(s.omega, s.p0), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("rated wind at the speed limit gives rated power") {
    const TurbineModel m;
    CHECK_THAT(m.aero_power(11.0, m.mppt_speed(11.0)), WithinRel(1.0, 1e-12));
}

TEST_CASE("speed-clamped farm holds its operating point") {
    const WindFarm f(80, 10.5);
    const WindFarmState s = f.initial_state();
    CHECK(s.omega == 1.2);
    CHECK_THAT(f.tracking_power(1.2), WithinRel(s.p0, 1e-12));
    CHECK(s.p0 > f.turbine().mppt_power(1.19));
}

TEST_CASE("adaptive gain from releasable energy") {
    CHECK(adaptive_gain(0.7, 0.7, 1.2) == 0.0);
    CHECK(adaptive_gain(1.2, 0.7, 1.2) == 1.0);
    const double omega0[] = {0.7852, 0.9063, 1.0387, 1.1619, 1.2};
    const double c[] = {0.1332, 0.3488, 0.6199, 0.9053, 1.0};
    for (int i = 0; i < 5; ++i) CHECK_THAT(adaptive_gain(omega0[i], 0.7, 1.2), WithinAbs(c[i], 0.005));
    CHECK_THROWS(adaptive_gain(1.0, 1.2, 1.2));
    const WindFarmState s = WindFarm(20, 7.5).initial_state();
    CHECK_THAT(adaptive_gain(s), WithinRel(adaptive_gain(s.omega0, 0.7, 1.2), 1e-12));
}

// Property: releasable fraction grows with the operating speed.
TEST_CASE("adaptive gain is monotone in the operating speed") {
    double prev = -1.0;
    for (double w = 0.7; w <= 1.2; w += 0.01) {
        const double c = adaptive_gain(w, 0.7, 1.2);
        REQUIRE(c >= prev);
        REQUIRE(c >= 0.0);
        REQUIRE(c <= 1.0);
        prev = c;
    }
}

TEST_CASE("exit happens at the MPPT intersection below the initial speed") {
    const WindFarm f(20, 9.0);
    WindFarmState s = f.initial_state();
    s.omega = s.omega0 - 0.05;
    const double p_mppt = f.tracking_power(s.omega);
    CHECK(exit_check(f, s, p_mppt + 1e-3) == ExitDecision::StayFfs);
    CHECK(exit_check(f, s, p_mppt) == ExitDecision::SwitchToMppt);
    s.omega = s.omega0 + 0.01;
    CHECK(exit_check(f, s, 0.0) == ExitDecision::StayFfs);
}

// Energy oracle: with constant output the shaft speed follows
// d(H w^2)/dt = P_a(w) - P, integrated here by the trapezoid rule.
TEST_CASE("shaft integration conserves kinetic energy") {
    const WindFarm f(20, 9.0);
    WindFarmState s = f.initial_state();
    const double p = s.p0 + 0.1, dt = 1e-3;
    const double e0 = kinetic_energy(f, s);
    double work = 0.0;
    for (int k = 0; k < 5000; ++k) {
        const double a0 = f.aero_power(s.omega);
        s = shaft_step(f, s, p, dt).state;
        work += 0.5 * dt * (a0 + f.aero_power(s.omega)) - p * dt;
    }
    CHECK_THAT(kinetic_energy(f, s) - e0, WithinAbs(work, 1e-6 * std::abs(work)));
    CHECK(s.omega < s.omega0);
}

TEST_CASE("farm support aggregates on the system base") {
    const FarmSupport farms[] = {{0.1, 100.0}, {0.05, 400.0}};
    CHECK_THAT(aggregate_support(farms, 200.0), WithinRel((10.0 + 20.0) / 200.0, 1e-14));
    CHECK_THROWS(aggregate_support(farms, 0.0));
}

TEST_CASE("invalid farms are rejected") {
    CHECK_THROWS_AS(WindFarm(0, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(WindFarm(20, -1.0), std::invalid_argument);
    TurbineParams p;
    p.omega_min = 1.3;
    CHECK_THROWS_AS(WindFarm(20, 9.0, p), std::invalid_argument);
}
