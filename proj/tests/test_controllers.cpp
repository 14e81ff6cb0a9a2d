#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ffs/config.hpp"
#include "ffs/controllers.hpp"
#include "ffs/tuner.hpp"

using namespace windffs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const SystemParams kSingle{4.0, 1.0, 20.0, 200.0, 50.0};
}

TEST_CASE("PI integrates with the trapezoid rule") {
    PiController pi({2.0, 3.0});
    const double dt = 0.1;
    double out = 0.0;
    for (int k = 0; k <= 10; ++k) out = pi.step(k * dt, dt);  // e = t
    // integral of t over [0, 1] is exact under the trapezoid rule
    CHECK_THAT(pi.integral(), WithinRel(0.5, 1e-12));
    CHECK_THAT(out, WithinRel(2.0 * 1.0 + 3.0 * 0.5, 1e-12));
    pi.reset();
    CHECK(pi.integral() == 0.0);
}

TEST_CASE("gain scaling and validation") {
    const PiGains g = scale_gains({148.0, 13.5}, 0.25);
    CHECK(g == PiGains{37.0, 3.375});
    CHECK_THROWS(scale_gains({1.0, 1.0}, 1.5));
    CHECK_THROWS(PiGains{0.0, 1.0}.validate());
    CHECK_NOTHROW(PiGains{0.0, 0.0}.validate(true));
}

TEST_CASE("TiPi output is zero until activated") {
    TiPiController c({10.0, 1.0});
    CHECK(ti_pi_step(c, -0.01, 0.01) == 0.0);
    CHECK_FALSE(c.active());
}

// Property: when the measured frequency follows the optimal trajectory
// exactly, the time-independent reference reproduces it and the PI stays idle.
TEST_CASE("TiPi reference reproduces the trajectory it is fed") {
    const TrajectorySpec s = make_spec(kSingle, 0.075, 1.18);
    TiPiController c(design_pi(kSingle, 1.18));
    const double dt = 1e-3;
    c.activate(s, 0.0, 0.0);
    double worst = 0.0;
    for (int k = 0; k <= 20000; ++k) {
        const double t = k * dt;
        const double out = c.step(f_opt(s, t), dt);
        worst = std::max(worst, std::abs(c.reference() - f_opt(s, t)));
        REQUIRE(std::abs(out) < 1e-6 * s.pd * 150.0);
    }
    CHECK(worst < 1e-5 * std::abs(s.a_f));  // trapezoid error, O(dt^2)
}

TEST_CASE("PI prototype tracks the clock-driven reference") {
    const TrajectorySpec s = make_spec(kSingle, 0.075, 1.18);
    PiPrototype p({1.0, 0.0});
    p.activate(s, 2.0);
    CHECK(p.active());
    CHECK_THAT(pi_prototype_step(p, 0.0, 2.0 + s.t_f, 0.01), WithinRel(f_opt(s, s.t_f), 1e-12));
}

TEST_CASE("deficit estimate is 2H times the average RoCoF") {
    const FreqWindow w[] = {{0.0, -0.001}, {0.0, -0.003}};
    CHECK_THAT(estimate_power_deficit(w, 0.5, 4.0), WithinRel(2.0 * 4.0 * 0.004, 1e-14));
    std::vector<double> ramp;
    for (int i = 0; i <= 300; ++i) ramp.push_back(-0.0094 * i * 1e-3);
    CHECK_THAT(estimate_power_deficit(ramp, 1e-3, 4.0), WithinRel(8.0 * 0.0094, 1e-12));
    CHECK_THROWS(estimate_power_deficit(std::span<const FreqWindow>{}, 0.3, 4.0));
    CHECK_THROWS(estimate_power_deficit(w, 0.0, 4.0));
}

TEST_CASE("virtual inertia laws") {
    const VicGains g{9.6, 20.0};
    CHECK_THAT(vic_fixed_step(g, -0.002, -0.01), WithinRel(0.096 + 0.04, 1e-14));
    CHECK_THAT(vic_adaptive_step(g, 0.5, -0.002, -0.01), WithinRel(0.068, 1e-14));
    CHECK_THROWS(vic_adaptive_step(g, -0.1, 0.0, 0.0));
}

TEST_CASE("step inertial control holds, then hands over linearly") {
    const SicProfile prof{0.1, 10.0, 20.0};
    CHECK(sic_step(prof, 0.5, 0.45, -1.0) == 0.45);
    CHECK_THAT(sic_step(prof, 0.5, 0.45, 5.0), WithinRel(0.6, 1e-14));
    CHECK_THAT(sic_step(prof, 0.5, 0.45, 20.0), WithinRel(0.525, 1e-14));
    CHECK(sic_step(prof, 0.5, 0.45, 31.0) == 0.45);
}

// The model-based law places the pole exactly when the mirrored governor is
// the real one: the reduced loop is 2H f' = -(K_g / alpha) f - P_d.
TEST_CASE("model-based support with a perfect model yields the optimal trajectory") {
    const double alpha = 1.18, pd = 0.075, dt = 1e-3;
    const Governor gov(SimplifiedGovernor{5.0, 20.0});
    ModelBasedFfs mb({{gov, 1.0}}, kSingle, alpha);
    GovernorSim plant(gov);
    const TrajectorySpec s = make_spec(kSingle, pd, alpha);
    double f = 0.0, worst = 0.0;
    for (int k = 0; k < 30000; ++k) {
        const double pm = plant.output(f);
        const double pw = model_based_ffs_step(mb, f, dt);
        const double next = f + dt * (pm + pw - pd - kSingle.damping_df * f) / (2.0 * kSingle.inertia_h);
        plant.step(f, dt);
        f = next;
        worst = std::max(worst, std::abs(f - f_opt(s, (k + 1) * dt)));
    }
    CHECK(worst < 0.01 * std::abs(s.a_f));
}
