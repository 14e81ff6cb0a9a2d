#include <catch_amalgamated.hpp>

#include <cmath>

#include "ffs/rng.hpp"
#include "ffs/trajectory.hpp"

using namespace windffs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const SystemParams kSingle{4.0, 1.0, 20.0, 200.0, 50.0};
}

TEST_CASE("trajectory constants") {
    const TrajectorySpec s = make_spec(kSingle, 0.075, 1.18);
    CHECK_THAT(s.a_f, WithinRel(-1.18 * 0.075 / 21.0, 1e-14));
    CHECK_THAT(s.t_f, WithinRel(2.0 * 1.18 * 4.0 / 21.0, 1e-14));
    CHECK_FALSE(s.low_alpha());
    CHECK(make_spec(kSingle, 0.075, 1.05).low_alpha());
}

TEST_CASE("trajectory rejects a non-positive deficit or alpha below one") {
    CHECK_THROWS_AS(make_spec(kSingle, 0.0, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(make_spec(kSingle, 0.1, 0.99), std::invalid_argument);
}

TEST_CASE("trajectory starts at rest and saturates at A_f") {
    const TrajectorySpec s = make_spec(kSingle, 0.1, 1.5);
    CHECK(f_opt(s, 0.0) == 0.0);
    CHECK(f_opt(s, -1.0) == 0.0);
    CHECK_THAT(f_opt(s, 50.0 * s.t_f), WithinRel(s.a_f, 1e-15));
    CHECK_THAT(rocof_opt(s, 0.0), WithinRel(-s.pd / (2.0 * s.h), 1e-14));
}

// Property: the closed-form trajectory solves the reduced swing equation with
// the equivalent gain K_g / alpha, for random admissible parameters.
TEST_CASE("trajectory satisfies 2H f' + (K_g / alpha) f + P_d = 0") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        SystemParams p{rng.uniform(0.1, 20.0), rng.uniform(0.0, 15.0), 1.0 / rng.uniform(0.01, 1.0), 100.0, 50.0};
        const TrajectorySpec s = make_spec(p, rng.uniform(0.01, 0.5), rng.uniform(1.0, 5.0));
        for (int i = 0; i < 10000; i += 37) {
            const double t = 10.0 * s.t_f * i / 9999.0;
            const double lhs = 2.0 * p.inertia_h * rocof_opt(s, t) + p.kg() / s.alpha * f_opt(s, t) + s.pd;
            REQUIRE(std::abs(lhs) <= 1e-12 * s.pd);
        }
    }
}

// Property: on the trajectory, the time-independent reference RoCoF equals the
// time-dependent one.
TEST_CASE("reference RoCoF agrees with the trajectory RoCoF along the trajectory") {
    const TrajectorySpec s = make_spec(kSingle, 0.075, 1.18);
    for (double t : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0})
        CHECK_THAT(reference_rocof(s, f_opt(s, t)), WithinAbs(rocof_opt(s, t), 1e-15));
}

TEST_CASE("alpha for a nadir target inverts the nadir of the trajectory") {
    const double alpha = alpha_for_nadir(kSingle, 0.075, 0.2);
    CHECK_THAT(alpha, WithinRel(0.2 / (0.075 / 21.0 * 50.0), 1e-14));
    const TrajectorySpec s = make_spec(kSingle, 0.075, alpha);
    CHECK_THAT(s.a_f * 50.0, WithinRel(-0.2, 1e-13));
    CHECK_THROWS_AS(alpha_for_nadir(kSingle, 0.075, 0.1), std::invalid_argument);
}

TEST_CASE("trajectory description mentions the nadir in hertz") {
    const std::string d = describe(make_spec(kSingle, 0.075, 1.18), 50.0);
    CHECK(d.find("Hz") != std::string::npos);
}
