#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "ffs/core_model.hpp"

using namespace windffs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("composite regulation gain adds damping and droop") {
    SystemParams p;
    p.damping_df = 1.47;
    p.droop_inv_r = 17.0;
    CHECK_THAT(p.kg(), WithinRel(18.47, 1e-15));
}

TEST_CASE("steady-state excursion is -pd / K_g in hertz") {
    SystemParams p{4.0, 1.0, 20.0, 200.0, 50.0};
    CHECK_THAT(steady_state_deviation(p, 0.075), WithinRel(-0.075 / 21.0 * 50.0, 1e-14));
    CHECK(steady_state_deviation(p, 0.0) == 0.0);
    CHECK_THROWS_AS(steady_state_deviation(p, -0.1), std::invalid_argument);
    CHECK_THROWS(steady_state_deviation(p, std::nan("")));
}

TEST_CASE("pu and hertz conversions are inverse") {
    SystemParams p;
    p.f_nom = 60.0;
    for (double hz : {-1.3, -0.2, 0.0, 0.45}) CHECK_THAT(pu_to_hz(p, hz_to_pu(p, hz)), WithinAbs(hz, 1e-15));
    CHECK_THAT(pu_to_hz(p, -0.01), WithinRel(-0.6, 1e-15));
}

TEST_CASE("invalid system parameters are rejected") {
    SystemParams p;
    p.inertia_h = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.damping_df = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.base_mva = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    Disturbance d;
    d.magnitude_pd = -0.1;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

// Held inputs make the swing equation linear first order; its exact solution
// is the oracle for the integrator.
TEST_CASE("swing step follows the exact first-order response") {
    SystemParams p{4.0, 1.5, 20.0, 200.0, 50.0};
    const double pd = 0.075, dt = 0.01;
    SwingState s;
    double t = 0.0;
    for (int k = 0; k < 2000; ++k) {
        s = step_swing(s, 0.0, pd, p, dt);
        t += dt;
    }
    const double tau = 2.0 * p.inertia_h / p.damping_df;
    const double exact = -pd / p.damping_df * -std::expm1(-t / tau);
    CHECK_THAT(s.df, WithinRel(exact, 1e-9));
}

TEST_CASE("generic RK4 integrates a harmonic oscillator to fourth order") {
    auto err = [](double dt) {
        Rk4 rk(2);
        std::vector<double> x{1.0, 0.0};
        const int n = static_cast<int>(std::lround(1.0 / dt));
        for (int k = 0; k < n; ++k)
            rk.step([](std::span<const double> y, std::span<double> dy) {
                dy[0] = y[1];
                dy[1] = -y[0];
            }, x, dt);
        return std::abs(x[0] - std::cos(1.0));
    };
    const double ratio = err(0.02) / err(0.01);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("non-finite values are reported") {
    CHECK_THROWS(require_finite(std::numeric_limits<double>::infinity(), "x"));
    CHECK_NOTHROW(require_finite(1.0, "x"));
}
