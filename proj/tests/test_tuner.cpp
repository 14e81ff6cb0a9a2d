#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ffs/rng.hpp"
#include "ffs/tuner.hpp"

using namespace windffs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const SystemParams kSingle{4.0, 1.0, 20.0, 200.0, 50.0};
const SystemParams kMulti{4.1289, 1.47, 17.0, 8300.0, 50.0};

// Direct O(N^2) DFT, single-sided amplitudes.
std::vector<double> naive_amplitudes(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> a(n / 2 + 1);
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * i % n) / double(n));
        const double m = std::abs(s) / double(n);
        a[k] = (k == 0 || (n % 2 == 0 && k == n / 2)) ? m : 2.0 * m;
    }
    return a;
}

}  // namespace

TEST_CASE("designed gains for the single-farm system") {
    const PiDesign d = design_pi_report(kSingle, 1.18);
    // 10 (21 / 1.18 - 1 - 20 / (1 + (0.15 * 20)^2)) and 9 * 0.15 * 20 / 2
    CHECK_THAT(d.gains.kp, WithinRel(10.0 * (21.0 / 1.18 - 1.0 - 2.0), 1e-14));
    CHECK_THAT(d.gains.kp, WithinAbs(147.966, 1e-3));
    CHECK_THAT(d.gains.ki, WithinRel(13.5, 1e-14));
    CHECK(d.binding == BindingArg::Tracking);
}

TEST_CASE("designed gains for the multi-farm system") {
    const PiGains g = design_pi(kMulti, 1.226);
    CHECK_THAT(g.kp, WithinRel(10.0 * (18.47 / 1.226 - 1.47 - 1.7), 1e-14));
    CHECK_THAT(g.kp, WithinRel(118.9, 0.02));
    CHECK_THAT(g.ki, WithinRel(11.475, 1e-14));
}

TEST_CASE("stability argument binds for large alpha") {
    const PiDesign d = design_pi_report(kSingle, 4.0);
    CHECK(d.binding == BindingArg::Stability);
    CHECK_THAT(d.gains.kp, WithinRel(10.0 * (21.0 - 21.0 / 4.0), 1e-14));
    CHECK_THROWS_AS(design_pi(kSingle, 0.9), std::invalid_argument);
}

TEST_CASE("h_term never exceeds its envelope over T_g") {
    Rng rng(3);
    for (int i = 0; i < 5000; ++i) {
        const double w = rng.uniform(1e-4, 2.0), tg = rng.uniform(0.0, 40.0), inv_r = rng.uniform(1.0, 100.0);
        REQUIRE(h_term(w, tg, inv_r) <= h1_term(w, inv_r) * (1.0 + 1e-12));
    }
    // Envelope is attained at omega T_g = 1.
    CHECK_THAT(h_term(0.5, 2.0, 20.0), WithinRel(h1_term(0.5, 20.0), 1e-14));
}

// Property: the real/imaginary decomposition and complex arithmetic agree.
TEST_CASE("G_R by decomposition equals G_R by complex arithmetic") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        SystemParams p{rng.uniform(0.1, 20.0), rng.uniform(0.0, 15.0), 1.0 / rng.uniform(0.01, 1.0), 100.0, 50.0};
        const double alpha = rng.uniform(1.0, 5.0), tg = rng.uniform(0.0, 20.0);
        const PiGains g = design_pi(p, alpha);
        const double w = rng.uniform(1e-3, 1.0);
        const double a = gr_magnitude(w, p, alpha, g, simplified_governor(p, tg));
        const double b = gr_magnitude_parts(w, p, alpha, g, tg);
        REQUIRE_THAT(a, WithinRel(b, 1e-10));
    }
}

TEST_CASE("G_R vanishes at zero frequency with integral action") {
    const PiGains g = design_pi(kSingle, 1.18);
    CHECK(gr_magnitude(0.0, kSingle, 1.18, g, simplified_governor(kSingle, 5.0)) == 0.0);
    CHECK_THROWS(gr_magnitude(-1.0, kSingle, 1.18, g, simplified_governor(kSingle, 5.0)));
}

TEST_CASE("amplitude spectrum matches a direct DFT") {
    Rng rng(5);
    for (std::size_t n : {64u, 255u, 512u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        const auto fast = amplitude_spectrum(x);
        const auto slow = naive_amplitudes(x);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t k = 0; k < fast.size(); ++k) REQUIRE_THAT(fast[k], WithinAbs(slow[k], 1e-12));
    }
}

TEST_CASE("spectral bound of a pure tone is its bin frequency") {
    const std::size_t n = 1024;
    const double dt = 0.1;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * std::numbers::pi * 10.0 * double(i) / double(n));
    const double bin = 2.0 * std::numbers::pi / (dt * double(n));
    CHECK_THAT(spectrum_upper_bound(x, dt, 1e-4), WithinRel(10.0 * bin, 1e-12));
    CHECK_THROWS(spectrum_upper_bound(x, 0.0, 1e-4));
    CHECK_THROWS(spectrum_upper_bound(x, dt, 1.5));
}

TEST_CASE("spectral bound of the trajectory on the configured record") {
    CHECK(spectrum_upper_bound(make_spec(kSingle, 0.075, 1.18), 1e-4) <= 0.15);
    // Frozen from an independent numpy rfft of the same 65536-point record.
    TrajectorySpec slow;
    slow.a_f = -0.01;
    slow.t_f = 100.0;
    CHECK_THAT(spectrum_upper_bound(slow, 1e-4), WithinRel(0.09788714902695247, 1e-9));
}

TEST_CASE("error indices on an exact trajectory are zero") {
    const TrajectorySpec s = make_spec(kSingle, 0.075, 1.18);
    std::vector<double> t, df;
    for (int i = 0; i <= 4000; ++i) {
        t.push_back(i * 0.01);
        df.push_back(f_opt(s, t.back()));
    }
    const ErrorIndices e = error_indices(t, df, s, 40.0);
    CHECK(e.e_max < 1e-12);
    CHECK_THAT(e.e_nadir, WithinAbs(0.0, 1e-3));
    std::vector<double> scaled(df);
    for (auto& v : scaled) v *= 1.1;
    CHECK_THAT(error_indices(t, scaled, s, 40.0).e_max, WithinRel(10.0, 1e-9));
}

// Oracle: the same closed loop advanced by a small-step RK4 in test code.
TEST_CASE("exact tracking loop agrees with a fine time-stepped simulation") {
    TrackingCase c{kSingle, 5.0, 0.075, 1.18};
    const PiGains g = design_pi(c.params, c.alpha);
    const ErrorIndices fast = simulate_tracking_lti(c, g);

    const TrajectorySpec s = make_spec(c.params, c.pd, c.alpha);
    const double h = c.params.inertia_h;
    auto rhs = [&](double t, const double* x, double* dx) {
        const double f = x[0], xg = x[1], integ = x[2];
        const double e = f_opt(s, t) - f;
        dx[0] = (xg - c.params.damping_df * f + g.kp * e + g.ki * integ - c.pd) / (2.0 * h);
        dx[1] = (-c.params.droop_inv_r * f - xg) / c.tg;
        dx[2] = e;
    };
    double x[3]{0, 0, 0}, k[4][3], y[3];
    const double dt = 1e-3;
    std::vector<double> ts{0.0}, fs{0.0};
    for (int n = 0; n < 200000; ++n) {
        const double t = n * dt;
        rhs(t, x, k[0]);
        for (int i = 0; i < 3; ++i) y[i] = x[i] + 0.5 * dt * k[0][i];
        rhs(t + 0.5 * dt, y, k[1]);
        for (int i = 0; i < 3; ++i) y[i] = x[i] + 0.5 * dt * k[1][i];
        rhs(t + 0.5 * dt, y, k[2]);
        for (int i = 0; i < 3; ++i) y[i] = x[i] + dt * k[2][i];
        rhs(t + dt, y, k[3]);
        for (int i = 0; i < 3; ++i) x[i] += dt / 6.0 * (k[0][i] + 2 * k[1][i] + 2 * k[2][i] + k[3][i]);
        ts.push_back(t + dt);
        fs.push_back(x[0]);
    }
    const ErrorIndices slow = error_indices(ts, fs, s, 200.0);
    CHECK_THAT(fast.e_nadir, WithinAbs(slow.e_nadir, 1e-3));
    CHECK_THAT(fast.e_max, WithinAbs(slow.e_max, 0.05));
}
