#pragma once

// Fast-frequency-support control laws. All inputs are per-unit frequency
// deviations; outputs are additional power on the system base unless a
// function says otherwise.

#include <cstdint>
#include <span>
#include <vector>

#include "ffs/core_model.hpp"
#include "ffs/governors.hpp"
#include "ffs/trajectory.hpp"

namespace windffs {

struct PiGains {
    double kp = 0.0;
    double ki = 0.0;

    /// kp > 0 and ki > 0 unless allow_zero (a farm scaled to abstain).
    void validate(bool allow_zero = false) const;

    bool operator==(const PiGains&) const = default;
};

/// K_P,i = c K_P0, K_I,i = c K_I0 with c in [0, 1].
PiGains scale_gains(const PiGains& base, double c);

/// PI law with a trapezoidal integrator.
class PiController {
public:
    explicit PiController(PiGains gains = {}) : gains_(gains) {}

    double step(double e, double dt);
    void reset();

    double integral() const { return integral_; }
    const PiGains& gains() const { return gains_; }

private:
    PiGains gains_;
    double integral_ = 0.0;
    double prev_e_ = 0.0;
    bool started_ = false;
};

/// Prototype tracking law: the reference is f_opt(t - t_activation).
class PiPrototype {
public:
    PiPrototype() = default;
    explicit PiPrototype(PiGains gains) : pi_(gains) {}

    void activate(const TrajectorySpec& spec, double t);
    bool active() const { return active_; }
    double step(double df_act, double t, double dt);

private:
    PiController pi_;
    TrajectorySpec spec_{};
    double t_act_ = 0.0;
    bool active_ = false;
};

double pi_prototype_step(PiPrototype& state, double df_act, double t, double dt);

/// Time-independent PI: the reference frequency integrates the reference
/// RoCoF driven by the measured deviation, starting from the measurement at
/// activation.
class TiPiController {
public:
    TiPiController() = default;
    explicit TiPiController(PiGains gains) : pi_(gains) {}

    void activate(const TrajectorySpec& spec, double df_now, double t);
    bool active() const { return active_; }

    /// Output is zero while inactive.
    double step(double df_act, double dt);

    double reference() const { return ref_; }
    double activation_time() const { return t_act_; }
    double pd_hat() const { return spec_.pd; }
    const TrajectorySpec& spec() const { return spec_; }

private:
    PiController pi_;
    TrajectorySpec spec_{};
    double ref_ = 0.0;
    double prev_df_ = 0.0;
    double t_act_ = 0.0;
    bool active_ = false;
    bool first_ = true;
};

double ti_pi_step(TiPiController& state, double df_act, double dt);

/// Mirrors an assumed governor set and adds the constant gain that places
/// the closed-loop pole at -K_g / (2 alpha H):
/// dP_WF = (-G_gov + D_f - K_g / alpha) df.
class ModelBasedFfs {
public:
    struct Unit {
        Governor gov;
        double weight;  // S_i / S_base
    };

    ModelBasedFfs() = default;
    ModelBasedFfs(std::vector<Unit> assumed, const SystemParams& params, double alpha);

    /// Output for df_act, then advances the mirrored governors over dt.
    double step(double df_act, double dt);

private:
    std::vector<Unit> units_;
    std::vector<GovernorSim> sims_;
    double k_w_ = 0.0;
};

double model_based_ffs_step(ModelBasedFfs& state, double df_act, double dt);

struct VicGains {
    double k_df = 0.0;  // farm pu per (pu/s)
    double k_pf = 20.0; // farm pu per pu
};

/// -k_df rocof - k_pf df, farm pu.
double vic_fixed_step(const VicGains& gains, double df, double rocof);
/// Fixed law scaled by the releasable-energy fraction c.
double vic_adaptive_step(const VicGains& gains, double c, double df, double rocof);

struct SicProfile {
    double dp0 = 0.1;        // farm pu
    double duration = 10.0;  // s
    double withdrawal = 20.0; // s, linear hand-over to the tracking law

    bool operator==(const SicProfile&) const = default;
};

/// Power command for step inertial control, farm pu.
/// `elapsed` counts from the trigger; `p_track` is the tracking law at the
/// present rotor speed.
double sic_step(const SicProfile& profile, double p0, double p_track, double elapsed);

/// Average initial RoCoF over the window, scaled by 2H. `freq` holds, for
/// each farm, the deviations at the window start and end.
struct FreqWindow {
    double f_start;
    double f_end;
};

double estimate_power_deficit(std::span<const FreqWindow> freq, double window_s, double inertia_h);

/// Convenience overload for a uniformly sampled record of one measurement
/// point; uses the first and last sample.
double estimate_power_deficit(std::span<const double> samples, double dt, double inertia_h);

}  // namespace windffs
