#pragma once

// Mechanical-power response of synchronous generation.
//
// Three models are provided: a first-order droop lag, the IEEEG1 steam
// governor/turbine and the IEEEG1 hydro counterpart IEEEG3. Each model works
// on deviations from a dispatch point so that the position limits
// [P_min, P_max] apply to the absolute valve/gate position. Outputs are in
// per-unit on the machine's own rating.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ffs/core_model.hpp"

namespace windffs {

/// G(s) = -(1/R) / (1 + s T_g).
struct SimplifiedGovernor {
    double tg = 0.0;
    double inv_r = 20.0;

    bool operator==(const SimplifiedGovernor&) const = default;
};

/// IEEEG1 with the lead-lag speed relay, rate-limited valve servo and four
/// cascaded turbine stages. K2..K8 even gains feed the low-pressure shaft; in
/// a single-shaft unit both shafts are summed.
struct IeeeG1Params {
    double s_mva = 200.0;
    double h = 4.0;
    double k = 20.0;  // 1/R
    double k1 = 0.3, k2 = 0.0, k3 = 0.15, k4 = 0.0, k5 = 0.3, k6 = 0.0, k7 = 0.25, k8 = 0.0;
    double t1 = 0.2, t2 = 0.0, t3 = 0.1, t4 = 0.25, t5 = 3.0, t6 = 3.5, t7 = 0.25;
    double uo = 0.3, uc = -0.3;
    double pmin = 0.0, pmax = 1.0;

    double gain_sum() const { return k1 + k2 + k3 + k4 + k5 + k6 + k7 + k8; }

    bool operator==(const IeeeG1Params&) const = default;
};

/// IEEEG3: pilot valve and gate servo with permanent and transient droop
/// feedback, followed by the nonelastic water-column turbine
/// a23 (1 + (a11 - a13 a21 / a23) T_w s) / (1 + a11 T_w s).
struct IeeeG3Params {
    double s_mva = 200.0;
    double h = 4.0;
    double inv_rp = 20.0;  // 1 / permanent droop
    double rr = 0.2;       // transient droop
    double tg = 0.05;
    double tp = 0.04;
    double tr = 3.0;
    double tw = 0.75;
    double a11 = 0.5, a13 = 1.0, a21 = 1.5, a23 = 1.0;
    double uo = 0.3, uc = -0.3;
    double pmin = 0.0, pmax = 1.0;

    bool operator==(const IeeeG3Params&) const = default;
};

using GovernorParams = std::variant<SimplifiedGovernor, IeeeG1Params, IeeeG3Params>;

std::string model_name(const GovernorParams& params);

/// Throws std::invalid_argument on any invariant violation.
void validate(const GovernorParams& params);

/// A governor model bound to its dispatch point. Stateless: the dynamic
/// state lives in caller-owned spans so that many units can share one
/// integrator.
class Governor {
public:
    Governor() : Governor(SimplifiedGovernor{}) {}
    explicit Governor(GovernorParams params, double dispatch_pu = 0.5);

    const GovernorParams& params() const { return params_; }
    double dispatch() const { return dispatch_; }
    std::string name() const { return model_name(params_); }

    /// Steady-state droop gain 1/R seen at the output, on own base.
    double dc_gain() const;

    std::size_t state_size() const;
    void initial_state(std::span<double> x) const;

    /// Mechanical power deviation (own base) for input df (pu).
    double output(double df, std::span<const double> x) const;
    void derivative(double df, std::span<const double> x, std::span<double> dx) const;
    /// Enforce position limits after an integration step.
    void project(std::span<double> x) const;

    /// Valve / gate position, absolute pu. Zero-deviation for the simplified model.
    double valve_position(std::span<const double> x) const;

    /// Linearized G_gov(j omega), limiters ignored.
    std::complex<double> freq_response(double omega) const;

    bool operator==(const Governor&) const = default;

private:
    GovernorParams params_;
    double dispatch_ = 0.5;
};

/// A governor with its own state, advanced with df held over each step.
class GovernorSim {
public:
    explicit GovernorSim(Governor model);

    /// Advances one step and returns the mechanical power deviation at the
    /// end of the step.
    double step(double df, double dt);

    double output(double df) const { return model_.output(df, state_); }
    std::span<const double> state() const { return state_; }
    const Governor& model() const { return model_; }

private:
    Governor model_;
    std::vector<double> state_;
    Rk4 rk_;
};

double gov_step(GovernorSim& gov, double df, double dt);

std::complex<double> gov_freq_response(const Governor& gov, double omega);

/// Multiplies every continuous dynamic parameter by an independent factor
/// uniform in [1 - level, 1 + level]. Limits, ratings and inertia are kept.
Governor perturb_params(const Governor& gov, double error_level, std::uint64_t seed,
                        bool include_droop = true);

}  // namespace windffs
