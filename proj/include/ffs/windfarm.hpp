#pragma once

// Aggregated wind-farm physics. A farm of identical turbines is one
// equivalent turbine; every per-unit quantity here is on the farm's own
// rating, and converts to the system base by farm_mw / base_mva.

#include <array>
#include <span>

namespace windffs {

struct TurbineParams {
    double rated_mw = 5.0;
    double rated_wind = 11.0;  // m/s, rated power reached here
    // Exponential aerodynamic-factor surface c1..c6 at pitch beta (deg).
    std::array<double, 6> cp_coeffs{0.5176, 116.0, 0.4, 5.0, 21.0, 0.0068};
    double beta = 0.0;
    double j_wt = 1993.285;       // kg m^2, referred to the generator side
    double nominal_rpm = 1484.153;
    double omega_min = 0.7;
    double omega_max = 1.2;
    double k_v = 0.121717;        // MPPT speed per unit wind speed, pu/(m/s)

    /// Inertia constant 0.5 J w_nom^2 / P_rated, in seconds.
    double h_wt() const;

    void validate() const;

    bool operator==(const TurbineParams&) const = default;
};

/// Calibrated aerodynamic and MPPT model of one turbine.
class TurbineModel {
public:
    explicit TurbineModel(const TurbineParams& params = {});

    const TurbineParams& params() const { return params_; }

    double cp(double lambda) const;
    double lambda_opt() const { return lambda_opt_; }
    double cp_max() const { return cp_max_; }
    double aero_scale() const { return aero_scale_; }
    double k_opt() const { return k_opt_; }

    /// Aerodynamic power, pu on turbine rating.
    double aero_power(double v_w, double omega) const;
    /// Optimal speed clamped to the speed limits.
    double mppt_speed(double v_w) const;
    /// k_opt omega^3.
    double mppt_power(double omega) const;

private:
    TurbineParams params_;
    double lambda_opt_ = 0.0;
    double cp_max_ = 0.0;
    double aero_scale_ = 0.0;
    double k_opt_ = 0.0;
};

enum class FarmMode { Mppt = 0, Ffs = 1, Exit = 2 };

struct WindFarmState {
    int n_wt = 1;
    double v_w = 9.0;
    double omega = 1.0;
    FarmMode mode = FarmMode::Mppt;
    double omega0 = 1.0;  // pre-disturbance operating point
    double p0 = 0.0;      // pre-disturbance power, farm pu
    double e_k0 = 0.0, e_kmin = 0.0, e_kmax = 0.0;  // pu s on farm rating
};

/// One equivalent turbine standing for n_wt identical machines.
class WindFarm {
public:
    WindFarm(int n_wt, double v_w, const TurbineParams& params = {});

    const TurbineModel& turbine() const { return model_; }
    int n_wt() const { return n_wt_; }
    double v_w() const { return v_w_; }
    double rated_mw() const { return n_wt_ * model_.params().rated_mw; }
    double h() const { return model_.params().h_wt(); }

    /// Equilibrium at the current wind speed.
    WindFarmState initial_state() const;

    double aero_power(double omega) const { return model_.aero_power(v_w_, omega); }

    /// Power-speed law followed outside FFS. Cubic MPPT map; for farms whose
    /// optimum is speed-clamped a steep ramp near omega_max holds the clamp.
    double tracking_power(double omega) const;

    /// d omega / dt for electrical output p_elec (farm pu).
    double omega_dot(double omega, double p_elec) const;

private:
    TurbineModel model_;
    int n_wt_;
    double v_w_;
    double omega0_;
    double p0_;
    bool clamped_;
    double knee_;
};

struct ShaftStepResult {
    WindFarmState state;
    bool below_min = false;
};

/// One RK4 step of the shaft with p_elec held.
ShaftStepResult shaft_step(const WindFarm& farm, WindFarmState state, double p_elec, double dt);

/// H omega^2 on the farm rating (pu s).
double kinetic_energy(const WindFarm& farm, const WindFarmState& state);

/// Releasable-energy fraction (E_k0 - E_min) / (E_max - E_min).
double adaptive_gain(const WindFarmState& state);

/// c for a pre-disturbance speed omega0 within [omega_min, omega_max].
double adaptive_gain(double omega0, double omega_min, double omega_max);

enum class ExitDecision { StayFfs, SwitchToMppt };

/// MPPT-intersection exit. Only meaningful once the support is past its peak.
ExitDecision exit_check(const WindFarm& farm, const WindFarmState& state, double p_cmd);

struct FarmSupport {
    double dp_pu;     // farm pu
    double rated_mw;
};

/// Sum of farm support powers on the system base.
double aggregate_support(std::span<const FarmSupport> farms, double base_mva);

}  // namespace windffs
