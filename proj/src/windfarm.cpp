#include "ffs/windfarm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ffs/core_model.hpp"

namespace windffs {

namespace {

constexpr double kKneeWidth = 0.05;

double golden_max(auto&& f, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double TurbineParams::h_wt() const {
    const double w = nominal_rpm * 2.0 * std::numbers::pi / 60.0;
    return 0.5 * j_wt * w * w / (rated_mw * 1e6);
}

void TurbineParams::validate() const {
    for (double v : {rated_mw, rated_wind, j_wt, nominal_rpm, omega_min, omega_max, k_v}) {
        require_finite(v, "turbine parameter");
        if (v <= 0.0) throw std::invalid_argument("turbine parameters must be positive");
    }
    for (double c : cp_coeffs) require_finite(c, "cp coefficient");
    require_finite(beta, "beta");
    if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
    if (!(omega_min < omega_max)) throw std::invalid_argument("omega_min must be below omega_max");
}

TurbineModel::TurbineModel(const TurbineParams& params) : params_(params) {
    params_.validate();
    lambda_opt_ = golden_max([this](double l) { return cp(l); }, 1.0, 20.0);
    cp_max_ = cp(lambda_opt_);
    if (!(cp_max_ > 0.0)) throw std::invalid_argument("aerodynamic surface has no positive maximum");
    const double v = params_.rated_wind;
    const double w = mppt_speed(v);
    aero_scale_ = 1.0 / (v * v * v * cp(lambda_opt_ * w / (params_.k_v * v)));
    k_opt_ = aero_scale_ * cp_max_ / (params_.k_v * params_.k_v * params_.k_v);
}

double TurbineModel::cp(double lambda) const {
    if (!(lambda > 0.0)) return 0.0;
    const auto& c = params_.cp_coeffs;
    const double b = params_.beta;
    const double inv_li = 1.0 / (lambda + 0.08 * b) - 0.035 / (b * b * b + 1.0);
    const double value = c[0] * (c[1] * inv_li - c[2] * b - c[3]) * std::exp(-c[4] * inv_li) +
                         c[5] * lambda;
    return value > 0.0 ? value : 0.0;
}

double TurbineModel::aero_power(double v_w, double omega) const {
    if (v_w < 0.0) throw std::invalid_argument("wind speed must be non-negative");
    if (v_w == 0.0) return 0.0;
    if (!(omega > 0.0)) throw std::invalid_argument("rotor speed must be positive");
    const double lambda = lambda_opt_ * omega / (params_.k_v * v_w);
    return aero_scale_ * v_w * v_w * v_w * cp(lambda);
}

double TurbineModel::mppt_speed(double v_w) const {
    if (!(v_w > 0.0)) throw std::invalid_argument("wind speed must be positive");
    return std::clamp(params_.k_v * v_w, params_.omega_min, params_.omega_max);
}

double TurbineModel::mppt_power(double omega) const { return k_opt_ * omega * omega * omega; }

WindFarm::WindFarm(int n_wt, double v_w, const TurbineParams& params)
    : model_(params), n_wt_(n_wt), v_w_(v_w) {
    if (n_wt < 1) throw std::invalid_argument("n_wt must be at least 1");
    require_finite(v_w, "v_w");
    if (!(v_w > 0.0)) throw std::invalid_argument("wind speed must be positive");
    const auto& p = model_.params();
    omega0_ = model_.mppt_speed(v_w);
    clamped_ = p.k_v * v_w > p.omega_max;
    knee_ = p.omega_max - kKneeWidth;
    p0_ = clamped_ ? model_.aero_power(v_w, omega0_) : model_.mppt_power(omega0_);
    if (clamped_ && !(p0_ > model_.mppt_power(knee_)))
        throw std::invalid_argument("speed-clamped operating point below the MPPT knee");
}

WindFarmState WindFarm::initial_state() const {
    const auto& p = model_.params();
    WindFarmState s;
    s.n_wt = n_wt_;
    s.v_w = v_w_;
    s.omega = omega0_;
    s.omega0 = omega0_;
    s.p0 = p0_;
    s.mode = FarmMode::Mppt;
    s.e_k0 = h() * omega0_ * omega0_;
    s.e_kmin = h() * p.omega_min * p.omega_min;
    s.e_kmax = h() * p.omega_max * p.omega_max;
    return s;
}

double WindFarm::tracking_power(double omega) const {
    if (!clamped_ || omega <= knee_) return model_.mppt_power(omega);
    const double pk = model_.mppt_power(knee_);
    return pk + (p0_ - pk) * (omega - knee_) / (model_.params().omega_max - knee_);
}

double WindFarm::omega_dot(double omega, double p_elec) const {
    if (!(omega > 1e-6)) throw SimulationError("rotor speed collapsed to zero");
    return (aero_power(omega) - p_elec) / (2.0 * h() * omega);
}

ShaftStepResult shaft_step(const WindFarm& farm, WindFarmState state, double p_elec, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(state.omega > 0.0)) throw std::invalid_argument("rotor speed must be positive");
    auto f = [&](double w) { return farm.omega_dot(w, p_elec); };
    const double w = state.omega;
    const double k1 = f(w);
    const double k2 = f(w + 0.5 * dt * k1);
    const double k3 = f(w + 0.5 * dt * k2);
    const double k4 = f(w + dt * k3);
    state.omega = w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(state.omega)) throw SimulationError("rotor speed is not finite");
    return {state, state.omega <= farm.turbine().params().omega_min};
}

double kinetic_energy(const WindFarm& farm, const WindFarmState& state) {
    return farm.h() * state.omega * state.omega;
}

double adaptive_gain(const WindFarmState& state) {
    const double span = state.e_kmax - state.e_kmin;
    if (!(span > 0.0)) throw std::invalid_argument("degenerate kinetic-energy range");
    return std::clamp((state.e_k0 - state.e_kmin) / span, 0.0, 1.0);
}

double adaptive_gain(double omega0, double omega_min, double omega_max) {
    const double span = omega_max * omega_max - omega_min * omega_min;
    if (!(span > 0.0)) throw std::invalid_argument("degenerate kinetic-energy range");
    return std::clamp((omega0 * omega0 - omega_min * omega_min) / span, 0.0, 1.0);
}

ExitDecision exit_check(const WindFarm& farm, const WindFarmState& state, double p_cmd) {
    if (state.omega < state.omega0 && p_cmd <= farm.tracking_power(state.omega))
        return ExitDecision::SwitchToMppt;
    return ExitDecision::StayFfs;
}

double aggregate_support(std::span<const FarmSupport> farms, double base_mva) {
    if (!(base_mva > 0.0)) throw std::invalid_argument("base_mva must be positive");
    double total = 0.0;
    for (const auto& f : farms) {
        if (!(f.rated_mw > 0.0)) throw std::invalid_argument("farm rating must be positive");
        total += f.dp_pu * f.rated_mw / base_mva;
    }
    return total;
}

}  // namespace windffs
