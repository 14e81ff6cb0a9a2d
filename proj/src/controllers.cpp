#include "ffs/controllers.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace windffs {

void PiGains::validate(bool allow_zero) const {
    require_finite(kp, "kp");
    require_finite(ki, "ki");
    if (allow_zero) {
        if (kp < 0.0 || ki < 0.0) throw std::invalid_argument("PI gains must be non-negative");
    } else if (!(kp > 0.0 && ki > 0.0)) {
        throw std::invalid_argument("PI gains must be positive");
    }
}

PiGains scale_gains(const PiGains& base, double c) {
    require_finite(c, "c");
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("gain scale must lie in [0, 1]");
    return {base.kp * c, base.ki * c};
}

double PiController::step(double e, double dt) {
    if (started_) integral_ += 0.5 * (e + prev_e_) * dt;
    started_ = true;
    prev_e_ = e;
    return gains_.kp * e + gains_.ki * integral_;
}

void PiController::reset() {
    integral_ = 0.0;
    prev_e_ = 0.0;
    started_ = false;
}

void PiPrototype::activate(const TrajectorySpec& spec, double t0) {
    spec_ = spec;
    t_act_ = t0;
    active_ = true;
    pi_.reset();
}

double PiPrototype::step(double df_act, double t, double dt) {
    if (!active_) return 0.0;
    return pi_.step(f_opt(spec_, t - t_act_) - df_act, dt);
}

double pi_prototype_step(PiPrototype& state, double df_act, double t, double dt) {
    return state.step(df_act, t, dt);
}

void TiPiController::activate(const TrajectorySpec& spec, double df_now, double t) {
    spec_ = spec;
    ref_ = df_now;
    prev_df_ = df_now;
    t_act_ = t;
    active_ = true;
    first_ = true;
    pi_.reset();
}

double TiPiController::step(double df_act, double dt) {
    if (!active_) return 0.0;
    if (first_) {
        first_ = false;
    } else {
        ref_ += 0.5 * dt * (reference_rocof(spec_, prev_df_) + reference_rocof(spec_, df_act));
    }
    prev_df_ = df_act;
    return pi_.step(ref_ - df_act, dt);
}

double ti_pi_step(TiPiController& state, double df_act, double dt) {
    return state.step(df_act, dt);
}

ModelBasedFfs::ModelBasedFfs(std::vector<Unit> assumed, const SystemParams& params, double alpha)
    : units_(std::move(assumed)) {
    params.validate();
    if (alpha < 1.0) throw std::invalid_argument("alpha must be at least 1");
    k_w_ = params.damping_df - params.kg() / alpha;
    sims_.reserve(units_.size());
    for (const auto& u : units_) sims_.emplace_back(u.gov);
}

double ModelBasedFfs::step(double df_act, double dt) {
    double out = k_w_ * df_act;
    for (std::size_t i = 0; i < sims_.size(); ++i) out -= units_[i].weight * sims_[i].output(df_act);
    for (auto& s : sims_) s.step(df_act, dt);
    return out;
}

double model_based_ffs_step(ModelBasedFfs& state, double df_act, double dt) {
    return state.step(df_act, dt);
}

double vic_fixed_step(const VicGains& gains, double df, double rocof) {
    return -gains.k_df * rocof - gains.k_pf * df;
}

double vic_adaptive_step(const VicGains& gains, double c, double df, double rocof) {
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("gain scale must lie in [0, 1]");
    return c * vic_fixed_step(gains, df, rocof);
}

double sic_step(const SicProfile& profile, double p0, double p_track, double elapsed) {
    if (elapsed < 0.0) return p_track;
    const double hold = p0 + profile.dp0;
    if (elapsed < profile.duration) return hold;
    if (profile.withdrawal > 0.0 && elapsed < profile.duration + profile.withdrawal) {
        const double r = (elapsed - profile.duration) / profile.withdrawal;
        return (1.0 - r) * hold + r * p_track;
    }
    return p_track;
}

double estimate_power_deficit(std::span<const FreqWindow> freq, double window_s, double inertia_h) {
    if (freq.empty()) throw std::invalid_argument("no measurement points");
    if (!(window_s > 0.0)) throw std::invalid_argument("window must be positive");
    double sum = 0.0;
    for (const auto& w : freq) sum += (w.f_end - w.f_start) / window_s;
    return -2.0 * inertia_h / static_cast<double>(freq.size()) * sum;
}

double estimate_power_deficit(std::span<const double> samples, double dt, double inertia_h) {
    if (samples.size() < 2) throw std::invalid_argument("need at least two samples");
    const FreqWindow w{samples.front(), samples.back()};
    return estimate_power_deficit(std::span<const FreqWindow>(&w, 1),
                                  dt * static_cast<double>(samples.size() - 1), inertia_h);
}

}  // namespace windffs
