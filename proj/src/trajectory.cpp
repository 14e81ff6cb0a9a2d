#include "ffs/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace windffs {

TrajectorySpec make_spec(const SystemParams& params, double pd, double alpha) {
    params.validate();
    require_finite(pd, "pd");
    require_finite(alpha, "alpha");
    if (!(pd > 0.0)) throw std::invalid_argument("pd must be positive");
    if (alpha < 1.0) throw std::invalid_argument("alpha must be at least 1");
    TrajectorySpec s;
    s.kg = params.kg();
    s.h = params.inertia_h;
    s.alpha = alpha;
    s.pd = pd;
    s.a_f = -alpha * pd / s.kg;
    s.t_f = 2.0 * alpha * s.h / s.kg;
    return s;
}

double f_opt(const TrajectorySpec& spec, double t) {
    if (t <= 0.0) return 0.0;
    return spec.a_f * -std::expm1(-t / spec.t_f);
}

double rocof_opt(const TrajectorySpec& spec, double t) {
    if (t < 0.0) return 0.0;
    return spec.a_f / spec.t_f * std::exp(-t / spec.t_f);
}

double reference_rocof(const TrajectorySpec& spec, double df_act) {
    return -df_act / spec.t_f - spec.pd / (2.0 * spec.h);
}

double alpha_for_nadir(const SystemParams& params, double pd, double target_nadir_hz) {
    require_finite(target_nadir_hz, "target nadir");
    const double ss = std::abs(steady_state_deviation(params, pd));
    if (!(ss > 0.0)) throw std::invalid_argument("pd must be positive");
    const double alpha = std::abs(target_nadir_hz) / ss;
    if (alpha < 1.0)
        throw std::invalid_argument("target nadir lies inside the steady-state excursion");
    return alpha;
}

std::string describe(const TrajectorySpec& spec, double f_nom) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "A_f=%.6f pu  T_f=%.6f s  alpha=%.4f  nadir=%.4f Hz%s", spec.a_f,
                  spec.t_f, spec.alpha, spec.a_f * f_nom,
                  spec.low_alpha() ? "  (alpha below 1.1)" : "");
    return buf;
}

}  // namespace windffs
