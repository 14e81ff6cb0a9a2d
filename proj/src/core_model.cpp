#include "ffs/core_model.hpp"

#include <cmath>
#include <sstream>

namespace windffs {

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "non-finite value for " << what << ": " << value;
        throw std::invalid_argument(os.str());
    }
}

void SystemParams::validate() const {
    require_finite(inertia_h, "inertia_h");
    require_finite(damping_df, "damping_df");
    require_finite(droop_inv_r, "droop_inv_r");
    require_finite(base_mva, "base_mva");
    require_finite(f_nom, "f_nom");
    if (inertia_h <= 0.0) throw std::invalid_argument("inertia_h must be positive");
    if (droop_inv_r <= 0.0) throw std::invalid_argument("droop_inv_r must be positive");
    if (damping_df < 0.0) throw std::invalid_argument("damping_df must be non-negative");
    if (base_mva <= 0.0) throw std::invalid_argument("base_mva must be positive");
    if (f_nom <= 0.0) throw std::invalid_argument("f_nom must be positive");
}

void Disturbance::validate() const {
    require_finite(magnitude_pd, "disturbance magnitude");
    require_finite(time, "disturbance time");
    if (kind == DisturbanceKind::LoadSurge && magnitude_pd <= 0.0)
        throw std::invalid_argument("disturbance magnitude must be positive");
    if (time < 0.0) throw std::invalid_argument("disturbance time must be non-negative");
    if (kind == DisturbanceKind::GeneratorTrip && generator < 0)
        throw std::invalid_argument("generator trip requires a generator index");
}

double steady_state_deviation(const SystemParams& params, double pd) {
    require_finite(pd, "pd");
    params.validate();
    if (pd < 0.0) throw std::invalid_argument("pd must be non-negative");
    if (pd == 0.0) return 0.0;
    return -pd / params.kg() * params.f_nom;
}

double pu_to_hz(const SystemParams& params, double df_pu) { return df_pu * params.f_nom; }
double hz_to_pu(const SystemParams& params, double df_hz) { return df_hz / params.f_nom; }

double swing_derivative(double df, double p_m, double p_e, const SystemParams& params) {
    return (p_m - p_e - params.damping_df * df) / (2.0 * params.inertia_h);
}

SwingState step_swing(SwingState state, double p_m, double p_e, const SystemParams& params,
                      double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!std::isfinite(state.df)) throw SimulationError("swing state is not finite");

    auto f = [&](double df) { return swing_derivative(df, p_m, p_e, params); };
    const double k1 = f(state.df);
    const double k2 = f(state.df + 0.5 * dt * k1);
    const double k3 = f(state.df + 0.5 * dt * k2);
    const double k4 = f(state.df + dt * k3);

    SwingState next;
    next.df = state.df + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.rocof = k1;
    if (!std::isfinite(next.df))
        throw SimulationError("swing integration produced a non-finite frequency deviation");
    return next;
}

void Rk4::resize(std::size_t n) {
    k1_.assign(n, 0.0);
    k2_.assign(n, 0.0);
    k3_.assign(n, 0.0);
    k4_.assign(n, 0.0);
    tmp_.assign(n, 0.0);
}

}  // namespace windffs
