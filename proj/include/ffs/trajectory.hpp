#pragma once

// Optimal frequency trajectory df(t) = A_f (1 - exp(-t / T_f)), its RoCoF,
// and the time-independent frequency/RoCoF form used at runtime.

#include <string>

#include "ffs/core_model.hpp"

namespace windffs {

struct TrajectorySpec {
    double a_f = 0.0;    // pu, negative for a deficit
    double t_f = 1.0;    // s
    double alpha = 1.0;  // nadir / steady-state ratio
    double pd = 0.0;     // pu on system base
    double h = 1.0;      // inertia the spec was built with
    double kg = 1.0;

    /// True when alpha lies below the recommended 1.1.
    bool low_alpha() const { return alpha < 1.1; }
};

/// Throws std::invalid_argument for pd <= 0 or alpha < 1.
TrajectorySpec make_spec(const SystemParams& params, double pd, double alpha);

double f_opt(const TrajectorySpec& spec, double t);
double rocof_opt(const TrajectorySpec& spec, double t);

/// -df_act / T_f - P_d / (2H).
double reference_rocof(const TrajectorySpec& spec, double df_act);

/// alpha placing the nadir at target_nadir_hz (magnitude) for a deficit pd.
double alpha_for_nadir(const SystemParams& params, double pd, double target_nadir_hz);

/// Human-readable summary: A_f, T_f, alpha, nadir in Hz.
std::string describe(const TrajectorySpec& spec, double f_nom);

}  // namespace windffs
