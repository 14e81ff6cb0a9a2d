#pragma once

// Aggregated swing-equation frequency dynamics on a single system base.
//
// All powers are per-unit on the system base (sum of synchronous-generator
// MVA ratings). Frequency deviations are carried in per-unit internally and
// converted to hertz only for reporting.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace windffs {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemParams {
    double inertia_h = 4.0;     // s, on system base
    double damping_df = 1.0;    // pu/pu
    double droop_inv_r = 20.0;  // pu/pu
    double base_mva = 200.0;
    double f_nom = 50.0;        // Hz

    /// Composite primary-regulation gain D_f + 1/R.
    double kg() const { return damping_df + droop_inv_r; }

    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

enum class DisturbanceKind { LoadSurge, GeneratorTrip };

struct Disturbance {
    DisturbanceKind kind = DisturbanceKind::LoadSurge;
    double magnitude_pd = 0.0;  // pu on system base
    double time = 0.0;          // s
    int generator = -1;         // index into the governor list for trips

    void validate() const;

    bool operator==(const Disturbance&) const = default;
};

/// Steady-state excursion of primary regulation, in Hz.
double steady_state_deviation(const SystemParams& params, double pd);

double pu_to_hz(const SystemParams& params, double df_pu);
double hz_to_pu(const SystemParams& params, double df_hz);

struct SwingState {
    double df = 0.0;     // pu
    double rocof = 0.0;  // pu/s, derivative evaluated at the start of the last step
};

/// Right-hand side of 2H d(df)/dt = p_m - p_e - D_f df.
double swing_derivative(double df, double p_m, double p_e, const SystemParams& params);

/// One classical RK4 step of the swing equation with p_m and p_e held.
SwingState step_swing(SwingState state, double p_m, double p_e, const SystemParams& params,
                      double dt);

/// Classical fourth-order Runge-Kutta over a flat state vector.
///
/// `rhs(x, dx)` must fill dx with the time derivative at x. The workspace
/// avoids allocations in the hot loop.
class Rk4 {
public:
    explicit Rk4(std::size_t n = 0) { resize(n); }

    void resize(std::size_t n);

    template <class Rhs>
    void step(Rhs&& rhs, std::span<double> x, double dt) {
        const std::size_t n = x.size();
        rhs(std::span<const double>(x), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
        rhs(std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
        rhs(std::span<const double>(tmp_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
        rhs(std::span<const double>(tmp_), std::span<double>(k4_));
        for (std::size_t i = 0; i < n; ++i)
            x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    /// Derivative evaluated at the start of the last step.
    std::span<const double> initial_slope() const { return k1_; }

private:
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

void require_finite(double value, const char* what);

}  // namespace windffs
