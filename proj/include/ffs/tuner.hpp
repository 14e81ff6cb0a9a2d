#pragma once

// Frequency-domain design of the tracking PI: spectral bandwidth of the
// optimal trajectory, residual transfer functions G_R and G_R*, the minimal
// gain rule, and tracking error indices.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ffs/controllers.hpp"
#include "ffs/core_model.hpp"
#include "ffs/governors.hpp"
#include "ffs/trajectory.hpp"

namespace windffs {

struct TunerConstants {
    double omega_up_max = 0.15;  // rad/s
    double tg_max = 20.0;        // s
    double epsilon = 1e-4;
    double margin = 10.0;
};

/// (1/R) / (1 + (omega T_g)^2)
double g_term(double omega, double tg, double inv_r);
/// omega^2 T_g / (R (1 + (omega T_g)^2)), the bound-relevant part of b_num.
double h_term(double omega, double tg, double inv_r);
/// Upper envelope of h_term over T_g: omega / (2R).
double h1_term(double omega, double inv_r);

enum class BindingArg { Tracking, Stability, Clamped };
const char* to_string(BindingArg arg);

struct PiDesign {
    PiGains gains;
    BindingArg binding = BindingArg::Tracking;
    double kp_tracking = 0.0;   // margin (K_g* - D_f - g(omega_up, T_g^max))
    double kp_stability = 0.0;  // margin (K_g - K_g*)
};

PiDesign design_pi_report(const SystemParams& params, double alpha, const TunerConstants& c = {});
PiGains design_pi(const SystemParams& params, double alpha, const TunerConstants& c = {});

/// Real and imaginary parts of G_R's numerator and denominator for the
/// simplified governor.
struct GrParts {
    double a_num, b_num, a_den, b_den;
};
GrParts gr_parts(double omega, const SystemParams& params, double alpha, const PiGains& gains,
                 double tg);

/// |G_R(j omega)| by complex arithmetic with any governor model. Returns 0
/// at omega = 0 when K_I > 0.
double gr_magnitude(double omega, const SystemParams& params, double alpha, const PiGains& gains,
                    const Governor& gov);
/// |G_R(j omega)| through the real/imaginary decomposition (simplified governor).
double gr_magnitude_parts(double omega, const SystemParams& params, double alpha,
                          const PiGains& gains, double tg);
/// |G_R*(j omega)|: G_PI replaced by (1 + 1 / (T_f s)) G_PI.
double gr_star_magnitude(double omega, const SystemParams& params, double alpha,
                         const PiGains& gains, const Governor& gov);

/// Simplified governor matching the system droop.
Governor simplified_governor(const SystemParams& params, double tg);

struct SpectralConfig {
    double record_s = 65536.0;
    std::size_t n = 65536;
};

/// Highest bin frequency (rad/s) needed to hold 1 - epsilon of the
/// single-sided amplitude energy of a sampled signal.
double spectrum_upper_bound(std::span<const double> samples, double dt, double epsilon);

/// Bound for the trajectory sampled on the configured record.
double spectrum_upper_bound(const TrajectorySpec& spec, double epsilon,
                            const SpectralConfig& cfg = {});

/// Single-sided amplitudes A_0..A_{N/2}.
std::vector<double> amplitude_spectrum(std::span<const double> samples);

struct ErrorIndices {
    double e_max = 0.0;    // %
    double e_nadir = 0.0;  // %
    double t_at_max = 0.0; // s after origin
};

/// `t` is measured from the trajectory origin. E_max is evaluated where
/// |f_opt| >= 5 % of |A_f| and t <= window_end; E_nadir over the whole record.
ErrorIndices error_indices(std::span<const double> t, std::span<const double> df,
                           const TrajectorySpec& spec, double window_end);

struct TrackingCase {
    SystemParams params;
    double tg = 0.0;
    double pd = 0.1;
    double alpha = 1.2;
};

/// Exact closed loop of the prototype PI, simplified governor and swing
/// equation, sampled on a geometric grid via matrix exponentials.
ErrorIndices simulate_tracking_lti(const TrackingCase& c, const PiGains& gains);

}  // namespace windffs
