#include "ffs/tuner.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace windffs {

namespace {

struct FftwBuffer {
    double* in = nullptr;
    fftw_complex* out = nullptr;
    explicit FftwBuffer(std::size_t n)
        : in(fftw_alloc_real(n)), out(fftw_alloc_complex(n / 2 + 1)) {
        if (!in || !out) throw std::bad_alloc();
    }
    ~FftwBuffer() {
        fftw_free(in);
        fftw_free(out);
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// Planning is not thread-safe in FFTW; execution with new arrays is.
fftw_plan cached_plan(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(mu);
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    FftwBuffer scratch(n);
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), scratch.in, scratch.out, FFTW_ESTIMATE);
    if (!p) throw std::runtime_error("FFTW planning failed");
    plans.emplace(n, p);
    return p;
}

}  // namespace

double g_term(double omega, double tg, double inv_r) {
    const double x = omega * tg;
    return inv_r / (1.0 + x * x);
}

double h_term(double omega, double tg, double inv_r) {
    const double x = omega * tg;
    return omega * omega * tg * inv_r / (1.0 + x * x);
}

double h1_term(double omega, double inv_r) { return omega * inv_r / 2.0; }

const char* to_string(BindingArg arg) {
    switch (arg) {
        case BindingArg::Tracking: return "tracking";
        case BindingArg::Stability: return "stability";
        case BindingArg::Clamped: return "clamped";
    }
    return "?";
}

PiDesign design_pi_report(const SystemParams& params, double alpha, const TunerConstants& c) {
    params.validate();
    require_finite(alpha, "alpha");
    if (alpha < 1.0) throw std::invalid_argument("alpha must be at least 1");
    const double kg = params.kg();
    const double kg_star = kg / alpha;
    PiDesign d;
    d.kp_tracking =
        c.margin * (kg_star - params.damping_df - g_term(c.omega_up_max, c.tg_max, params.droop_inv_r));
    d.kp_stability = c.margin * (kg - kg_star);
    if (d.kp_tracking <= 0.0 && d.kp_stability <= 0.0) {
        d.binding = BindingArg::Clamped;
        d.gains.kp = 0.0;
    } else if (d.kp_tracking >= d.kp_stability) {
        d.binding = BindingArg::Tracking;
        d.gains.kp = d.kp_tracking;
    } else {
        d.binding = BindingArg::Stability;
        d.gains.kp = d.kp_stability;
    }
    d.gains.ki = std::max(0.0, (c.margin - 1.0) * h1_term(c.omega_up_max, params.droop_inv_r));
    return d;
}

PiGains design_pi(const SystemParams& params, double alpha, const TunerConstants& c) {
    return design_pi_report(params, alpha, c).gains;
}

GrParts gr_parts(double omega, const SystemParams& params, double alpha, const PiGains& gains,
                 double tg) {
    const double inv_r = params.droop_inv_r;
    const double g = g_term(omega, tg, inv_r);
    const double x = omega * tg;
    const double b = x * inv_r / (1.0 + x * x);
    GrParts p;
    p.a_num = params.kg() / alpha - params.damping_df - g;
    p.b_num = b;
    p.a_den = gains.kp + params.damping_df + g;
    p.b_den = 2.0 * params.inertia_h * omega - gains.ki / omega - b;
    return p;
}

double gr_magnitude_parts(double omega, const SystemParams& params, double alpha,
                          const PiGains& gains, double tg) {
    if (omega == 0.0 && gains.ki > 0.0) return 0.0;
    const GrParts p = gr_parts(omega, params, alpha, gains, tg);
    return std::hypot(p.a_num, p.b_num) / std::hypot(p.a_den, p.b_den);
}

namespace {

double residual(double omega, const SystemParams& params, double alpha, std::complex<double> g_pi,
                const Governor& gov) {
    const std::complex<double> s(0.0, omega);
    const std::complex<double> gg = gov.freq_response(omega);
    const std::complex<double> num = params.kg() / alpha - params.damping_df + gg;
    const std::complex<double> den = 2.0 * params.inertia_h * s + params.damping_df + g_pi - gg;
    return std::abs(num / den);
}

}  // namespace

double gr_magnitude(double omega, const SystemParams& params, double alpha, const PiGains& gains,
                    const Governor& gov) {
    if (omega < 0.0) throw std::invalid_argument("omega must be non-negative");
    if (omega == 0.0 && gains.ki > 0.0) return 0.0;
    const std::complex<double> s(0.0, omega);
    return residual(omega, params, alpha, gains.kp + gains.ki / s, gov);
}

double gr_star_magnitude(double omega, const SystemParams& params, double alpha,
                         const PiGains& gains, const Governor& gov) {
    if (omega < 0.0) throw std::invalid_argument("omega must be non-negative");
    if (omega == 0.0 && (gains.ki > 0.0 || gains.kp > 0.0)) return 0.0;
    const std::complex<double> s(0.0, omega);
    const double t_f = 2.0 * alpha * params.inertia_h / params.kg();
    const std::complex<double> g_pi = (1.0 + 1.0 / (t_f * s)) * (gains.kp + gains.ki / s);
    return residual(omega, params, alpha, g_pi, gov);
}

Governor simplified_governor(const SystemParams& params, double tg) {
    return Governor(SimplifiedGovernor{tg, params.droop_inv_r});
}

std::vector<double> amplitude_spectrum(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("need at least two samples");
    fftw_plan plan = cached_plan(n);
    FftwBuffer buf(n);
    std::copy(samples.begin(), samples.end(), buf.in);
    fftw_execute_dft_r2c(plan, buf.in, buf.out);
    std::vector<double> amp(n / 2 + 1);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < amp.size(); ++k) {
        const double m = std::hypot(buf.out[k][0], buf.out[k][1]) * scale;
        const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
        amp[k] = unpaired ? m : 2.0 * m;
    }
    return amp;
}

double spectrum_upper_bound(std::span<const double> samples, double dt, double epsilon) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const std::vector<double> amp = amplitude_spectrum(samples);
    double total = 0.0;
    for (double a : amp) total += a * a;
    if (!(total > 0.0)) throw std::invalid_argument("signal has no spectral energy");
    const double target = (1.0 - epsilon) * total;
    const double df = 2.0 * std::numbers::pi / (dt * static_cast<double>(samples.size()));
    double cum = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
        cum += amp[k] * amp[k];
        if (cum >= target) return df * static_cast<double>(k);
    }
    return df * static_cast<double>(amp.size() - 1);
}

double spectrum_upper_bound(const TrajectorySpec& spec, double epsilon, const SpectralConfig& cfg) {
    if (cfg.n < 4 || !(cfg.record_s > 0.0)) throw std::invalid_argument("bad spectral record");
    const double dt = cfg.record_s / static_cast<double>(cfg.n);
    std::vector<double> x(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) x[i] = f_opt(spec, dt * static_cast<double>(i));
    return spectrum_upper_bound(x, dt, epsilon);
}

ErrorIndices error_indices(std::span<const double> t, std::span<const double> df,
                           const TrajectorySpec& spec, double window_end) {
    if (t.size() != df.size()) throw std::invalid_argument("time and frequency lengths differ");
    ErrorIndices out;
    const double floor = 0.05 * std::abs(spec.a_f);
    double nadir = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.0) continue;
        nadir = std::min(nadir, df[i]);
        if (t[i] > window_end) continue;
        const double ref = f_opt(spec, t[i]);
        if (std::abs(ref) < floor) continue;
        any = true;
        const double e = std::abs(df[i] - ref) / std::abs(ref) * 100.0;
        if (e > out.e_max) {
            out.e_max = e;
            out.t_at_max = t[i];
        }
    }
    if (!any) throw std::invalid_argument("empty evaluation window");
    out.e_nadir = std::abs(nadir - spec.a_f) / std::abs(spec.a_f) * 100.0;
    return out;
}

ErrorIndices simulate_tracking_lti(const TrackingCase& c, const PiGains& gains) {
    const SystemParams& p = c.params;
    const TrajectorySpec spec = make_spec(p, c.pd, c.alpha);
    const bool lag = c.tg > 0.0;
    // state: f, [x_gov], integral of e, f_opt, 1
    const int n = lag ? 5 : 4;
    const int i_f = 0, i_x = 1, i_i = lag ? 2 : 1, i_o = lag ? 3 : 2, i_1 = lag ? 4 : 3;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    const double m = 1.0 / (2.0 * p.inertia_h);
    a(i_f, i_f) = -(p.damping_df + gains.kp) * m;
    a(i_f, i_o) = gains.kp * m;
    a(i_f, i_i) = gains.ki * m;
    a(i_f, i_1) = -c.pd * m;
    if (lag) {
        a(i_f, i_x) = m;
        a(i_x, i_f) = -p.droop_inv_r / c.tg;
        a(i_x, i_x) = -1.0 / c.tg;
    } else {
        a(i_f, i_f) -= p.droop_inv_r * m;
    }
    a(i_i, i_o) = 1.0;
    a(i_i, i_f) = -1.0;
    a(i_o, i_o) = -1.0 / spec.t_f;
    a(i_o, i_1) = spec.a_f / spec.t_f;

    const double t_end = std::max({200.0, 20.0 * spec.t_f, 10.0 * c.tg});
    double dt = spec.t_f / 100.0;
    Eigen::MatrixXd phi = (a * dt).exp();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x(i_1) = 1.0;

    std::vector<double> ts{0.0}, fs{0.0};
    double t = 0.0;
    while (t < t_end) {
        for (int k = 0; k < 200 && t < t_end; ++k) {
            x = phi * x;
            t += dt;
            ts.push_back(t);
            fs.push_back(x(i_f));
        }
        phi = phi * phi;
        dt *= 2.0;
    }
    for (double v : fs)
        if (!std::isfinite(v)) throw SimulationError("tracking closed loop diverged");
    return error_indices(ts, fs, spec, t_end);
}

}  // namespace windffs
