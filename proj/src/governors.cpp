#include "ffs/governors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ffs/rng.hpp"

namespace windffs {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_nonneg(double v, const char* what) {
    require_finite(v, what);
    if (v < 0.0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

void require_pos(double v, const char* what) {
    require_finite(v, what);
    if (v <= 0.0) throw std::invalid_argument(std::string(what) + " must be positive");
}

// First-order lag output: algebraic when the time constant is zero.
double lag_out(double in, double state, double t) { return t > 0.0 ? state : in; }
double lag_der(double in, double state, double t) { return t > 0.0 ? (in - state) / t : 0.0; }

// Rate limit, then freeze at a position limit when pushing outward.
double servo_rate(double rate, double pos, double uc, double uo, double pmin, double pmax) {
    rate = std::clamp(rate, uc, uo);
    if (pos >= pmax && rate > 0.0) return 0.0;
    if (pos <= pmin && rate < 0.0) return 0.0;
    return rate;
}

// IEEEG1 state: [lead-lag, gv, x4, x5, x6, x7]
struct G1Stages {
    double s[4];
};

G1Stages g1_stages(const IeeeG1Params& p, std::span<const double> x) {
    G1Stages st{};
    st.s[0] = lag_out(x[1], x[2], p.t4);
    st.s[1] = lag_out(st.s[0], x[3], p.t5);
    st.s[2] = lag_out(st.s[1], x[4], p.t6);
    st.s[3] = lag_out(st.s[2], x[5], p.t7);
    return st;
}

double g1_relay(const IeeeG1Params& p, double df, std::span<const double> x) {
    if (p.t1 > 0.0) {
        const double r = p.t2 / p.t1;
        return p.k * (r * df + (1.0 - r) * x[0]);
    }
    return p.k * df;
}

double g1_gv0(const IeeeG1Params& p, double dispatch) { return dispatch / p.gain_sum(); }

// IEEEG3 state: [pilot, gv, transient filter, water column]
double g3_a(const IeeeG3Params& p) { return p.a11 * p.tw; }
double g3_b(const IeeeG3Params& p) { return (p.a11 - p.a13 * p.a21 / p.a23) * p.tw; }
double g3_gv0(const IeeeG3Params& p, double dispatch) { return dispatch / p.a23; }

double g3_error(const IeeeG3Params& p, double gv0, double df, std::span<const double> x) {
    const double sigma = 1.0 / p.inv_rp;
    const double transient = p.tr > 0.0 ? p.rr * (x[1] - x[2]) : 0.0;
    return sigma * gv0 - df - sigma * x[1] - transient;
}

double g3_power(const IeeeG3Params& p, std::span<const double> x) {
    const double a = g3_a(p);
    if (a <= 0.0) return p.a23 * x[1];
    const double r = g3_b(p) / a;
    return p.a23 * (r * x[1] + (1.0 - r) * x[3]);
}

}  // namespace

std::string model_name(const GovernorParams& params) {
    return std::visit(Overloaded{[](const SimplifiedGovernor&) { return std::string("simplified"); },
                                 [](const IeeeG1Params&) { return std::string("ieeeg1"); },
                                 [](const IeeeG3Params&) { return std::string("ieeeg3"); }},
                      params);
}

void validate(const GovernorParams& params) {
    std::visit(Overloaded{
                   [](const SimplifiedGovernor& p) {
                       require_nonneg(p.tg, "tg");
                       require_pos(p.inv_r, "inv_r");
                   },
                   [](const IeeeG1Params& p) {
                       require_pos(p.s_mva, "s_mva");
                       require_pos(p.h, "h");
                       require_pos(p.k, "k");
                       for (double v : {p.k1, p.k2, p.k3, p.k4, p.k5, p.k6, p.k7, p.k8})
                           require_nonneg(v, "turbine stage gain");
                       require_pos(p.gain_sum(), "sum of stage gains");
                       for (double v : {p.t1, p.t2, p.t4, p.t5, p.t6, p.t7})
                           require_nonneg(v, "time constant");
                       require_pos(p.t3, "t3");
                       require(p.t1 > 0.0 || p.t2 == 0.0, "t2 requires a positive t1");
                       require_finite(p.uo, "uo");
                       require_finite(p.uc, "uc");
                       require(p.uc < 0.0 && p.uo > 0.0, "rate limits must satisfy uc < 0 < uo");
                       require_finite(p.pmin, "pmin");
                       require_finite(p.pmax, "pmax");
                       require(p.pmin < p.pmax, "pmin must be below pmax");
                   },
                   [](const IeeeG3Params& p) {
                       require_pos(p.s_mva, "s_mva");
                       require_pos(p.h, "h");
                       require_pos(p.inv_rp, "inv_rp");
                       require_nonneg(p.rr, "rr");
                       require_pos(p.tg, "tg");
                       require_nonneg(p.tp, "tp");
                       require_nonneg(p.tr, "tr");
                       require_nonneg(p.tw, "tw");
                       require_pos(p.a11, "a11");
                       require_nonneg(p.a13, "a13");
                       require_nonneg(p.a21, "a21");
                       require_pos(p.a23, "a23");
                       require_finite(p.uo, "uo");
                       require_finite(p.uc, "uc");
                       require(p.uc < 0.0 && p.uo > 0.0, "rate limits must satisfy uc < 0 < uo");
                       require_finite(p.pmin, "pmin");
                       require_finite(p.pmax, "pmax");
                       require(p.pmin < p.pmax, "pmin must be below pmax");
                   }},
               params);
}

Governor::Governor(GovernorParams params, double dispatch_pu)
    : params_(std::move(params)), dispatch_(dispatch_pu) {
    validate(params_);
    require_finite(dispatch_, "dispatch");
    std::visit(Overloaded{[](const SimplifiedGovernor&) {},
                          [&](const IeeeG1Params& p) {
                              const double gv0 = g1_gv0(p, dispatch_);
                              require(gv0 >= p.pmin && gv0 <= p.pmax,
                                      "dispatch places the valve outside its limits");
                          },
                          [&](const IeeeG3Params& p) {
                              const double gv0 = g3_gv0(p, dispatch_);
                              require(gv0 >= p.pmin && gv0 <= p.pmax,
                                      "dispatch places the gate outside its limits");
                          }},
               params_);
}

double Governor::dc_gain() const {
    return std::visit(Overloaded{[](const SimplifiedGovernor& p) { return p.inv_r; },
                                 [](const IeeeG1Params& p) { return p.k * p.gain_sum(); },
                                 [](const IeeeG3Params& p) { return p.a23 * p.inv_rp; }},
                      params_);
}

std::size_t Governor::state_size() const {
    return std::visit(Overloaded{[](const SimplifiedGovernor&) -> std::size_t { return 1; },
                                 [](const IeeeG1Params&) -> std::size_t { return 6; },
                                 [](const IeeeG3Params&) -> std::size_t { return 4; }},
                      params_);
}

void Governor::initial_state(std::span<double> x) const {
    std::fill(x.begin(), x.end(), 0.0);
    std::visit(Overloaded{[](const SimplifiedGovernor&) {},
                          [&](const IeeeG1Params& p) {
                              const double gv0 = g1_gv0(p, dispatch_);
                              for (std::size_t i = 1; i < 6; ++i) x[i] = gv0;
                          },
                          [&](const IeeeG3Params& p) {
                              const double gv0 = g3_gv0(p, dispatch_);
                              x[1] = gv0;
                              x[2] = gv0;
                              x[3] = gv0;
                          }},
               params_);
}

double Governor::output(double df, std::span<const double> x) const {
    return std::visit(
        Overloaded{[&](const SimplifiedGovernor& p) { return p.tg > 0.0 ? x[0] : -p.inv_r * df; },
                   [&](const IeeeG1Params& p) {
                       const G1Stages st = g1_stages(p, x);
                       const double pm = (p.k1 + p.k2) * st.s[0] + (p.k3 + p.k4) * st.s[1] +
                                         (p.k5 + p.k6) * st.s[2] + (p.k7 + p.k8) * st.s[3];
                       return pm - dispatch_;
                   },
                   [&](const IeeeG3Params& p) { return g3_power(p, x) - dispatch_; }},
        params_);
}

void Governor::derivative(double df, std::span<const double> x, std::span<double> dx) const {
    std::visit(
        Overloaded{[&](const SimplifiedGovernor& p) {
                       dx[0] = p.tg > 0.0 ? (-p.inv_r * df - x[0]) / p.tg : 0.0;
                   },
                   [&](const IeeeG1Params& p) {
                       const double gv0 = g1_gv0(p, dispatch_);
                       dx[0] = p.t1 > 0.0 ? (df - x[0]) / p.t1 : 0.0;
                       const double y = g1_relay(p, df, x);
                       dx[1] = servo_rate((gv0 - y - x[1]) / p.t3, x[1], p.uc, p.uo, p.pmin,
                                          p.pmax);
                       const G1Stages st = g1_stages(p, x);
                       dx[2] = lag_der(x[1], x[2], p.t4);
                       dx[3] = lag_der(st.s[0], x[3], p.t5);
                       dx[4] = lag_der(st.s[1], x[4], p.t6);
                       dx[5] = lag_der(st.s[2], x[5], p.t7);
                   },
                   [&](const IeeeG3Params& p) {
                       const double gv0 = g3_gv0(p, dispatch_);
                       const double e = g3_error(p, gv0, df, x);
                       dx[0] = p.tp > 0.0 ? (e - x[0]) / p.tp : 0.0;
                       const double pilot = p.tp > 0.0 ? x[0] : e;
                       dx[1] = servo_rate(pilot / p.tg, x[1], p.uc, p.uo, p.pmin, p.pmax);
                       dx[2] = p.tr > 0.0 ? (x[1] - x[2]) / p.tr : 0.0;
                       const double a = g3_a(p);
                       dx[3] = a > 0.0 ? (x[1] - x[3]) / a : 0.0;
                   }},
        params_);
}

void Governor::project(std::span<double> x) const {
    std::visit(Overloaded{[](const SimplifiedGovernor&) {},
                          [&](const IeeeG1Params& p) { x[1] = std::clamp(x[1], p.pmin, p.pmax); },
                          [&](const IeeeG3Params& p) { x[1] = std::clamp(x[1], p.pmin, p.pmax); }},
               params_);
}

double Governor::valve_position(std::span<const double> x) const {
    return std::visit(Overloaded{[](const SimplifiedGovernor&) { return 0.0; },
                                 [&](const IeeeG1Params&) { return x[1]; },
                                 [&](const IeeeG3Params&) { return x[1]; }},
                      params_);
}

std::complex<double> Governor::freq_response(double omega) const {
    using C = std::complex<double>;
    const C s(0.0, omega);
    return std::visit(
        Overloaded{[&](const SimplifiedGovernor& p) -> C { return -p.inv_r / (1.0 + s * p.tg); },
                   [&](const IeeeG1Params& p) -> C {
                       const C relay = p.k * (1.0 + s * p.t2) / (1.0 + s * p.t1);
                       const C servo = 1.0 / (1.0 + s * p.t3);
                       const C l4 = 1.0 / (1.0 + s * p.t4);
                       const C l5 = l4 / (1.0 + s * p.t5);
                       const C l6 = l5 / (1.0 + s * p.t6);
                       const C l7 = l6 / (1.0 + s * p.t7);
                       const C turbine =
                           (p.k1 + p.k2) * l4 + (p.k3 + p.k4) * l5 + (p.k5 + p.k6) * l6 +
                           (p.k7 + p.k8) * l7;
                       return -relay * servo * turbine;
                   },
                   [&](const IeeeG3Params& p) -> C {
                       const double sigma = 1.0 / p.inv_rp;
                       const C turbine = p.a23 * (1.0 + s * g3_b(p)) / (1.0 + s * g3_a(p));
                       const C transient =
                           p.tr > 0.0 ? p.rr * s * p.tr / (1.0 + s * p.tr) : C(0.0);
                       const C loop = p.tg * s * (1.0 + s * p.tp) + sigma + transient;
                       return -turbine / loop;
                   }},
        params_);
}

GovernorSim::GovernorSim(Governor model)
    : model_(std::move(model)), state_(model_.state_size()), rk_(model_.state_size()) {
    model_.initial_state(state_);
}

double GovernorSim::step(double df, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    require_finite(df, "df");
    rk_.step([&](std::span<const double> x, std::span<double> dx) { model_.derivative(df, x, dx); },
             state_, dt);
    model_.project(state_);
    for (double v : state_)
        if (!std::isfinite(v)) throw SimulationError("governor state is not finite");
    return model_.output(df, state_);
}

double gov_step(GovernorSim& gov, double df, double dt) { return gov.step(df, dt); }

std::complex<double> gov_freq_response(const Governor& gov, double omega) {
    require_finite(omega, "omega");
    if (omega < 0.0) throw std::invalid_argument("omega must be non-negative");
    return gov.freq_response(omega);
}

Governor perturb_params(const Governor& gov, double error_level, std::uint64_t seed,
                        bool include_droop) {
    require_finite(error_level, "error_level");
    if (error_level < 0.0 || error_level >= 1.0)
        throw std::invalid_argument("error_level must lie in [0, 1)");
    Rng rng(seed);
    auto scale = [&](double& v) { v *= rng.uniform(1.0 - error_level, 1.0 + error_level); };
    GovernorParams p = gov.params();
    std::visit(Overloaded{[&](SimplifiedGovernor& q) {
                              scale(q.tg);
                              if (include_droop) scale(q.inv_r);
                          },
                          [&](IeeeG1Params& q) {
                              if (include_droop) scale(q.k);
                              for (double* v : {&q.k1, &q.k2, &q.k3, &q.k4, &q.k5, &q.k6, &q.k7,
                                                &q.k8, &q.t1, &q.t2, &q.t3, &q.t4, &q.t5, &q.t6,
                                                &q.t7})
                                  scale(*v);
                          },
                          [&](IeeeG3Params& q) {
                              if (include_droop) scale(q.inv_rp);
                              for (double* v : {&q.rr, &q.tg, &q.tp, &q.tr, &q.tw, &q.a11, &q.a13,
                                                &q.a21, &q.a23})
                                  scale(*v);
                          }},
               p);
    // Stage gains are renormalized so the dispatch point stays reachable.
    if (auto* q = std::get_if<IeeeG1Params>(&p)) {
        const double sum = q->gain_sum();
        const double ref = std::get<IeeeG1Params>(gov.params()).gain_sum();
        const double r = ref / sum;
        for (double* v : {&q->k1, &q->k2, &q->k3, &q->k4, &q->k5, &q->k6, &q->k7, &q->k8}) *v *= r;
    }
    return Governor(std::move(p), gov.dispatch());
}

}  // namespace windffs
