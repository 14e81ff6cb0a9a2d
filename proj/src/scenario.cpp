#include "ffs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ffs/csv.hpp"
#include "ffs/rng.hpp"
#include "ffs/tuner.hpp"

namespace windffs {

namespace {

constexpr double kOverspeedMargin = 1e-3;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::None: return "none";
        case ControllerKind::ProposedTiPi: return "proposed_ti_pi";
        case ControllerKind::PiPrototype: return "pi_prototype";
        case ControllerKind::ModelBased: return "model_based";
        case ControllerKind::VicFixed: return "vic_fixed";
        case ControllerKind::VicAdaptive: return "vic_adaptive";
        case ControllerKind::Sic: return "sic";
    }
    return "?";
}

const char* to_string(GainMode mode) { return mode == GainMode::Fixed ? "fixed" : "adaptive"; }

ControllerKind controller_from_string(const std::string& name) {
    for (auto k : {ControllerKind::None, ControllerKind::ProposedTiPi, ControllerKind::PiPrototype,
                   ControllerKind::ModelBased, ControllerKind::VicFixed, ControllerKind::VicAdaptive,
                   ControllerKind::Sic})
        if (name == to_string(k)) return k;
    fail("unknown controller '" + name + "'");
}

GainMode gain_mode_from_string(const std::string& name) {
    if (name == "fixed") return GainMode::Fixed;
    if (name == "adaptive") return GainMode::Adaptive;
    fail("unknown gain mode '" + name + "'");
}

GeneratorUnit make_unit(const Governor& gov, double s_mva, double h) {
    GeneratorUnit u{gov, s_mva, h};
    if (const auto* p = std::get_if<IeeeG1Params>(&gov.params())) {
        u.s_mva = p->s_mva;
        u.h = p->h;
    } else if (const auto* q = std::get_if<IeeeG3Params>(&gov.params())) {
        u.s_mva = q->s_mva;
        u.h = q->h;
    }
    return u;
}

void Scenario::validate() const {
    system.validate();
    if (generators.empty()) fail("at least one generator is required");
    double sum_mva = 0.0;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const auto& g = generators[i];
        windffs::validate(g.governor.params());
        if (!(g.s_mva > 0.0) || !std::isfinite(g.s_mva))
            fail("generators[" + std::to_string(i) + "].s_mva must be positive");
        if (!(g.h > 0.0) || !std::isfinite(g.h))
            fail("generators[" + std::to_string(i) + "].h must be positive");
        sum_mva += g.s_mva;
    }
    if (std::abs(sum_mva - system.base_mva) > 1e-6 * system.base_mva)
        fail("system.base_mva must equal the sum of generator ratings");
    for (std::size_t i = 0; i < farms.size(); ++i) {
        const auto& f = farms[i];
        f.turbine.validate();
        if (f.n_wt < 1) fail("windfarms[" + std::to_string(i) + "].n_wt must be at least 1");
        if (!(f.v_w > 0.0) || !std::isfinite(f.v_w))
            fail("windfarms[" + std::to_string(i) + "].v_w must be positive");
    }
    if (disturbance) {
        disturbance->validate();
        if (disturbance->kind == DisturbanceKind::GeneratorTrip) {
            if (disturbance->generator >= static_cast<int>(generators.size()))
                fail("disturbance.generator is out of range");
            if (generators.size() < 2) fail("a trip needs at least two generators");
        }
        if (disturbance->time > sim.t_end) fail("disturbance.time lies beyond sim.t_end");
    }
    if (trajectory.alpha > 0.0) {
        if (trajectory.alpha < 1.0) fail("trajectory.alpha must be at least 1");
    } else if (!(trajectory.target_nadir_hz > 0.0)) {
        fail("trajectory needs alpha or target_nadir_hz");
    } else if (disturbance) {
        (void)resolved_alpha();
    }
    if (!(controller.estimator_window > 0.0)) fail("controller.estimator_window must be positive");
    if (controller.gains) controller.gains->validate();
    if (controller.vic_k_df && !(*controller.vic_k_df >= 0.0))
        fail("controller.vic.k_df must be non-negative");
    if (!(controller.vic_k_pf >= 0.0)) fail("controller.vic.k_pf must be non-negative");
    if (!(controller.sic.duration >= 0.0) || !(controller.sic.withdrawal >= 0.0))
        fail("controller.sic durations must be non-negative");
    const auto& mb = controller.model_based;
    if (!(mb.error_level >= 0.0 && mb.error_level < 1.0))
        fail("controller.model_based.error_level must lie in [0, 1)");
    if (!(sim.dt > 0.0) || !std::isfinite(sim.dt)) fail("sim.dt must be positive");
    if (!(sim.t_end >= sim.dt) || !std::isfinite(sim.t_end)) fail("sim.t_end must cover one step");
    if (sim.record_every < 1) fail("sim.record_every must be at least 1");
}

double Scenario::deficit_pu() const {
    if (!disturbance) return 0.0;
    if (disturbance->kind == DisturbanceKind::LoadSurge) return disturbance->magnitude_pd;
    const auto& g = generators.at(static_cast<std::size_t>(disturbance->generator));
    return g.governor.dispatch() * g.s_mva / system.base_mva;
}

double Scenario::resolved_alpha() const {
    if (trajectory.alpha > 0.0) return trajectory.alpha;
    if (!disturbance) return 1.0;
    return alpha_for_nadir(system, deficit_pu(), trajectory.target_nadir_hz);
}

PiGains scenario_gains(const Scenario& scenario) {
    if (scenario.controller.gains) return *scenario.controller.gains;
    return design_pi(scenario.system, scenario.resolved_alpha());
}

namespace {

struct FarmRuntime {
    FarmRuntime(WindFarm f, WindFarmState s, ControllerKind k) : farm(std::move(f)), state(s), kind(k) {}

    WindFarm farm;
    WindFarmState state;
    ControllerKind kind;
    double c = 1.0;
    double rated = 0.0;
    TiPiController ti;
    PiPrototype proto;
    VicGains vic;
    double dp_peak = -std::numeric_limits<double>::infinity();
    bool armed = false;
    bool protected_exit = false;
    // audit
    double audit = 0.0;
    double e_start = 0.0;
    double max_abs_de = 0.0;
    double max_residual = 0.0;
};

}  // namespace

SimResult run_scenario(const Scenario& sc) {
    sc.validate();
    const SystemParams& sys = sc.system;
    const double dt = sc.sim.dt;
    const auto n_steps = static_cast<long long>(std::llround(sc.sim.t_end / dt));
    const double alpha = sc.resolved_alpha();
    const PiGains base_gains = scenario_gains(sc);

    // State layout: [df, governor states..., farm speeds...]
    const std::size_t n_gen = sc.generators.size();
    std::vector<std::size_t> gov_off(n_gen);
    std::size_t n_x = 1;
    for (std::size_t i = 0; i < n_gen; ++i) {
        gov_off[i] = n_x;
        n_x += sc.generators[i].governor.state_size();
    }
    const std::size_t farm_off = n_x;
    n_x += sc.farms.size();
    std::vector<double> x(n_x, 0.0);
    std::vector<double> weight(n_gen);
    std::vector<bool> alive(n_gen, true);
    for (std::size_t i = 0; i < n_gen; ++i) {
        const auto& g = sc.generators[i];
        g.governor.initial_state(std::span<double>(x).subspan(gov_off[i], g.governor.state_size()));
        weight[i] = g.s_mva / sys.base_mva;
    }

    std::vector<FarmRuntime> farms;
    farms.reserve(sc.farms.size());
    double mb_rated = 0.0;
    for (const auto& f : sc.farms) {
        WindFarm wf(f.n_wt, f.v_w, f.turbine);
        FarmRuntime rt(wf, wf.initial_state(), f.controller);
        rt.rated = wf.rated_mw();
        rt.c = f.gain_mode == GainMode::Adaptive ? adaptive_gain(rt.state) : 1.0;
        const PiGains g = scale_gains(base_gains, rt.c);
        rt.ti = TiPiController(g);
        rt.proto = PiPrototype(g);
        rt.vic.k_df = sc.controller.vic_k_df.value_or(2.0 * wf.h());
        rt.vic.k_pf = sc.controller.vic_k_pf;
        rt.e_start = kinetic_energy(rt.farm, rt.state);
        if (f.controller == ControllerKind::ModelBased) mb_rated += rt.rated;
        farms.push_back(std::move(rt));
    }
    for (std::size_t i = 0; i < farms.size(); ++i) x[farm_off + i] = farms[i].state.omega;

    ModelBasedFfs model_based;
    if (mb_rated > 0.0) {
        std::vector<ModelBasedFfs::Unit> assumed;
        const auto& mb = sc.controller.model_based;
        for (std::size_t i = 0; i < n_gen; ++i) {
            const Governor& g = sc.generators[i].governor;
            Governor a = mb.error_level > 0.0
                             ? perturb_params(g, mb.error_level, derive_seed(mb.seed, i),
                                              mb.include_droop)
                             : g;
            assumed.push_back({a, weight[i]});
        }
        model_based = ModelBasedFfs(std::move(assumed), sys, alpha);
    }

    const bool has_dist = sc.disturbance.has_value();
    const long long k_on = has_dist ? std::llround(sc.disturbance->time / dt) : -1;
    const long long k_est =
        has_dist ? k_on + std::max(1LL, std::llround(sc.controller.estimator_window / dt)) : -1;
    const double pd_true = sc.deficit_pu();
    double h_plant = sys.inertia_h;
    double pd_active = 0.0;
    double f_at_onset = 0.0;

    SimResult res;
    res.dt = dt * sc.sim.record_every;
    res.f_nom = sys.f_nom;
    res.pd_true = pd_true;
    res.onset = has_dist ? static_cast<double>(k_on) * dt : 0.0;
    res.farms.resize(farms.size());
    res.farm_summary.resize(farms.size());
    const std::size_t n_rec = static_cast<std::size_t>(n_steps / sc.sim.record_every + 1);
    for (auto* v : {&res.t, &res.df_pu, &res.rocof_pu, &res.dpm_pu, &res.dpwf_pu}) v->reserve(n_rec);
    for (auto& fs : res.farms) {
        fs.omega.reserve(n_rec);
        fs.p.reserve(n_rec);
        fs.mode.reserve(n_rec);
    }
    for (std::size_t i = 0; i < farms.size(); ++i) {
        auto& s = res.farm_summary[i];
        s.omega0 = farms[i].state.omega0;
        s.p0 = farms[i].state.p0;
        s.c = farms[i].c;
        s.omega_min_seen = farms[i].state.omega;
        s.p_peak = farms[i].state.p0;
        s.dp_peak = 0.0;
    }

    std::vector<double> p_e(farms.size(), 0.0);
    std::vector<double> p_a0(farms.size(), 0.0);
    Rk4 rk(n_x);
    double df_prev = 0.0;
    double nadir = 0.0, nadir_t = 0.0;
    double post_exit_min = std::numeric_limits<double>::infinity();

    for (long long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double df = x[0];

        if (k == k_on) {
            f_at_onset = df;
            pd_active = pd_true;
            if (sc.disturbance->kind == DisturbanceKind::GeneratorTrip) {
                const auto gi = static_cast<std::size_t>(sc.disturbance->generator);
                alive[gi] = false;
                h_plant -= sc.generators[gi].h * weight[gi];
                res.events.push_back({t, "generator " + std::to_string(gi + 1) + " tripped"});
            } else {
                res.events.push_back({t, "load surge"});
            }
        }
        if (k == k_est) {
            const FreqWindow w{f_at_onset, df};
            const double window = static_cast<double>(k_est - k_on) * dt;
            const double pd_hat = estimate_power_deficit(std::span<const FreqWindow>(&w, 1), window,
                                                         sys.inertia_h);
            res.pd_hat = pd_hat;
            if (pd_hat > 0.0) {
                const TrajectorySpec spec = make_spec(sys, pd_hat, alpha);
                res.spec = spec;
                for (auto& f : farms) {
                    if (f.kind == ControllerKind::ProposedTiPi) {
                        f.ti.activate(spec, df, t);
                        if (f.state.mode == FarmMode::Mppt) f.state.mode = FarmMode::Ffs;
                    } else if (f.kind == ControllerKind::PiPrototype) {
                        f.proto.activate(spec, res.onset);
                        if (f.state.mode == FarmMode::Mppt) f.state.mode = FarmMode::Ffs;
                    }
                }
            }
            res.events.push_back({t, "deficit estimated"});
        }

        const double rocof_meas = k > 0 ? (df - df_prev) / dt : 0.0;
        const bool disturbed = has_dist && k >= k_on;
        double mb_out = 0.0;
        if (mb_rated > 0.0) mb_out = model_based.step(df, dt);

        double dpwf = 0.0;
        for (std::size_t i = 0; i < farms.size(); ++i) {
            auto& f = farms[i];
            auto& summ = res.farm_summary[i];
            const auto& tp = f.farm.turbine().params();
            const double w = x[farm_off + i];
            f.state.omega = w;
            if (f.state.mode != FarmMode::Exit && f.state.mode != FarmMode::Mppt) {
                if (w <= tp.omega_min) {
                    f.state.mode = FarmMode::Exit;
                    f.protected_exit = true;
                    summ.hit_omega_min = true;
                    res.events.push_back({t, "wf" + std::to_string(i + 1) + " reached omega_min"});
                } else if (w > tp.omega_max + kOverspeedMargin) {
                    f.state.mode = FarmMode::Exit;
                    f.protected_exit = true;
                    summ.hit_omega_max = true;
                    res.events.push_back({t, "wf" + std::to_string(i + 1) + " exceeded omega_max"});
                }
                if (f.protected_exit && !summ.exit_time) summ.exit_time = t;
            }
            if (w <= tp.omega_min) summ.hit_omega_min = true;

            const double track = f.farm.tracking_power(w);
            double p = track;
            if (disturbed && f.state.mode == FarmMode::Mppt &&
                (f.kind == ControllerKind::ModelBased || f.kind == ControllerKind::VicFixed ||
                 f.kind == ControllerKind::VicAdaptive || f.kind == ControllerKind::Sic))
                f.state.mode = FarmMode::Ffs;

            if (f.state.mode == FarmMode::Ffs) {
                switch (f.kind) {
                    case ControllerKind::ProposedTiPi:
                    case ControllerKind::PiPrototype:
                    case ControllerKind::ModelBased: {
                        double dp_sys = 0.0;
                        if (f.kind == ControllerKind::ProposedTiPi)
                            dp_sys = f.ti.step(df, dt);
                        else if (f.kind == ControllerKind::PiPrototype)
                            dp_sys = f.proto.step(df, t, dt);
                        else
                            dp_sys = mb_out * f.rated / mb_rated;
                        const double dp = dp_sys * sys.base_mva / f.rated;
                        p = f.state.p0 + dp;
                        if (dp > f.dp_peak) {
                            f.dp_peak = dp;
                        } else if (dp < f.dp_peak && f.dp_peak > 0.0) {
                            f.armed = true;
                        }
                        if (sc.controller.exit_strategy && f.armed &&
                            exit_check(f.farm, f.state, p) == ExitDecision::SwitchToMppt) {
                            f.state.mode = FarmMode::Exit;
                            summ.exit_time = t;
                            if (!res.first_exit) res.first_exit = t;
                            res.events.push_back({t, "wf" + std::to_string(i + 1) + " exit to MPPT"});
                            p = track;
                        }
                        break;
                    }
                    case ControllerKind::VicFixed:
                        p = track + vic_fixed_step(f.vic, df, rocof_meas);
                        break;
                    case ControllerKind::VicAdaptive:
                        p = track + vic_adaptive_step(f.vic, adaptive_gain(f.state), df, rocof_meas);
                        break;
                    case ControllerKind::Sic: {
                        const double elapsed = t - res.onset;
                        p = sic_step(sc.controller.sic, f.state.p0, track, elapsed);
                        if (elapsed >= sc.controller.sic.duration) {
                            f.state.mode = FarmMode::Exit;
                            summ.exit_time = t;
                            if (!res.first_exit) res.first_exit = t;
                        }
                        break;
                    }
                    case ControllerKind::None:
                        break;
                }
            } else if (f.state.mode == FarmMode::Exit && f.kind == ControllerKind::Sic &&
                       !f.protected_exit) {
                p = sic_step(sc.controller.sic, f.state.p0, track, t - res.onset);
            }
            p = std::max(p, 0.0);
            p_e[i] = p;
            dpwf += (p - f.state.p0) * f.rated / sys.base_mva;

            summ.omega_min_seen = std::min(summ.omega_min_seen, w);
            summ.p_peak = std::max(summ.p_peak, p);
            summ.dp_peak = std::max(summ.dp_peak, p - f.state.p0);
            summ.omega_final = w;
            summ.p_final = p;
        }

        double dpm = 0.0;
        for (std::size_t i = 0; i < n_gen; ++i) {
            if (!alive[i]) continue;
            const auto& g = sc.generators[i].governor;
            dpm += weight[i] * g.output(df, std::span<const double>(x).subspan(gov_off[i], g.state_size()));
        }
        const double rocof = (dpm - pd_active - sys.damping_df * df + dpwf) / (2.0 * h_plant);

        if (k % sc.sim.record_every == 0) {
            res.t.push_back(t);
            res.df_pu.push_back(df);
            res.rocof_pu.push_back(rocof);
            res.dpm_pu.push_back(dpm);
            res.dpwf_pu.push_back(dpwf);
            for (std::size_t i = 0; i < farms.size(); ++i) {
                res.farms[i].omega.push_back(x[farm_off + i]);
                res.farms[i].p.push_back(p_e[i]);
                res.farms[i].mode.push_back(static_cast<int>(farms[i].state.mode));
            }
        }
        if (df < nadir) {
            nadir = df;
            nadir_t = t;
        }
        if (res.first_exit && t >= *res.first_exit) post_exit_min = std::min(post_exit_min, df);
        df_prev = df;
        if (k == n_steps) break;

        for (std::size_t i = 0; i < farms.size(); ++i) p_a0[i] = farms[i].farm.aero_power(x[farm_off + i]);

        auto rhs = [&](std::span<const double> s, std::span<double> ds) {
            const double f = s[0];
            double pm = 0.0;
            for (std::size_t i = 0; i < n_gen; ++i) {
                const auto& g = sc.generators[i].governor;
                const std::size_t m = g.state_size();
                auto gs = s.subspan(gov_off[i], m);
                auto gd = ds.subspan(gov_off[i], m);
                if (!alive[i]) {
                    std::fill(gd.begin(), gd.end(), 0.0);
                    continue;
                }
                pm += weight[i] * g.output(f, gs);
                g.derivative(f, gs, gd);
            }
            ds[0] = (pm - pd_active - sys.damping_df * f + dpwf) / (2.0 * h_plant);
            for (std::size_t i = 0; i < farms.size(); ++i)
                ds[farm_off + i] = farms[i].farm.omega_dot(s[farm_off + i], p_e[i]);
        };
        rk.step(rhs, x, dt);
        for (std::size_t i = 0; i < n_gen; ++i) {
            const auto& g = sc.generators[i].governor;
            g.project(std::span<double>(x).subspan(gov_off[i], g.state_size()));
        }
        for (double v : x)
            if (!std::isfinite(v))
                throw SimulationError("simulation state became non-finite at t=" + std::to_string(t));

        for (std::size_t i = 0; i < farms.size(); ++i) {
            auto& f = farms[i];
            const double w1 = x[farm_off + i];
            const double p_a1 = f.farm.aero_power(w1);
            f.audit += 0.5 * (p_a0[i] + p_a1) * dt - p_e[i] * dt;
            const double de = f.farm.h() * w1 * w1 - f.e_start;
            f.max_abs_de = std::max(f.max_abs_de, std::abs(de));
            f.max_residual = std::max(f.max_residual, std::abs(f.audit - de));
        }
    }

    res.nadir_hz = nadir * sys.f_nom;
    res.nadir_time = nadir_t;
    res.final_df_hz = x[0] * sys.f_nom;
    if (std::isfinite(post_exit_min)) res.post_exit_min_hz = post_exit_min * sys.f_nom;
    for (std::size_t i = 0; i < farms.size(); ++i) {
        const auto& f = farms[i];
        const double rel = f.max_abs_de > 1e-12 ? f.max_residual / f.max_abs_de : f.max_residual;
        res.farm_summary[i].energy_audit_rel = rel;
        res.energy_audit_rel = std::max(res.energy_audit_rel, rel);
    }
    return res;
}

void write_csv(std::ostream& os, const SimResult& r) {
    os << "t_s,df_hz,rocof_hzps,dpm_pu,dpwf_pu";
    for (std::size_t i = 0; i < r.farms.size(); ++i) {
        const auto n = std::to_string(i + 1);
        os << ",wf" << n << "_omega_pu,wf" << n << "_p_pu,wf" << n << "_mode";
    }
    os << "\r\n";
    auto put = [&](double v) { os << csv_number(v); };
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        put(r.t[k]);
        os << ',';
        put(r.df_pu[k] * r.f_nom);
        os << ',';
        put(r.rocof_pu[k] * r.f_nom);
        os << ',';
        put(r.dpm_pu[k]);
        os << ',';
        put(r.dpwf_pu[k]);
        for (const auto& f : r.farms) {
            os << ',';
            put(f.omega[k]);
            os << ',';
            put(f.p[k]);
            os << ',' << f.mode[k];
        }
        os << "\r\n";
    }
}

std::string csv_string(const SimResult& result) {
    std::ostringstream os;
    write_csv(os, result);
    return os.str();
}

}  // namespace windffs
