#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ffs/campaign.hpp"
#include "ffs/config.hpp"
#include "ffs/experiments.hpp"
#include "ffs/scenario.hpp"
#include "ffs/tuner.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace windffs;

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitBadInput = 2;

std::string default_out() {
    const char* env = std::getenv("WINDFFS_OUT_DIR");
    return env && *env ? env : "out";
}

Scenario preset(const std::string& name) {
    if (name == "single_wf_ieeeg1") return preset_single_wf("ieeeg1");
    if (name == "single_wf_ieeeg3") return preset_single_wf("ieeeg3");
    if (name == "single_wf_simplified") return preset_single_wf("simplified");
    if (name == "multi_wf_load_surge") return preset_multi_wf(DisturbanceKind::LoadSurge);
    if (name == "multi_wf_generator_trip") return preset_multi_wf(DisturbanceKind::GeneratorTrip);
    throw std::invalid_argument("unknown preset '" + name + "'");
}

const std::vector<std::string> kPresets{"single_wf_ieeeg1", "single_wf_ieeeg3", "single_wf_simplified",
                                        "multi_wf_load_surge", "multi_wf_generator_trip"};

nlohmann::ordered_json result_summary(const Scenario& sc, const SimResult& r) {
    nlohmann::ordered_json j;
    j["scenario"] = sc.name;
    j["nadir_hz"] = r.nadir_hz;
    j["nadir_time_s"] = r.nadir_time;
    j["final_df_hz"] = r.final_df_hz;
    j["secondary_drop_hz"] = secondary_drop_hz(r);
    j["pd_true_mw"] = r.pd_true * sc.system.base_mva;
    j["pd_hat_mw"] = r.pd_hat ? nlohmann::ordered_json(*r.pd_hat * sc.system.base_mva) : nullptr;
    if (r.spec) {
        j["trajectory"] = {{"a_f_hz", r.spec->a_f * r.f_nom}, {"t_f_s", r.spec->t_f},
                           {"alpha", r.spec->alpha}};
    }
    j["first_exit_s"] = r.first_exit ? nlohmann::ordered_json(*r.first_exit) : nullptr;
    j["energy_audit_rel"] = r.energy_audit_rel;
    auto& farms = j["farms"] = nlohmann::ordered_json::array();
    for (const auto& s : r.farm_summary) {
        farms.push_back({{"omega0", s.omega0},
                         {"p0", s.p0},
                         {"c", s.c},
                         {"omega_min_seen", s.omega_min_seen},
                         {"dp_peak", s.dp_peak},
                         {"omega_final", s.omega_final},
                         {"p_final", s.p_final},
                         {"hit_omega_min", s.hit_omega_min},
                         {"exit_time_s", s.exit_time ? nlohmann::ordered_json(*s.exit_time) : nullptr}});
    }
    auto& events = j["events"] = nlohmann::ordered_json::array();
    for (const auto& e : r.events) events.push_back({{"t_s", e.t}, {"event", e.what}});
    return j;
}

void print_checks(const std::vector<ExperimentCheck>& checks) {
    for (const auto& c : checks) {
        std::printf("  %-4s %-44s %.6g %s %.6g\n", !c.gating ? "info" : (c.pass ? "ok" : "FAIL"),
                    c.name.c_str(), c.value, c.relation.c_str(), c.bound);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-free PI fast frequency support of wind farms: simulation, tuning and campaigns"};
    app.require_subcommand(1);
    std::string out_dir = default_out();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one scenario and write its time series");
    std::string sim_config, sim_preset, sim_controller;
    auto* cfg_opt = sim->add_option("--config", sim_config, "Scenario JSON file")->check(CLI::ExistingFile);
    sim->add_option("--preset", sim_preset, "Bundled scenario instead of a file")
        ->check(CLI::IsMember(kPresets))
        ->excludes(cfg_opt);
    sim->add_option("--controller", sim_controller, "Override every farm's controller");
    sim->add_option("--out", out_dir, "Output directory");

    // tune
    auto* tune = app.add_subcommand("tune", "Print the designed PI gains for a scenario");
    std::string tune_config, tune_preset;
    auto* tcfg = tune->add_option("--config", tune_config, "Scenario JSON file")->check(CLI::ExistingFile);
    tune->add_option("--preset", tune_preset, "Bundled scenario")->check(CLI::IsMember(kPresets))->excludes(tcfg);

    // campaign
    auto* camp = app.add_subcommand("campaign", "Monte-Carlo verification campaign");
    std::string kind = "spectral_bound";
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    bool full_scale = false;
    unsigned threads = 0;
    camp->add_option("--kind", kind, "spectral_bound | tracking_error | gr_comparison | modeling_error")
        ->check(CLI::IsMember({"spectral_bound", "tracking_error", "gr_comparison", "modeling_error"}));
    camp->add_option("--samples", samples, "Samples (trials per level for modeling_error)");
    camp->add_option("--seed", seed, "Campaign seed");
    camp->add_flag("--full-scale", full_scale, "Use 100,000 samples (1,000 trials for modeling_error)");
    camp->add_option("--threads", threads, "Worker threads, 0 = all cores");
    camp->add_option("--out", out_dir, "Output directory");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a bundled experiment pipeline");
    std::string exp_id;
    std::vector<std::string> ids = experiment_ids();
    ids.push_back("all");
    exp->add_option("--id", exp_id, "Experiment id or 'all'")->required()->check(CLI::IsMember(ids));
    exp->add_option("--samples", samples, "Override campaign samples / trials");
    exp->add_option("--seed", seed, "Seed");
    exp->add_flag("--full-scale", full_scale, "100,000-sample campaigns (1,000 trials for modeling error)");
    exp->add_option("--threads", threads, "Worker threads, 0 = all cores");
    exp->add_option("--out", out_dir, "Output directory");

    // compare
    auto* cmp = app.add_subcommand("compare", "Nadir / secondary-drop table across configs and controllers");
    std::vector<std::string> cmp_configs, cmp_controllers{"proposed_ti_pi", "vic_fixed", "vic_adaptive", "sic"};
    cmp->add_option("--configs", cmp_configs, "Scenario JSON files (one column each)")
        ->required()
        ->check(CLI::ExistingFile);
    cmp->add_option("--controllers", cmp_controllers, "Controllers (one row each)");
    cmp->add_option("--out", out_dir, "Output directory");

    // preset
    auto* pre = app.add_subcommand("preset", "Print a bundled scenario as JSON");
    std::string pre_name;
    pre->add_option("name", pre_name, "Preset name")->required()->check(CLI::IsMember(kPresets));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            if (sim_config.empty() && sim_preset.empty()) throw CLI::RequiredError("--config or --preset");
            Scenario sc = sim_config.empty() ? preset(sim_preset) : load_config(sim_config);
            if (!sim_controller.empty()) {
                const ControllerKind k = controller_from_string(sim_controller);
                for (auto& f : sc.farms) f.controller = k;
            }
            const SimResult r = run_scenario(sc);
            fs::create_directories(out_dir);
            const fs::path csv = fs::path(out_dir) / (sc.name + ".csv");
            const fs::path js = fs::path(out_dir) / (sc.name + "_summary.json");
            std::ofstream(csv, std::ios::binary) << csv_string(r);
            std::ofstream(js, std::ios::binary) << result_summary(sc, r).dump(2) << "\n";
            std::printf("%s: nadir %.4f Hz at %.2f s, final %.4f Hz\n", sc.name.c_str(), r.nadir_hz,
                        r.nadir_time, r.final_df_hz);
            std::printf("wrote %s\nwrote %s\n", csv.string().c_str(), js.string().c_str());
            return 0;
        }
        if (*tune) {
            if (tune_config.empty() && tune_preset.empty()) throw CLI::RequiredError("--config or --preset");
            const Scenario sc = tune_config.empty() ? preset(tune_preset) : load_config(tune_config);
            const double alpha = sc.resolved_alpha();
            const PiDesign d = design_pi_report(sc.system, alpha);
            std::printf("K_p0 = %.6g\nK_I0 = %.6g\nbinding = %s\n", d.gains.kp, d.gains.ki, to_string(d.binding));
            std::printf("kp_tracking = %.6g\nkp_stability = %.6g\n", d.kp_tracking, d.kp_stability);
            if (sc.disturbance)
                std::printf("%s\n", describe(make_spec(sc.system, sc.deficit_pu(), alpha), sc.system.f_nom).c_str());
            return 0;
        }
        if (*camp) {
            CampaignOptions o;
            o.kind = campaign_from_string(kind);
            o.seed = seed;
            o.threads = threads;
            const bool trials = o.kind == CampaignKind::ModelingError;
            o.n_samples = samples ? samples : (full_scale ? (trials ? 1000 : 100000) : (trials ? 200 : 10000));
            const CampaignReport r = run_campaign(o);
            for (const auto& f : write_campaign(out_dir, r)) std::printf("wrote %s\n", f.c_str());
            for (const auto& c : r.checks)
                std::printf("  %-4s %-36s %.6g %s %.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                            c.relation.c_str(), c.bound);
            for (const auto& [k, v] : r.stats) std::printf("  info %-36s %.6g\n", k.c_str(), v);
            if (!r.failures.empty()) std::printf("  %zu samples failed\n", r.failures.size());
            return r.passed() ? 0 : kExitFailedChecks;
        }
        if (*exp) {
            std::vector<std::string> run = exp_id == "all" ? experiment_ids() : std::vector<std::string>{exp_id};
            bool ok = true;
            for (const auto& id : run) {
                ExperimentOptions o;
                o.id = id;
                o.out_dir = out_dir;
                o.seed = seed;
                o.samples = samples;
                o.full_scale = full_scale;
                o.threads = threads;
                const ExperimentReport r = run_experiment(o);
                std::printf("%s: %s (%zu files)\n", id.c_str(), r.passed() ? "pass" : "FAIL", r.files.size());
                print_checks(r.checks);
                for (const auto& e : r.errors) std::printf("  error %s\n", e.c_str());
                ok = ok && r.passed();
            }
            return ok ? 0 : kExitFailedChecks;
        }
        if (*cmp) {
            std::vector<CompareEntry> entries;
            for (const auto& path : cmp_configs) {
                const Scenario base = load_config(path);
                for (const auto& ctl : cmp_controllers) {
                    Scenario sc = base;
                    const ControllerKind k = controller_from_string(ctl);
                    for (auto& f : sc.farms) f.controller = k;
                    entries.push_back(compare_entry(ctl, base.name, run_scenario(sc)));
                }
            }
            const CompareTable t = compare_table(entries);
            fs::create_directories(out_dir);
            const fs::path p = fs::path(out_dir) / "compare.csv";
            std::ofstream os(p, std::ios::binary);
            write_compare_csv(os, t);
            write_compare_csv(std::cout, t);
            std::printf("wrote %s\n", p.string().c_str());
            return 0;
        }
        if (*pre) {
            std::cout << serialize(preset(pre_name));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "invalid configuration:\n");
        for (const auto& m : e.errors()) std::fprintf(stderr, "  %s\n", m.c_str());
        return kExitBadInput;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailedChecks;
    }
    return 0;
}
