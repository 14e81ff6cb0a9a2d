#include "ffs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include "ffs/campaign.hpp"
#include "ffs/config.hpp"
#include "ffs/csv.hpp"
#include "json.hpp"

namespace windffs {

namespace fs = std::filesystem;

double secondary_drop_hz(const SimResult& r) {
    const std::size_t n = r.df_pu.size();
    std::size_t k = 0;
    while (k + 1 < n && r.t[k] < r.onset) ++k;
    // first local minimum of the excursion
    while (k + 1 < n && r.df_pu[k + 1] <= r.df_pu[k]) ++k;
    double peak = r.df_pu[k], drop = 0.0;
    for (; k < n; ++k) {
        peak = std::max(peak, r.df_pu[k]);
        drop = std::max(drop, peak - r.df_pu[k]);
    }
    return drop * r.f_nom;
}

CompareEntry compare_entry(std::string row, std::string column, const SimResult& r) {
    return {std::move(row), std::move(column), r.nadir_hz, secondary_drop_hz(r)};
}

CompareTable compare_table(const std::vector<CompareEntry>& entries,
                           std::optional<double> reference_nadir_hz) {
    if (entries.empty()) throw std::invalid_argument("no results to compare");
    CompareTable t;
    t.reference_nadir_hz = reference_nadir_hz;
    auto index_of = [](std::vector<std::string>& v, const std::string& s) {
        auto it = std::find(v.begin(), v.end(), s);
        if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
        v.push_back(s);
        return v.size() - 1;
    };
    for (const auto& e : entries) {
        index_of(t.rows, e.row);
        index_of(t.columns, e.column);
    }
    const double nan = std::nan("");
    t.nadir_hz.assign(t.rows.size(), std::vector<double>(t.columns.size(), nan));
    t.sfd_hz = t.nadir_hz;
    for (const auto& e : entries) {
        const std::size_t r = index_of(t.rows, e.row), c = index_of(t.columns, e.column);
        if (!std::isnan(t.nadir_hz[r][c]))
            throw std::invalid_argument("duplicate result for " + e.row + " / " + e.column);
        t.nadir_hz[r][c] = e.nadir_hz;
        t.sfd_hz[r][c] = e.sfd_hz;
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            if (std::isnan(t.nadir_hz[r][c]))
                throw std::invalid_argument("mismatched scenario sets: " + t.rows[r] + " has no " +
                                            t.columns[c] + " result");
    return t;
}

void write_compare_csv(std::ostream& os, const CompareTable& t) {
    os << "row";
    for (const auto& c : t.columns) {
        os << ',' << csv_field(c + "_nadir_hz") << ',' << csv_field(c + "_sfd_hz");
        if (t.reference_nadir_hz) os << ',' << csv_field(c + "_rel_pct");
    }
    os << "\r\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << csv_field(t.rows[r]);
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            os << ',' << csv_number(t.nadir_hz[r][c]) << ',' << csv_number(t.sfd_hz[r][c]);
            if (t.reference_nadir_hz) {
                const double ref = *t.reference_nadir_hz;
                os << ',' << csv_number((t.nadir_hz[r][c] - ref) / ref * 100.0);
            }
        }
        os << "\r\n";
    }
}

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids{"fig9",   "fig11a", "fig11b", "tab3", "fig12a",
                                              "fig12b", "fig13",  "tab4",   "fig14", "fig15",
                                              "fig16",  "fig4",   "fig5",   "fig7"};
    return ids;
}

bool ExperimentReport::passed() const {
    return errors.empty() && std::all_of(checks.begin(), checks.end(), [](const ExperimentCheck& c) {
               return !c.gating || c.pass;
           });
}

namespace {

struct Ctx {
    const ExperimentOptions& opt;
    fs::path dir;
    ExperimentReport report;

    void at_most(std::string name, double value, double bound, bool gating = true) {
        report.checks.push_back({std::move(name), value, bound, "<=", value <= bound, gating});
    }
    void at_least(std::string name, double value, double bound, bool gating = true) {
        report.checks.push_back({std::move(name), value, bound, ">=", value >= bound, gating});
    }
    void within(std::string name, double value, double target, double tol, bool gating = true) {
        report.checks.push_back({std::move(name), value, tol, "|value - " + csv_number(target) + "| <=",
                                 std::abs(value - target) <= tol, gating});
    }

    std::ofstream open(const std::string& file) {
        const fs::path p = dir / file;
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + p.string());
        report.files.push_back(p.string());
        return os;
    }

    std::optional<SimResult> run(const std::string& label, const Scenario& sc,
                                 bool write_series = true) {
        try {
            SimResult r = run_scenario(sc);
            if (write_series) {
                auto os = open(report.id + "_" + label + ".csv");
                write_csv(os, r);
            }
            return r;
        } catch (const std::exception& e) {
            report.errors.push_back(label + ": " + e.what());
            return std::nullopt;
        }
    }

    void table(const std::string& file, const CompareTable& t) {
        auto os = open(file);
        write_compare_csv(os, t);
    }
};

double nadir_error_pct(const SimResult& r) {
    if (!r.spec) throw std::runtime_error("no trajectory was activated");
    const double target = r.spec->a_f * r.f_nom;
    return std::abs(r.nadir_hz - target) / std::abs(target) * 100.0;
}

const char* const kBaselines[] = {"proposed_ti_pi", "vic_fixed", "vic_adaptive", "sic"};

Scenario with_controller(Scenario sc, ControllerKind k) {
    for (auto& f : sc.farms) f.controller = k;
    return sc;
}

// Fraction of columns where the proposed row has the highest nadir.
void proposed_best(Ctx& c, const CompareTable& t, const std::string& name) {
    std::size_t best = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t col = 0; col < t.columns.size(); ++col) {
        double other = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 1; r < t.rows.size(); ++r) other = std::max(other, t.nadir_hz[r][col]);
        margin = std::min(margin, t.nadir_hz[0][col] - other);
        best += t.nadir_hz[0][col] > other;
    }
    c.at_least(name, static_cast<double>(best), static_cast<double>(t.columns.size()));
    c.at_least(name + "_margin_hz", margin, 0.0, false);
}

void fig9(Ctx& c) {
    const Scenario sc = preset_single_wf("ieeeg1");
    auto r = c.run("series", sc);
    if (!r) return;
    {
        auto os = c.open("fig9_reference.csv");
        os << "t_s,df_opt_hz\r\n";
        for (std::size_t k = 0; k < r->t.size(); k += 10)
            os << csv_number(r->t[k]) << ','
               << csv_number(r->spec ? f_opt(*r->spec, r->t[k] - r->onset) * r->f_nom : 0.0) << "\r\n";
    }
    c.within("nadir_hz", r->nadir_hz, -0.200, 0.015);
    c.at_least("exit_occurred", r->first_exit ? 1.0 : 0.0, 1.0);
    c.at_most("post_exit_drop_below_nadir_hz",
              r->post_exit_min_hz ? r->nadir_hz - *r->post_exit_min_hz : 1.0, 0.01);
    const auto& s = r->farm_summary.at(0);
    const double back = std::max(std::abs(s.omega_final - s.omega0) / s.omega0,
                                 std::abs(s.p_final - s.p0) / s.p0);
    c.at_most("return_to_initial_point_rel", back, 0.005);
    c.within("pd_hat_mw", r->pd_hat.value_or(0.0) * sc.system.base_mva, 14.25, 0.75);
    c.within("final_df_hz", r->final_df_hz, -0.169, 0.003);
    c.at_most("energy_audit_rel", r->energy_audit_rel, 1e-3);
}

void fig11a(Ctx& c) {
    for (const char* g : {"ieeeg1", "ieeeg3", "simplified"}) {
        auto r = c.run(g, preset_single_wf(g));
        if (r) c.at_most(std::string("e_nadir_pct_") + g, nadir_error_pct(*r), 6.0);
    }
}

void fig11b(Ctx& c) {
    for (double tg : {0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0}) {
        Scenario sc = preset_single_wf("simplified");
        sc.generators[0] = make_unit(Governor(SimplifiedGovernor{tg, sc.system.droop_inv_r}, 0.475),
                                     sc.system.base_mva, sc.system.inertia_h);
        const std::string tag = "tg_" + csv_number(tg);
        auto r = c.run(tag, sc);
        if (r) c.at_most("e_nadir_pct_" + tag, nadir_error_pct(*r), 6.0);
    }
}

void campaign_experiment(Ctx& c, CampaignKind kind, std::size_t desk, std::size_t full) {
    CampaignOptions o;
    o.kind = kind;
    o.seed = c.opt.seed;
    o.threads = c.opt.threads;
    o.n_samples = c.opt.samples ? c.opt.samples : (c.opt.full_scale ? full : desk);
    const CampaignReport rep = run_campaign(o);
    for (auto& f : write_campaign(c.dir.string(), rep)) c.report.files.push_back(f);
    for (const auto& ch : rep.checks)
        c.report.checks.push_back({ch.name, ch.value, ch.bound, ch.relation, ch.pass, true});
    for (const auto& [k, v] : rep.stats) c.report.checks.push_back({k, v, 0.0, "info", true, false});
    c.at_most("failed_samples", static_cast<double>(rep.failures.size()), 0.0, false);
}

void tab3(Ctx& c) {
    CampaignOptions o;
    o.kind = CampaignKind::ModelingError;
    o.seed = c.opt.seed;
    o.threads = c.opt.threads;
    o.n_samples = c.opt.samples ? c.opt.samples : (c.opt.full_scale ? 1000 : 200);
    const CampaignReport rep = run_campaign(o);
    for (auto& f : write_campaign(c.dir.string(), rep)) c.report.files.push_back(f);
    for (const auto& ch : rep.checks)
        c.report.checks.push_back({ch.name, ch.value, ch.bound, ch.relation, ch.pass, true});
    std::vector<CompareEntry> entries;
    for (double level : o.levels) {
        const std::string tag = csv_number(level * 100.0) + "pct";
        const std::string row = csv_number(level * 100.0) + "%";
        for (const auto& [k, v] : rep.stats) {
            if (k == "model_based_min_nadir_hz_" + tag) entries.push_back({row, "model_based", v, 0.0});
            if (k == "proposed_min_nadir_hz_" + tag) entries.push_back({row, "proposed", v, 0.0});
        }
    }
    c.table("tab3.csv", compare_table(entries, -0.2));
}

void sweep_single(Ctx& c, const std::string& tag_prefix, const std::vector<double>& values,
                  const std::function<void(Scenario&, double)>& apply, bool spread_check) {
    std::vector<CompareEntry> entries;
    std::vector<double> proposed;
    for (double v : values) {
        const std::string col = tag_prefix + "_" + csv_number(v);
        for (const char* ctl : kBaselines) {
            Scenario sc = preset_single_wf("ieeeg1");
            apply(sc, v);
            auto r = c.run(col + "_" + ctl, with_controller(sc, controller_from_string(ctl)));
            if (!r) continue;
            entries.push_back(compare_entry(ctl, col, *r));
            if (std::string(ctl) == "proposed_ti_pi") proposed.push_back(r->nadir_hz);
        }
    }
    if (!c.report.errors.empty()) return;
    const CompareTable t = compare_table(entries);
    c.table(c.report.id + ".csv", t);
    proposed_best(c, t, "proposed_best_columns");
    if (spread_check && !proposed.empty()) {
        const auto [lo, hi] = std::minmax_element(proposed.begin(), proposed.end());
        c.at_most("proposed_nadir_spread_hz", *hi - *lo, 0.01, false);
    }
}

void fig12a(Ctx& c) {
    sweep_single(c, "pd", {0.025, 0.05, 0.075, 0.1},
                 [](Scenario& sc, double v) { sc.disturbance->magnitude_pd = v; }, false);
}

void fig12b(Ctx& c) {
    sweep_single(c, "h", {2.0, 3.0, 4.0, 5.0, 6.0},
                 [](Scenario& sc, double v) {
                     sc.system.inertia_h = v;
                     sc.generators[0].h = v;
                 },
                 true);
}

std::vector<CompareEntry> multi_runs(Ctx& c, bool include_none, std::vector<SimResult>* proposed) {
    std::vector<CompareEntry> entries;
    for (auto kind : {DisturbanceKind::LoadSurge, DisturbanceKind::GeneratorTrip}) {
        const std::string col = kind == DisturbanceKind::LoadSurge ? "load_surge" : "generator_trip";
        std::vector<std::string> ctls(std::begin(kBaselines), std::end(kBaselines));
        if (include_none) ctls.push_back("none");
        for (const auto& ctl : ctls) {
            auto r = c.run(col + "_" + ctl,
                           with_controller(preset_multi_wf(kind), controller_from_string(ctl)));
            if (!r) continue;
            if (ctl != "none") entries.push_back(compare_entry(ctl, col, *r));
            if (ctl == "proposed_ti_pi" && proposed) proposed->push_back(*r);
        }
    }
    return entries;
}

void fig13(Ctx& c) {
    std::vector<SimResult> prop;
    multi_runs(c, true, &prop);
    for (std::size_t i = 0; i < prop.size(); ++i) {
        const std::string col = i == 0 ? "load_surge" : "generator_trip";
        c.at_most("proposed_e_nadir_pct_" + col, nadir_error_pct(prop[i]), 6.0);
        const auto& r = prop[i];
        c.at_most("proposed_post_exit_drop_below_nadir_hz_" + col,
                  r.post_exit_min_hz ? r.nadir_hz - *r.post_exit_min_hz : 1.0, 0.01);
    }
}

void tab4(Ctx& c) {
    std::vector<SimResult> prop;
    const auto entries = multi_runs(c, false, &prop);
    if (!c.report.errors.empty()) return;
    const CompareTable t = compare_table(entries);
    c.table("tab4.csv", t);
    proposed_best(c, t, "proposed_best_columns");
    if (!prop.empty()) c.within("load_surge_final_df_hz", prop[0].final_df_hz, -0.163, 0.003);
}

struct FarmRow {
    double v_w, omega0, c, omega_min, dp_peak_mw;
    bool hit_min;
};

std::vector<FarmRow> farm_rows(const Scenario& sc, const SimResult& r) {
    std::vector<FarmRow> rows;
    for (std::size_t i = 0; i < sc.farms.size(); ++i) {
        const auto& s = r.farm_summary[i];
        rows.push_back({sc.farms[i].v_w, s.omega0, s.c, s.omega_min_seen,
                        s.dp_peak * sc.farms[i].rated_mw(), s.hit_omega_min});
    }
    return rows;
}

void write_farm_rows(Ctx& c, const std::string& file, const std::string& key_name,
                     const std::vector<std::pair<std::string, FarmRow>>& rows) {
    auto os = c.open(file);
    os << csv_field(key_name) << ",v_w,omega0,c,omega_min_seen,dp_peak_mw,hit_omega_min\r\n";
    for (const auto& [k, r] : rows)
        os << csv_field(k) << ',' << csv_number(r.v_w) << ',' << csv_number(r.omega0) << ','
           << csv_number(r.c) << ',' << csv_number(r.omega_min) << ',' << csv_number(r.dp_peak_mw) << ','
           << (r.hit_min ? 1 : 0) << "\r\n";
}

void fig14(Ctx& c) {
    std::vector<std::pair<std::string, FarmRow>> rows;
    for (double v : {6.5, 7.0, 7.5, 8.0, 8.5, 9.0}) {
        Scenario sc = preset_multi_wf(DisturbanceKind::LoadSurge);
        sc.farms[0].v_w = v;
        const std::string tag = "wf1_v_" + csv_number(v);
        auto r = c.run(tag, sc);
        if (r) rows.emplace_back(tag, farm_rows(sc, *r)[0]);
    }
    if (!c.report.errors.empty()) return;
    write_farm_rows(c, "fig14.csv", "case", rows);
    double dc = std::numeric_limits<double>::infinity(), dp = dc;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        dc = std::min(dc, rows[i].second.c - rows[i - 1].second.c);
        dp = std::min(dp, rows[i].second.dp_peak_mw - rows[i - 1].second.dp_peak_mw);
    }
    c.at_least("c_increment_min", dc, 1e-12);
    c.at_least("wf1_peak_support_increment_min_mw", dp, 1e-9);
}

void fig15(Ctx& c) {
    static constexpr double v[] = {6.5, 7.5, 8.5, 9.5, 10.5};
    static constexpr double w0_table[] = {0.7852, 0.9063, 1.0387, 1.1619, 1.2};
    static constexpr double c_table[] = {0.1332, 0.3488, 0.6199, 0.9053, 1.0};
    const TurbineParams tp;
    double c_err = 0.0, c_sim_err = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        c_err = std::max(c_err, std::abs(adaptive_gain(w0_table[i], tp.omega_min, tp.omega_max) - c_table[i]));
    c.at_most("reference_c_abs_error", c_err, 0.005);

    std::vector<std::pair<std::string, FarmRow>> rows;
    std::map<std::string, std::vector<FarmRow>> by_mode;
    for (auto mode : {GainMode::Fixed, GainMode::Adaptive}) {
        Scenario sc = preset_multi_wf(DisturbanceKind::LoadSurge);
        for (std::size_t i = 0; i < 5; ++i) {
            sc.farms[i].v_w = v[i];
            sc.farms[i].gain_mode = mode;
        }
        const std::string tag = to_string(mode);
        auto r = c.run(tag, sc);
        if (!r) continue;
        by_mode[tag] = farm_rows(sc, *r);
        for (std::size_t i = 0; i < 5; ++i)
            rows.emplace_back(tag + "_wf" + std::to_string(i + 1), by_mode[tag][i]);
    }
    if (!c.report.errors.empty()) return;
    write_farm_rows(c, "fig15.csv", "case", rows);
    for (std::size_t i = 0; i < 5; ++i)
        c_sim_err = std::max(c_sim_err, std::abs(by_mode["adaptive"][i].c - c_table[i]));
    c.at_most("simulated_c_abs_error", c_sim_err, 0.005, false);
    const auto& fixed = by_mode["fixed"];
    const auto& adapt = by_mode["adaptive"];
    c.at_least("fixed_wf1_hits_omega_min", fixed[0].hit_min ? 1.0 : 0.0, 1.0);
    c.at_least("adaptive_wf1_omega_min_seen", adapt[0].omega_min, tp.omega_min + 0.02);
    double inc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < 5; ++i) inc = std::min(inc, adapt[i].dp_peak_mw - adapt[i - 1].dp_peak_mw);
    c.at_least("adaptive_peak_support_increment_min_mw", inc, 1e-9);
    std::size_t stalled = 0;
    for (const auto& f : adapt) stalled += f.hit_min;
    c.at_most("adaptive_farms_reaching_omega_min", static_cast<double>(stalled), 0.0, false);
}

void fig16(Ctx& c) {
    for (const char* ctl : {"proposed_ti_pi", "vic_fixed", "vic_adaptive", "sic", "none"}) {
        Scenario sc = preset_multi_wf(DisturbanceKind::LoadSurge);
        sc.farms[0].controller = controller_from_string(ctl);
        auto r = c.run(std::string("wf1_") + ctl, sc);
        if (r) c.at_most(std::string("e_nadir_pct_wf1_") + ctl, nadir_error_pct(*r), 6.0);
    }
}

void write_summary(Ctx& c) {
    nlohmann::ordered_json j;
    j["id"] = c.report.id;
    j["passed"] = c.report.passed();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& ch : c.report.checks)
        checks.push_back({{"name", ch.name}, {"value", ch.value}, {"relation", ch.relation},
                          {"bound", ch.bound}, {"pass", ch.pass}, {"gating", ch.gating}});
    j["errors"] = c.report.errors;
    const fs::path p = c.dir / "summary.json";
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    c.report.files.push_back(p.string());
    j["files"] = c.report.files;
    os << j.dump(2) << "\n";
}

}  // namespace

ExperimentReport run_experiment(const ExperimentOptions& opt) {
    static const std::map<std::string, std::function<void(Ctx&)>> table{
        {"fig9", fig9},
        {"fig11a", fig11a},
        {"fig11b", fig11b},
        {"tab3", tab3},
        {"fig12a", fig12a},
        {"fig12b", fig12b},
        {"fig13", fig13},
        {"tab4", tab4},
        {"fig14", fig14},
        {"fig15", fig15},
        {"fig16", fig16},
        {"fig4", [](Ctx& c) { campaign_experiment(c, CampaignKind::SpectralBound, 10000, 100000); }},
        {"fig5", [](Ctx& c) { campaign_experiment(c, CampaignKind::TrackingError, 10000, 100000); }},
        {"fig7", [](Ctx& c) { campaign_experiment(c, CampaignKind::GrComparison, 1000, 100000); }},
    };
    auto it = table.find(opt.id);
    if (it == table.end()) throw std::invalid_argument("unknown experiment id '" + opt.id + "'");
    Ctx c{opt, fs::path(opt.out_dir) / opt.id, {}};
    c.report.id = opt.id;
    fs::create_directories(c.dir);
    it->second(c);
    write_summary(c);
    return c.report;
}

}  // namespace windffs
