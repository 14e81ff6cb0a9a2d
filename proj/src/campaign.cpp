#include "ffs/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ffs/config.hpp"
#include "ffs/csv.hpp"
#include "ffs/rng.hpp"
#include "ffs/tuner.hpp"
#include "json.hpp"

namespace windffs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double fraction(std::size_t k, std::size_t n) {
    return n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n);
}

CampaignCheck at_least(std::string name, double value, double bound) {
    return {std::move(name), value, bound, ">=", value >= bound};
}

CampaignCheck at_most(std::string name, double value, double bound) {
    return {std::move(name), value, bound, "<=", value <= bound};
}

void histogram(CampaignReport& r, const std::string& metric, std::size_t column, double lo,
               double hi, std::size_t bins) {
    r.hist_metric = metric;
    for (const auto& row : r.rows)
        if (std::isfinite(row[column])) hi = std::max(hi, row[column]);
    if (!(hi > lo)) hi = lo + 1.0;
    r.hist_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        r.hist_edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    r.hist_counts.assign(bins, 0);
    for (const auto& row : r.rows) {
        const double v = row[column];
        if (!std::isfinite(v)) continue;
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        ++r.hist_counts[std::min(b, bins - 1)];
    }
}

// Evaluates fn per sample; a throwing sample leaves a NaN row and a failure.
void evaluate(CampaignReport& r, std::size_t n, unsigned threads,
              const std::function<std::vector<double>(std::size_t)>& fn) {
    const std::size_t width = r.columns.size();
    r.rows.assign(n, std::vector<double>(width, kNaN));
    std::vector<std::string> errors(n);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            std::vector<double> row = fn(i);
            row.resize(width, kNaN);
            r.rows[i] = std::move(row);
        } catch (const std::exception& e) {
            errors[i] = e.what();
            r.rows[i][0] = static_cast<double>(i);
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!errors[i].empty()) r.failures.emplace_back(i, errors[i]);
}

std::vector<double> sample_prefix(std::size_t i, const ParamSample& s) {
    return {static_cast<double>(i), s.pd,  s.alpha, s.params.inertia_h, s.params.damping_df,
            s.tg,                   1.0 / s.params.droop_inv_r};
}

const std::vector<std::string> kSampleColumns{"index", "pd", "alpha", "h", "d_f", "t_g", "r"};

std::vector<std::string> with_prefix(std::initializer_list<const char*> extra) {
    std::vector<std::string> cols = kSampleColumns;
    for (const char* c : extra) cols.emplace_back(c);
    return cols;
}

void spectral(CampaignReport& r, const CampaignOptions& o) {
    const TunerConstants c;
    r.columns = with_prefix({"t_f", "omega_up"});
    evaluate(r, o.n_samples, o.threads, [&](std::size_t i) {
        const ParamSample s = draw_sample(o.ranges, o.seed, i);
        const TrajectorySpec spec = make_spec(s.params, s.pd, s.alpha);
        auto row = sample_prefix(i, s);
        row.push_back(spec.t_f);
        row.push_back(spectrum_upper_bound(spec, c.epsilon));
        return row;
    });
    std::size_t ok = 0;
    double worst = 0.0;
    for (const auto& row : r.rows) {
        if (row[8] <= c.omega_up_max) ++ok;
        if (std::isfinite(row[8])) worst = std::max(worst, row[8]);
    }
    r.checks.push_back(at_least("omega_up_within_0.15", fraction(ok, o.n_samples), 1.0));
    r.stats.emplace_back("omega_up_max", worst);
    histogram(r, "omega_up", 8, 0.0, c.omega_up_max, 30);
}

void tracking(CampaignReport& r, const CampaignOptions& o) {
    r.columns = with_prefix({"kp", "ki", "e_max", "e_nadir", "pass"});
    evaluate(r, o.n_samples, o.threads, [&](std::size_t i) {
        const ParamSample s = draw_sample(o.ranges, o.seed, i);
        const PiGains g = design_pi(s.params, s.alpha);
        const ErrorIndices e = simulate_tracking_lti({s.params, s.tg, s.pd, s.alpha}, g);
        auto row = sample_prefix(i, s);
        row.insert(row.end(), {g.kp, g.ki, e.e_max, e.e_nadir,
                               e.e_max < 8.0 && e.e_nadir < 4.0 ? 1.0 : 0.0});
        return row;
    });
    std::size_t ok = 0, ok_max = 0, ok_nadir = 0;
    for (const auto& row : r.rows) {
        ok += row[11] == 1.0;
        ok_max += row[9] < 8.0;
        ok_nadir += row[10] < 4.0;
    }
    r.checks.push_back(at_least("both_indices_within_bounds", fraction(ok, o.n_samples), 0.99));
    r.stats.emplace_back("e_max_below_8_fraction", fraction(ok_max, o.n_samples));
    r.stats.emplace_back("e_nadir_below_4_fraction", fraction(ok_nadir, o.n_samples));
    histogram(r, "e_max", 9, 0.0, 8.0, 40);
}

void gr_comparison(CampaignReport& r, const CampaignOptions& o) {
    const TunerConstants c;
    const std::size_t m = o.n_omega;
    if (m == 0) throw std::invalid_argument("n_omega must be positive");
    r.columns = with_prefix({"kp", "ki", "n_star_le", "all_le", "max_ratio"});
    // Magnitudes are kept for the envelope statistic.
    std::vector<std::vector<double>> g_r(o.n_samples), g_s(o.n_samples);
    evaluate(r, o.n_samples, o.threads, [&](std::size_t i) {
        const ParamSample s = draw_sample(o.ranges, o.seed, i);
        const PiGains g = design_pi(s.params, s.alpha);
        const Governor gov = simplified_governor(s.params, s.tg);
        std::size_t le = 0;
        double ratio = 0.0;
        std::vector<double> a(m), b(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double w = c.omega_up_max * static_cast<double>(j + 1) / static_cast<double>(m);
            a[j] = gr_magnitude(w, s.params, s.alpha, g, gov);
            b[j] = gr_star_magnitude(w, s.params, s.alpha, g, gov);
            le += b[j] <= a[j];
            ratio = std::max(ratio, a[j] > 0.0 ? b[j] / a[j] : 0.0);
        }
        g_r[i] = std::move(a);
        g_s[i] = std::move(b);
        auto row = sample_prefix(i, s);
        row.insert(row.end(), {g.kp, g.ki, static_cast<double>(le), le == m ? 1.0 : 0.0, ratio});
        return row;
    });
    std::size_t pairs = 0, all = 0;
    for (const auto& row : r.rows) {
        if (std::isfinite(row[9])) pairs += static_cast<std::size_t>(row[9]);
        all += row[10] == 1.0;
    }
    std::size_t env = 0;
    for (std::size_t j = 0; j < m; ++j) {
        double ma = 0.0, mb = 0.0;
        for (std::size_t i = 0; i < o.n_samples; ++i) {
            if (g_r[i].empty()) continue;
            ma = std::max(ma, g_r[i][j]);
            mb = std::max(mb, g_s[i][j]);
        }
        env += mb <= ma;
    }
    r.checks.push_back(at_least("star_not_above_plain_pairs", fraction(pairs, o.n_samples * m), 0.95));
    r.stats.emplace_back("all_omega_fraction", fraction(all, o.n_samples));
    r.stats.emplace_back("envelope_fraction", fraction(env, m));
    histogram(r, "max_ratio", 11, 0.0, 1.0, 40);
}

void modeling_error(CampaignReport& r, const CampaignOptions& o) {
    if (o.levels.empty()) throw std::invalid_argument("at least one error level is required");
    Scenario base = o.base_scenario.value_or(preset_single_wf("ieeeg1"));
    if (!o.base_scenario) base.sim.t_end = 60.0;
    base.validate();
    const std::size_t n = o.n_samples, nl = o.levels.size();
    r.columns = {"index", "level", "trial", "model_based_nadir_hz", "proposed_nadir_hz"};
    evaluate(r, n * nl, o.threads, [&](std::size_t idx) {
        const std::size_t li = idx / n, k = idx % n;
        // The trial seed is shared across levels so the perturbation
        // directions are common and only their size changes.
        const std::uint64_t trial_seed = derive_seed(o.seed, k);
        Scenario mb = base, pr = base;
        for (auto& f : mb.farms) f.controller = ControllerKind::ModelBased;
        mb.controller.model_based.error_level = o.levels[li];
        mb.controller.model_based.seed = trial_seed;
        for (auto& f : pr.farms) f.controller = ControllerKind::ProposedTiPi;
        pr.sim.seed = trial_seed;
        const double a = run_scenario(mb).nadir_hz;
        const double b = run_scenario(pr).nadir_hz;
        return std::vector<double>{static_cast<double>(idx), o.levels[li], static_cast<double>(k), a, b};
    });
    std::vector<double> worst_mb(nl, 0.0), worst_pr(nl, 0.0);
    double max_var = 0.0;
    for (std::size_t li = 0; li < nl; ++li) {
        double sum = 0.0, sq = 0.0;
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& row = r.rows[li * n + k];
            if (!std::isfinite(row[3]) || !std::isfinite(row[4])) continue;
            worst_mb[li] = std::min(worst_mb[li], row[3]);
            worst_pr[li] = std::min(worst_pr[li], row[4]);
            sum += row[4];
            sq += row[4] * row[4];
            ++cnt;
        }
        const double mean = cnt ? sum / static_cast<double>(cnt) : 0.0;
        const double var = cnt ? std::max(0.0, sq / static_cast<double>(cnt) - mean * mean) : 0.0;
        max_var = std::max(max_var, var);
        const std::string tag = csv_number(o.levels[li] * 100.0) + "pct";
        r.stats.emplace_back("model_based_min_nadir_hz_" + tag, worst_mb[li]);
        r.stats.emplace_back("proposed_min_nadir_hz_" + tag, worst_pr[li]);
        r.stats.emplace_back("proposed_nadir_variance_hz2_" + tag, var);
    }
    double rise = -std::numeric_limits<double>::infinity();
    for (std::size_t li = 1; li < nl; ++li) rise = std::max(rise, worst_mb[li] - worst_mb[li - 1]);
    if (nl == 1) rise = 0.0;
    r.checks.push_back(at_most("proposed_nadir_variance_hz2", max_var, 1e-4));
    r.checks.push_back(at_most("model_based_worst_nadir_step_hz", rise, 1e-9));
    r.checks.push_back(at_most("failed_samples", static_cast<double>(r.failures.size()), 0.0));
    histogram(r, "model_based_nadir_hz", 3, std::min(-0.25, *std::min_element(worst_mb.begin(), worst_mb.end())),
              -0.15, 40);
}

}  // namespace

const char* to_string(CampaignKind kind) {
    switch (kind) {
        case CampaignKind::SpectralBound: return "spectral_bound";
        case CampaignKind::TrackingError: return "tracking_error";
        case CampaignKind::GrComparison: return "gr_comparison";
        case CampaignKind::ModelingError: return "modeling_error";
    }
    return "?";
}

CampaignKind campaign_from_string(const std::string& name) {
    for (auto k : {CampaignKind::SpectralBound, CampaignKind::TrackingError, CampaignKind::GrComparison,
                   CampaignKind::ModelingError})
        if (name == to_string(k)) return k;
    throw std::invalid_argument("unknown campaign kind '" + name + "'");
}

ParamSample draw_sample(const SampleRanges& g, std::uint64_t seed, std::size_t index) {
    Rng rng(derive_seed(seed, index));
    ParamSample s;
    s.pd = rng.uniform(g.pd_lo, g.pd_hi);
    s.alpha = rng.uniform(g.alpha_lo, g.alpha_hi);
    s.params.inertia_h = rng.uniform(g.h_lo, g.h_hi);
    s.params.damping_df = rng.uniform(g.df_lo, g.df_hi);
    s.tg = rng.uniform(g.tg_lo, g.tg_hi);
    s.params.droop_inv_r = 1.0 / rng.uniform(g.r_lo, g.r_hi);
    return s;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

bool CampaignReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CampaignCheck& c) { return c.pass; });
}

const CampaignCheck& CampaignReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named '" + name + "'");
}

CampaignReport run_campaign(const CampaignOptions& o) {
    if (o.n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    CampaignReport r;
    r.kind = o.kind;
    r.n_samples = o.n_samples;
    r.seed = o.seed;
    switch (o.kind) {
        case CampaignKind::SpectralBound: spectral(r, o); break;
        case CampaignKind::TrackingError: tracking(r, o); break;
        case CampaignKind::GrComparison: gr_comparison(r, o); break;
        case CampaignKind::ModelingError: modeling_error(r, o); break;
    }
    return r;
}

void write_samples_csv(std::ostream& os, const CampaignReport& r) {
    for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << csv_field(r.columns[c]);
    os << "\r\n";
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_number(row[c]);
        os << "\r\n";
    }
}

void write_histogram_csv(std::ostream& os, const CampaignReport& r) {
    os << "metric,bin_lo,bin_hi,count\r\n";
    for (std::size_t b = 0; b < r.hist_counts.size(); ++b)
        os << csv_field(r.hist_metric) << ',' << csv_number(r.hist_edges[b]) << ','
           << csv_number(r.hist_edges[b + 1]) << ',' << r.hist_counts[b] << "\r\n";
}

std::string summary_json(const CampaignReport& r) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(r.kind);
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["passed"] = r.passed();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation},
                          {"bound", c.bound}, {"pass", c.pass}});
    auto& stats = j["stats"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.stats) stats[k] = v;
    j["failed_samples"] = r.failures.size();
    auto& f = j["failures"] = nlohmann::ordered_json::array();
    for (const auto& [i, msg] : r.failures) f.push_back({{"index", i}, {"error", msg}});
    return j.dump(2) + "\n";
}

std::vector<std::string> write_campaign(const std::string& dir, const CampaignReport& r) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string base = std::string(to_string(r.kind));
    std::vector<std::string> files{(fs::path(dir) / (base + "_samples.csv")).string(),
                                   (fs::path(dir) / (base + "_histogram.csv")).string(),
                                   (fs::path(dir) / (base + "_summary.json")).string()};
    std::ofstream a(files[0], std::ios::binary), b(files[1], std::ios::binary), c(files[2], std::ios::binary);
    if (!a || !b || !c) throw std::runtime_error("cannot write campaign files in " + dir);
    write_samples_csv(a, r);
    write_histogram_csv(b, r);
    c << summary_json(r);
    return files;
}

}  // namespace windffs
