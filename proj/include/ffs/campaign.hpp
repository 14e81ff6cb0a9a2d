#pragma once

// Seeded Monte-Carlo verification campaigns over the sampling ranges of the
// design study. Samples are independent and evaluated in parallel; reports
// are ordered by sample index so output bytes depend only on the seed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ffs/core_model.hpp"
#include "ffs/scenario.hpp"

namespace windffs {

enum class CampaignKind { SpectralBound, TrackingError, GrComparison, ModelingError };

const char* to_string(CampaignKind kind);
CampaignKind campaign_from_string(const std::string& name);

struct SampleRanges {
    double pd_lo = 0.01, pd_hi = 0.5;
    double alpha_lo = 1.0, alpha_hi = 5.0;
    double h_lo = 0.1, h_hi = 20.0;
    double df_lo = 0.0, df_hi = 15.0;
    double tg_lo = 0.0, tg_hi = 20.0;
    double r_lo = 0.01, r_hi = 1.0;
};

struct ParamSample {
    SystemParams params;
    double pd = 0.0;
    double alpha = 1.0;
    double tg = 0.0;
};

/// Deterministic draw for sample `index`; independent of evaluation order.
ParamSample draw_sample(const SampleRanges& ranges, std::uint64_t seed, std::size_t index);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct CampaignOptions {
    CampaignKind kind = CampaignKind::SpectralBound;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    SampleRanges ranges{};
    // gr_comparison
    std::size_t n_omega = 50;
    // modeling_error: samples are trials per level
    std::vector<double> levels{0.025, 0.05, 0.075, 0.10};
    std::optional<Scenario> base_scenario;  // single-WF IEEEG1 preset when absent
};

struct CampaignCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation;  // how value is compared with bound
    bool pass = false;
};

struct CampaignReport {
    CampaignKind kind = CampaignKind::SpectralBound;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // one per sample, ordered by index
    std::vector<std::pair<std::size_t, std::string>> failures;
    std::vector<CampaignCheck> checks;
    std::vector<std::pair<std::string, double>> stats;  // informational only
    // Histogram of the headline metric.
    std::string hist_metric;
    std::vector<double> hist_edges;
    std::vector<std::size_t> hist_counts;

    bool passed() const;
    const CampaignCheck& check(const std::string& name) const;
};

CampaignReport run_campaign(const CampaignOptions& options);

void write_samples_csv(std::ostream& os, const CampaignReport& report);
void write_histogram_csv(std::ostream& os, const CampaignReport& report);
std::string summary_json(const CampaignReport& report);

/// Writes samples.csv, histogram.csv and summary.json into `dir`.
std::vector<std::string> write_campaign(const std::string& dir, const CampaignReport& report);

}  // namespace windffs
