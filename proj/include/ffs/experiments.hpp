#pragma once

// Reproducible experiment pipelines for the case studies, plus the
// controller comparison table.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ffs/scenario.hpp"

namespace windffs {

/// Secondary frequency drop: the deepest fall (Hz) after the first local
/// minimum of the frequency, i.e. the largest drawdown once recovery began.
double secondary_drop_hz(const SimResult& result);

struct CompareEntry {
    std::string row;     // controller or level
    std::string column;  // disturbance, config or method
    double nadir_hz = 0.0;
    double sfd_hz = 0.0;
};

CompareEntry compare_entry(std::string row, std::string column, const SimResult& result);

struct CompareTable {
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> nadir_hz;  // [row][column]
    std::vector<std::vector<double>> sfd_hz;
    std::optional<double> reference_nadir_hz;
};

/// Arranges entries into a full row x column grid. Throws std::invalid_argument
/// when some row lacks a column present elsewhere, or a cell repeats.
CompareTable compare_table(const std::vector<CompareEntry>& entries,
                           std::optional<double> reference_nadir_hz = std::nullopt);

/// One line per row; per column nadir, SFD and, with a reference, the
/// relative degradation in percent.
void write_compare_csv(std::ostream& os, const CompareTable& table);

const std::vector<std::string>& experiment_ids();

struct ExperimentOptions {
    std::string id;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::size_t samples = 0;  // campaign samples or trials; 0 keeps the desk default
    bool full_scale = false;
    unsigned threads = 0;
};

struct ExperimentCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation;
    bool pass = false;
    bool gating = true;  // informational checks never fail the experiment
};

struct ExperimentReport {
    std::string id;
    std::vector<ExperimentCheck> checks;
    std::vector<std::string> files;
    std::vector<std::string> errors;  // scenarios that failed to run

    bool passed() const;
};

/// Runs the pipeline, writes its CSV and summary.json under out_dir/id.
ExperimentReport run_experiment(const ExperimentOptions& options);

}  // namespace windffs
