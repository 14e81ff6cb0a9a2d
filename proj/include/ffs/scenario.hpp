#pragma once

// Scenario description and the fixed-step simulation loop tying the swing
// equation, governors, wind farms and their controllers together.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ffs/controllers.hpp"
#include "ffs/core_model.hpp"
#include "ffs/governors.hpp"
#include "ffs/trajectory.hpp"
#include "ffs/windfarm.hpp"

namespace windffs {

enum class ControllerKind { None, ProposedTiPi, PiPrototype, ModelBased, VicFixed, VicAdaptive, Sic };
enum class GainMode { Fixed, Adaptive };

const char* to_string(ControllerKind kind);
const char* to_string(GainMode mode);
ControllerKind controller_from_string(const std::string& name);
GainMode gain_mode_from_string(const std::string& name);

struct GeneratorUnit {
    Governor governor;
    double s_mva = 200.0;
    double h = 4.0;

    bool operator==(const GeneratorUnit&) const = default;
};

/// Rating and inertia taken from the IEEE parameter blocks when present.
GeneratorUnit make_unit(const Governor& gov, double s_mva = 200.0, double h = 4.0);

struct FarmSpec {
    int n_wt = 20;
    double v_w = 9.0;
    TurbineParams turbine{};
    ControllerKind controller = ControllerKind::ProposedTiPi;
    GainMode gain_mode = GainMode::Fixed;

    double rated_mw() const { return n_wt * turbine.rated_mw; }

    bool operator==(const FarmSpec&) const = default;
};

struct TrajectoryConfig {
    // Exactly one is used: alpha when positive, else the nadir target.
    double alpha = 0.0;
    double target_nadir_hz = 0.0;

    bool operator==(const TrajectoryConfig&) const = default;
};

struct ModelBasedConfig {
    double error_level = 0.0;
    std::uint64_t seed = 1;
    bool include_droop = true;

    bool operator==(const ModelBasedConfig&) const = default;
};

struct ControllerConfig {
    std::optional<PiGains> gains;  // designed from the system when absent
    double estimator_window = 0.3;
    std::optional<double> vic_k_df;  // 2 H_wt when absent
    double vic_k_pf = 20.0;
    SicProfile sic{};
    ModelBasedConfig model_based{};
    bool exit_strategy = true;

    bool operator==(const ControllerConfig&) const = default;
};

struct SimConfig {
    double dt = 1e-3;
    double t_end = 60.0;
    std::uint64_t seed = 1;
    int record_every = 1;

    bool operator==(const SimConfig&) const = default;
};

struct Scenario {
    std::string name = "scenario";
    SystemParams system{};
    std::vector<GeneratorUnit> generators;
    std::vector<FarmSpec> farms;
    std::optional<Disturbance> disturbance;
    TrajectoryConfig trajectory{};
    ControllerConfig controller{};
    SimConfig sim{};

    /// Throws std::invalid_argument listing the first inconsistency.
    void validate() const;

    /// alpha after resolving a nadir target against the nominal deficit.
    double resolved_alpha() const;
    /// Deficit on system base: magnitude for surges, pre-trip output for trips.
    double deficit_pu() const;

    bool operator==(const Scenario&) const = default;
};

struct FarmSeries {
    std::vector<double> omega;
    std::vector<double> p;
    std::vector<int> mode;
};

struct FarmSummary {
    double omega0 = 0.0;
    double p0 = 0.0;
    double c = 1.0;
    double omega_min_seen = 0.0;
    double p_peak = 0.0;        // max farm pu
    double dp_peak = 0.0;       // max (P - P0), farm pu
    double omega_final = 0.0;
    double p_final = 0.0;
    std::optional<double> exit_time;
    bool hit_omega_min = false;
    bool hit_omega_max = false;
    double energy_audit_rel = 0.0;
};

struct SimEvent {
    double t;
    std::string what;
};

struct SimResult {
    double dt = 0.0;  // spacing of the recorded samples
    std::vector<double> t;
    std::vector<double> df_pu;
    std::vector<double> rocof_pu;
    std::vector<double> dpm_pu;
    std::vector<double> dpwf_pu;
    std::vector<FarmSeries> farms;
    std::vector<FarmSummary> farm_summary;
    std::vector<SimEvent> events;

    double f_nom = 50.0;
    double onset = 0.0;
    double pd_true = 0.0;
    std::optional<double> pd_hat;
    std::optional<TrajectorySpec> spec;  // built from the estimate
    double nadir_hz = 0.0;
    double nadir_time = 0.0;
    double final_df_hz = 0.0;
    std::optional<double> first_exit;
    std::optional<double> post_exit_min_hz;
    double energy_audit_rel = 0.0;  // worst farm

    std::size_t size() const { return t.size(); }
};

SimResult run_scenario(const Scenario& scenario);

/// Fixed-header CSV of a result.
void write_csv(std::ostream& os, const SimResult& result);
std::string csv_string(const SimResult& result);

/// Designed gains unless the scenario pins them.
PiGains scenario_gains(const Scenario& scenario);

}  // namespace windffs
