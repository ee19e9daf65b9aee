#pragma once

#include "cloudstore/aggregate.hpp"
#include "cloudstore/core/tariff.hpp"
#include "cloudstore/costmodel.hpp"
#include "cloudstore/data.hpp"
#include "cloudstore/household.hpp"
#include "cloudstore/metrics.hpp"
#include "cloudstore/multiservice.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cloudstore::experiment {

namespace fs = std::filesystem;

enum class Mode { NoExternal, External, Multiservice };

std::string_view to_string(Mode mode);
/// ConfigError on anything but no-external, external or multiservice.
Mode parse_mode(std::string_view text);

struct MenuSource {
    fs::path path;                     // JSON menu file; takes precedence when set
    std::vector<double> sizes_kwh{10.0, 20.0, 30.0};
    std::vector<double> ratios_h{2.0, 4.0};
};

struct EnvelopeSource {
    fs::path path;  // envelope CSV; synthetic when empty
    multiservice::EnvelopeStats targets{0.87, 0.05, 1.0};
    multiservice::CongestionCredit credit;
};

struct ExperimentConfig {
    std::uint64_t seed = 42;

    bool synth_cohort = true;
    data::CohortConfig cohort = data::CohortConfig::standard();
    fs::path profiles_dir;  // load.csv (+ optional pv.csv) when synth_cohort is false
    bool cluster = false;
    data::ClusterOptions clustering;

    fs::path tariff_path;
    MenuSource menu;
    costmodel::CostParameters cost;

    Mode mode = Mode::External;
    double ratio = 4.0;
    bool sweep = true;
    std::size_t sweep_points = 42;
    std::optional<double> capacity_kwh;  // fixed CSO battery instead of sweep/min sizing
    EnvelopeSource envelope;

    fs::path output_dir = "out";
};

/// Parses a config object; relative paths resolve against `base_dir`. ConfigError on the
/// first problem found.
ExperimentConfig config_from_json(const io::json& j, const fs::path& base_dir);
ExperimentConfig load_config(const fs::path& path);
io::json config_to_json(const ExperimentConfig& config);

/// Every problem in the config file, without running anything. Empty means valid.
std::vector<std::string> validate_config(const fs::path& path);

Tariff load_tariff_or_default(const fs::path& path);
household::ContractMenu load_menu(const MenuSource& source, const costmodel::CostParameters& cost);
household::ContractMenu read_menu_json(const fs::path& path);

/// `dir/load.csv` meter file plus optional `dir/pv.csv`; skipped households are returned.
data::MeterData load_profiles_dir(const fs::path& dir);
void write_profiles_dir(const fs::path& dir, const std::vector<household::HouseholdProfile>& profiles);

struct DecisionRow {
    std::string id;
    double capacity_kwh = 0.0;
    double rate_kw = 0.0;
    double fee = 0.0;
    double bill = 0.0;
    double baseline_bill = 0.0;
    double savings = 0.0;
};

std::vector<DecisionRow> decision_rows(const std::vector<household::HouseholdDecision>& decisions);
void write_decisions_csv(const fs::path& path, const std::vector<DecisionRow>& rows);
std::vector<DecisionRow> read_decisions_csv(const fs::path& path);

struct DispatchTable {
    HourlySeries command;
    DispatchResult dispatch;
    HourlySeries buy_price;
    HourlySeries sell_price;
};

/// Columns timestamp,aggregate_kw,schedule_kw,soc_kwh,mismatch_kw,buy_price,sell_price.
/// The initial SoC is recovered from the first row.
void write_dispatch_csv(const fs::path& path, const DispatchTable& table);
DispatchTable read_dispatch_csv(const fs::path& path);

struct CsoRequest {
    HourlySeries aggregate_command;
    double revenue = 0.0;
    double virtual_capacity = 0.0;
    HourlySeries buy_price;
    HourlySeries sell_price;
    Mode mode = Mode::External;
    double ratio = 4.0;
    bool sweep = true;
    std::size_t sweep_points = 42;
    std::optional<double> capacity_kwh;
    costmodel::CostParameters cost;
};

struct CsoReport {
    aggregate::CsoOutcome outcome;
    BatterySpec battery;
    std::optional<aggregate::SweepResult> sweep;
    double gain = 0.0;
    double p_block = 0.0;
};

/// No-external: the minimum no-blocking battery, or the given capacity (InfeasibleError
/// if it blocks). External: the best sweep point, or the given capacity.
CsoReport run_cso(const CsoRequest& request);

io::json outcome_json(const CsoRequest& request, const CsoReport& report);
void write_curve_csv(const fs::path& path, const aggregate::SweepResult& sweep);

io::json blocking_stats_json(const metrics::BlockingStats& stats);
std::string histogram_csv(const metrics::BlockingStats& stats);

struct RunSummary {
    fs::path output_dir;
    std::vector<std::string> files;
    CsoReport report;
};

/// Full pipeline into `config.output_dir`. Outputs are staged in a sibling directory and
/// moved into place only when every stage succeeded. Errors name the failing stage.
RunSummary run_experiment(const ExperimentConfig& config, const fs::path& config_path = {});

/// Hex SHA-256 digest of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace cloudstore::experiment
