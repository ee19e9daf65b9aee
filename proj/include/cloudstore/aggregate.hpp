#pragma once

#include "cloudstore/core/battery.hpp"
#include "cloudstore/core/series.hpp"
#include "cloudstore/costmodel.hpp"

#include <span>
#include <vector>

namespace cloudstore::aggregate {

struct CsoScenario {
    HourlySeries aggregate_command;    // kW, sum of household virtual schedules
    BatterySpec battery;
    double ratio = 4.0;                // capacity / rate, h
    HourlySeries external_buy_price;   // $/kWh paid for missing discharge energy
    HourlySeries external_sell_price;  // $/kWh earned for surplus that cannot be stored
    bool allow_external = true;

    /// ConfigError on misaligned series, negative prices or buy < sell.
    void validate() const;
};

struct CsoOutcome {
    DispatchResult dispatch;
    double revenue = 0.0;        // $/yr
    double investment = 0.0;     // $/yr
    double blocking_cost = 0.0;  // $/yr
    double profit = 0.0;         // $/yr
};

/// Elementwise sum of virtual schedules. Parallel over hours; the per-hour sum always runs in
/// household order, so the result does not depend on the thread count.
HourlySeries aggregate_schedules(std::span<const DispatchResult> dispatches);
HourlySeries aggregate_schedules_serial(std::span<const DispatchResult> dispatches);

/// Ideal initial SoC for tracking `command`: -min(0, min_t S_t), S the cumulative command,
/// rounded up so the projection recursion never dips below zero in floating point.
double ideal_initial_soc(const HourlySeries& command);

/// Smallest battery of the given ratio that follows `command` at every step without mismatch.
BatterySpec min_tracking_size(const HourlySeries& command, double ratio);

/// Myopic no-arbitrage projection of the aggregate command onto the battery limits: the
/// battery deviates only when its rate or SoC bounds force it, and by the minimum amount.
/// InfeasibleError if external resources are disallowed and any step is blocked.
DispatchResult project_follow(const CsoScenario& scenario);

/// sum_t buy_t [m_t]- - sell_t [m_t]+ with m the mismatch (command - battery action).
double blocking_cost(const HourlySeries& mismatch, const HourlySeries& buy, const HourlySeries& sell);

/// Scales a horizon total to $/yr (8760 h per year).
double annualize_horizon(double horizon_total, std::size_t hours);

CsoOutcome cso_profit(const CsoScenario& scenario, double revenue, const costmodel::CostParameters& params);

struct SweepPoint {
    BatterySpec battery;
    double investment = 0.0;
    double blocking_cost = 0.0;
    double profit = 0.0;
    double p_block = 0.0;
    double gain = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> curve;
    std::size_t best = 0;  // index of the maximum-profit point, ties toward smaller capacity

    const SweepPoint& best_point() const { return curve.at(best); }
};

struct SweepInputs {
    HourlySeries aggregate_command;
    double revenue = 0.0;           // $/yr
    double virtual_capacity = 0.0;  // kWh, c^v
    double ratio = 4.0;
    HourlySeries buy_price;
    HourlySeries sell_price;
    costmodel::CostParameters cost;
};

/// `points` evenly spaced capacities from 0 to c^v inclusive (default 42: both endpoints and
/// 40 interior points).
std::vector<double> default_sweep_grid(double virtual_capacity, std::size_t points = 42);

/// Profit curve over a sorted capacity grid within [0, c^v]. Each point uses the ideal
/// tracking offset clamped into [0, capacity] as initial SoC. Points run in parallel.
SweepResult sweep_sizes(const SweepInputs& inputs, const std::vector<double>& grid);
SweepResult sweep_sizes_serial(const SweepInputs& inputs, const std::vector<double>& grid);

/// Battery of `capacity` at `ratio` with the clamped ideal initial SoC used by the sweep.
BatterySpec sweep_battery(const HourlySeries& command, double capacity, double ratio);

}  // namespace cloudstore::aggregate
