#include "cloudstore/aggregate.hpp"

#include "cloudstore/core/errors.hpp"
#include "cloudstore/core/io.hpp"
#include "cloudstore/metrics.hpp"
#include "cloudstore/projection.hpp"

#include <algorithm>
#include <cmath>

namespace cloudstore::aggregate {

void CsoScenario::validate() const
{
    battery.validate();
    if (!(ratio > 0.0)) throw ConfigError("CSO ratio must be > 0");
    require_aligned(aggregate_command, external_buy_price, "CSO scenario buy price");
    require_aligned(aggregate_command, external_sell_price, "CSO scenario sell price");
    for (std::size_t t = 0; t < aggregate_command.size(); ++t) {
        if (external_sell_price[t] < 0.0 || external_buy_price[t] < external_sell_price[t]) {
            throw ConfigError("CSO prices need 0 <= sell <= buy at " + format_hour(aggregate_command.time_at(t)));
        }
    }
}

namespace {

void check_dispatches(std::span<const DispatchResult> dispatches)
{
    if (dispatches.empty()) throw DomainError("aggregate_schedules: no schedules");
    for (const auto& d : dispatches) {
        require_aligned(dispatches.front().schedule, d.schedule, "aggregate_schedules");
    }
}

}  // namespace

HourlySeries aggregate_schedules_serial(std::span<const DispatchResult> dispatches)
{
    check_dispatches(dispatches);
    const auto& first = dispatches.front().schedule;
    std::vector<double> sum(first.size(), 0.0);
    for (std::size_t t = 0; t < sum.size(); ++t) {
        double acc = 0.0;
        for (const auto& d : dispatches) acc += d.schedule[t];
        sum[t] = acc;
    }
    return {first.start(), std::move(sum), Unit::kW};
}

HourlySeries aggregate_schedules(std::span<const DispatchResult> dispatches)
{
    check_dispatches(dispatches);
    const auto& first = dispatches.front().schedule;
    const long horizon = static_cast<long>(first.size());
    std::vector<double> sum(first.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (long t = 0; t < horizon; ++t) {
        double acc = 0.0;
        for (const auto& d : dispatches) acc += d.schedule[static_cast<std::size_t>(t)];
        sum[static_cast<std::size_t>(t)] = acc;
    }
    return {first.start(), std::move(sum), Unit::kW};
}

namespace {

// Lowest and highest SoC reached from `start` under the projection's own recursion.
std::pair<double, double> level_range(const HourlySeries& command, double start)
{
    double level = start;
    double lowest = start;
    double top = start;
    for (double a : command.values()) {
        level += a;
        lowest = std::min(lowest, level);
        top = std::max(top, level);
    }
    return {lowest, top};
}

}  // namespace

double ideal_initial_soc(const HourlySeries& command)
{
    double start = -level_range(command, 0.0).first;
    // Rounding can leave the shifted path a few ulps below zero; nudge until it is not.
    for (int pass = 0;; ++pass) {
        double lowest = level_range(command, start).first;
        if (lowest >= 0.0) return start;
        if (pass == 1000) throw DomainError("ideal_initial_soc: search did not converge");
        start = std::max(start - lowest, std::nextafter(start, INFINITY));
    }
}

BatterySpec min_tracking_size(const HourlySeries& command, double ratio)
{
    if (!(ratio > 0.0)) throw DomainError("min_tracking_size: ratio must be > 0");
    double start = ideal_initial_soc(command);
    double top = level_range(command, start).second;
    double peak_rate = 0.0;
    for (double a : command.values()) peak_rate = std::max(peak_rate, std::abs(a));
    double capacity = std::max(top, ratio * peak_rate);
    double rate = capacity / ratio;
    if (rate < peak_rate) rate = peak_rate;
    return BatterySpec{capacity, rate, start};
}

DispatchResult project_follow(const CsoScenario& scenario)
{
    scenario.validate();
    const auto& battery = scenario.battery;
    auto result = projection::follow(scenario.aggregate_command, battery.initial_soc,
                                     projection::ConstantBounds{battery.capacity, battery.rate});
    if (!scenario.allow_external) {
        for (std::size_t t = 0; t < result.mismatch.size(); ++t) {
            if (result.mismatch[t] != 0.0) {
                throw InfeasibleError("battery (" + io::format_number(battery.capacity) + " kWh, " + io::format_number(battery.rate) +
                                      " kW) cannot follow the aggregate command at " +
                                      format_hour(result.mismatch.time_at(t)) +
                                      " without external resources");
            }
        }
    }
    return result;
}

double blocking_cost(const HourlySeries& mismatch, const HourlySeries& buy, const HourlySeries& sell)
{
    require_aligned(mismatch, buy, "blocking_cost");
    require_aligned(mismatch, sell, "blocking_cost");
    double cost = 0.0;
    for (std::size_t t = 0; t < mismatch.size(); ++t) {
        double m = mismatch[t];
        if (m < 0.0) {
            cost += buy[t] * -m;
        } else if (m > 0.0) {
            cost -= sell[t] * m;
        }
    }
    return cost;
}

double annualize_horizon(double horizon_total, std::size_t hours)
{
    if (hours == kHoursPerYear) return horizon_total;
    return horizon_total * static_cast<double>(kHoursPerYear) / static_cast<double>(hours);
}

CsoOutcome cso_profit(const CsoScenario& scenario, double revenue, const costmodel::CostParameters& params)
{
    CsoOutcome out{project_follow(scenario), revenue, 0.0, 0.0, 0.0};
    out.investment = costmodel::annual_investment(scenario.battery.capacity, scenario.battery.rate, params);
    out.blocking_cost =
        annualize_horizon(blocking_cost(out.dispatch.mismatch, scenario.external_buy_price, scenario.external_sell_price),
                          scenario.aggregate_command.size());
    out.profit = out.revenue - out.investment - out.blocking_cost;
    return out;
}

std::vector<double> default_sweep_grid(double virtual_capacity, std::size_t points)
{
    if (!(virtual_capacity >= 0.0)) throw DomainError("sweep grid: virtual capacity must be >= 0");
    if (points < 2) throw DomainError("sweep grid needs at least 2 points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = virtual_capacity * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    grid.back() = virtual_capacity;
    return grid;
}

BatterySpec sweep_battery(const HourlySeries& command, double capacity, double ratio)
{
    return BatterySpec{capacity, capacity / ratio, std::clamp(ideal_initial_soc(command), 0.0, capacity)};
}

namespace {

void check_grid(const SweepInputs& in, const std::vector<double>& grid)
{
    if (grid.empty()) throw DomainError("sweep_sizes: empty grid");
    if (!(in.ratio > 0.0)) throw DomainError("sweep_sizes: ratio must be > 0");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > in.virtual_capacity * (1.0 + 1e-12)) {
            throw DomainError("sweep_sizes: grid point outside [0, c^v]");
        }
        if (i > 0 && grid[i] < grid[i - 1]) throw DomainError("sweep_sizes: grid must be sorted");
    }
}

SweepPoint evaluate_point(const SweepInputs& in, double capacity, double ideal_start)
{
    BatterySpec battery{capacity, capacity / in.ratio, std::clamp(ideal_start, 0.0, capacity)};
    CsoScenario scenario{in.aggregate_command, battery, in.ratio, in.buy_price, in.sell_price, true};
    auto outcome = cso_profit(scenario, in.revenue, in.cost);
    SweepPoint p;
    p.battery = battery;
    p.investment = outcome.investment;
    p.blocking_cost = outcome.blocking_cost;
    p.profit = outcome.profit;
    p.p_block = metrics::blocking_probability(outcome.dispatch.mismatch);
    p.gain = in.virtual_capacity > 0.0 ? metrics::multiplexing_gain(in.virtual_capacity, capacity) : 0.0;
    return p;
}

std::size_t argmax_profit(const std::vector<SweepPoint>& curve)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].profit > curve[best].profit) best = i;
    }
    return best;
}

}  // namespace

SweepResult sweep_sizes_serial(const SweepInputs& inputs, const std::vector<double>& grid)
{
    check_grid(inputs, grid);
    double start = ideal_initial_soc(inputs.aggregate_command);
    SweepResult out;
    for (double c : grid) out.curve.push_back(evaluate_point(inputs, c, start));
    out.best = argmax_profit(out.curve);
    return out;
}

SweepResult sweep_sizes(const SweepInputs& inputs, const std::vector<double>& grid)
{
    check_grid(inputs, grid);
    double start = ideal_initial_soc(inputs.aggregate_command);
    SweepResult out;
    out.curve.resize(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(i);
        try {
            out.curve[k] = evaluate_point(inputs, grid[k], start);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    out.best = argmax_profit(out.curve);
    return out;
}

}  // namespace cloudstore::aggregate
