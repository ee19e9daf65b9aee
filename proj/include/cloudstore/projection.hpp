#pragma once

#include "cloudstore/core/battery.hpp"
#include "cloudstore/core/series.hpp"

#include <algorithm>
#include <vector>

namespace cloudstore::projection {

/// Whole-battery bounds: SoC band [0, capacity], rate limit `rate` every step.
struct ConstantBounds {
    double capacity;
    double rate;

    double soc_min(std::size_t) const { return 0.0; }
    double soc_max(std::size_t) const { return capacity; }
    double rate_limit(std::size_t) const { return rate; }
    double physical_rate() const { return rate; }
};

/// Myopic projection of `command` onto per-step bounds.
///
/// Each step clamps the command to the rate limit, then clamps the resulting SoC into the
/// band. If the SoC carried in from the previous step already lies outside the band, it is
/// first moved to the nearest band edge (the higher-priority service acts) and the
/// remaining action is limited so the total stays within the physical rate. Every
/// deviation from the command, correction included, shows up as mismatch.
template <class Bounds>
DispatchResult follow(const HourlySeries& command, double initial_soc, const Bounds& bounds)
{
    const std::size_t horizon = command.size();
    std::vector<double> schedule(horizon);
    std::vector<double> soc(horizon);
    std::vector<double> mismatch(horizon);
    const double physical = bounds.physical_rate();
    double level = initial_soc;
    for (std::size_t t = 0; t < horizon; ++t) {
        const double lo = bounds.soc_min(t);
        const double hi = bounds.soc_max(t);
        const double limit = bounds.rate_limit(t);
        const double cmd = command[t];
        double action;
        double next;
        if (level >= lo && level <= hi) {
            action = std::clamp(cmd, -limit, limit);
            next = level + action;
            if (next > hi) {
                next = hi;
                action = hi - level;
            } else if (next < lo) {
                next = lo;
                action = lo - level;
            }
        } else {
            const double base = level > hi ? hi : lo;
            const double correction = base - level;
            const double up = std::max(0.0, std::min(limit, physical - correction));
            const double down = std::min(0.0, std::max(-limit, -physical - correction));
            next = std::clamp(base + std::clamp(cmd, down, up), lo, hi);
            action = next - level;
        }
        schedule[t] = action;
        soc[t] = next;
        mismatch[t] = cmd - action;
        level = next;
    }
    return DispatchResult{initial_soc, HourlySeries(command.start(), std::move(schedule), Unit::kW),
                          HourlySeries(command.start(), std::move(soc), Unit::kWh),
                          HourlySeries(command.start(), std::move(mismatch), Unit::kW)};
}

}  // namespace cloudstore::projection
