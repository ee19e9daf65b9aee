#pragma once

#include "cloudstore/core/series.hpp"

#include <string>
#include <vector>

namespace cloudstore {

struct BatterySpec {
    double capacity = 0.0;     // kWh
    double rate = 0.0;         // kW
    double initial_soc = 0.0;  // kWh

    /// DomainError unless capacity >= 0, rate >= 0, 0 <= initial_soc <= capacity.
    void validate() const;
};

/// Battery schedule (+ charge, - discharge), end-of-step SoC and per-step mismatch
/// between the command being followed and what the battery did.
struct DispatchResult {
    double initial_soc = 0.0;
    HourlySeries schedule;
    HourlySeries soc;
    HourlySeries mismatch;
};

inline constexpr double kDispatchTolerance = 1e-9;

/// Empty when the dispatch satisfies the SoC recursion and the capacity/rate bounds.
std::vector<std::string> dispatch_violations(const DispatchResult& d, const BatterySpec& battery,
                                             double tol = kDispatchTolerance);

}  // namespace cloudstore
