#pragma once

#include "cloudstore/core/battery.hpp"
#include "cloudstore/core/calendar.hpp"
#include "cloudstore/core/series.hpp"

#include <set>
#include <string>
#include <vector>

namespace cloudstore::metrics {

inline constexpr double kZeroTolerance = 1e-6;  // kW; |mismatch| above this counts as blocked

struct ServiceShare {
    std::string name;
    double allocated_capacity = 0.0;  // kWh
};

struct ServiceAllocation {
    std::vector<ServiceShare> services;
    double physical_capacity = 0.0;  // kWh
};

/// (sum of allocated capacities - physical capacity) / sum of allocated capacities.
double multiplexing_gain(const ServiceAllocation& alloc);
double multiplexing_gain(double virtual_capacity, double physical_capacity);

/// Fraction of steps with |mismatch| > zero_tol.
double blocking_probability(const HourlySeries& mismatch, double zero_tol = kZeroTolerance);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    bool zero_bin = false;
};

struct SliceStats {
    std::string name;
    std::size_t hours = 0;
    double probability = 0.0;
    double mean = 0.0;
    double std = 0.0;
    std::vector<HistogramBin> histogram;
};

struct BlockingStats {
    double probability = 0.0;
    double mean = 0.0;  // kW, over all steps
    double std = 0.0;   // kW, population
    std::vector<HistogramBin> histogram;
    std::vector<SliceStats> by_slice;  // summer/winter x weekday/weekend
};

/// Season and day-type slicing. Weekend slices include holidays.
struct SliceCalendar {
    std::set<unsigned> summer_months{6, 7, 8, 9};
    HolidayCalendar holidays = HolidayCalendar::us_fixed_federal();

    std::string slice_of(Hour h) const;
};

/// Statistics of the mismatch series with a dedicated zero bin (|m| <= zero_tol) and `bins`
/// uniform bins over [min, max] of the remaining values.
BlockingStats blocking_distribution(const HourlySeries& mismatch, const SliceCalendar& calendar = {},
                                    std::size_t bins = 50, double zero_tol = kZeroTolerance);

struct ConstraintCounts {
    std::size_t rate_limited = 0;
    std::size_t full = 0;
    std::size_t empty = 0;
    std::size_t blocked = 0;        // |mismatch| > tol
    std::size_t any_cause = 0;      // steps where at least one cause fired
    std::vector<std::size_t> blocked_steps;
    std::vector<std::size_t> cause_steps;
};

/// Replays the myopic projection and classifies each step by the bound it hit: the rate
/// bound, the upper SoC bound (full) or the lower SoC bound (empty). A step may hit several.
ConstraintCounts constraint_decomposition(const HourlySeries& command, const BatterySpec& battery,
                                          double zero_tol = kZeroTolerance);

}  // namespace cloudstore::metrics
