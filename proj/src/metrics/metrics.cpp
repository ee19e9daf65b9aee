#include "cloudstore/metrics.hpp"

#include "cloudstore/core/errors.hpp"
#include "cloudstore/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cloudstore::metrics {

double multiplexing_gain(const ServiceAllocation& alloc)
{
    if (alloc.services.empty()) throw DomainError("multiplexing_gain: no services");
    double total = 0.0;
    for (const auto& s : alloc.services) {
        if (!(s.allocated_capacity >= 0.0)) throw DomainError("multiplexing_gain: negative allocation");
        total += s.allocated_capacity;
    }
    return multiplexing_gain(total, alloc.physical_capacity);
}

double multiplexing_gain(double virtual_capacity, double physical_capacity)
{
    if (!(virtual_capacity > 0.0)) throw DomainError("multiplexing_gain: total allocation must be > 0");
    return (virtual_capacity - physical_capacity) / virtual_capacity;
}

double blocking_probability(const HourlySeries& mismatch, double zero_tol)
{
    if (!(zero_tol >= 0.0)) throw DomainError("blocking_probability: tolerance must be >= 0");
    std::size_t blocked = 0;
    for (double m : mismatch.values()) blocked += std::abs(m) > zero_tol ? 1 : 0;
    return static_cast<double>(blocked) / static_cast<double>(mismatch.size());
}

std::string SliceCalendar::slice_of(Hour h) const
{
    bool summer = summer_months.count(static_cast<unsigned>(date_of(h).month())) > 0;
    bool weekend = is_weekend(h) || holidays.is_holiday(h);
    return std::string(summer ? "summer" : "winter") + (weekend ? "-weekend" : "-weekday");
}

namespace {

SliceStats stats_of(const std::vector<double>& values, std::size_t bins, double zero_tol)
{
    SliceStats s;
    s.hours = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    std::size_t blocked = 0;
    for (double v : values) {
        sum += v;
        blocked += std::abs(v) > zero_tol ? 1 : 0;
    }
    s.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size()));
    s.probability = static_cast<double>(blocked) / static_cast<double>(values.size());

    s.histogram.push_back({-zero_tol, zero_tol, values.size() - blocked, true});
    if (blocked == 0) return s;
    double lo = INFINITY, hi = -INFINITY;
    for (double v : values) {
        if (std::abs(v) > zero_tol) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi == lo) {
        s.histogram.push_back({lo, hi, blocked, false});
        return s;
    }
    double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        if (std::abs(v) <= zero_tol) continue;
        auto k = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(k, bins - 1)]++;
    }
    for (std::size_t k = 0; k < bins; ++k) {
        double a = lo + width * static_cast<double>(k);
        double b = k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1);
        s.histogram.push_back({a, b, counts[k], false});
    }
    return s;
}

}  // namespace

BlockingStats blocking_distribution(const HourlySeries& mismatch, const SliceCalendar& calendar, std::size_t bins,
                                    double zero_tol)
{
    if (bins == 0) throw DomainError("blocking_distribution: bins must be >= 1");
    std::vector<double> all(mismatch.values().begin(), mismatch.values().end());
    auto overall = stats_of(all, bins, zero_tol);
    BlockingStats out{overall.probability, overall.mean, overall.std, std::move(overall.histogram), {}};

    std::map<std::string, std::vector<double>> slices;
    for (const char* name : {"summer-weekday", "summer-weekend", "winter-weekday", "winter-weekend"}) {
        slices[name];
    }
    for (std::size_t t = 0; t < mismatch.size(); ++t) {
        slices[calendar.slice_of(mismatch.time_at(t))].push_back(mismatch[t]);
    }
    for (auto& [name, values] : slices) {
        auto s = stats_of(values, bins, zero_tol);
        s.name = name;
        out.by_slice.push_back(std::move(s));
    }
    return out;
}

ConstraintCounts constraint_decomposition(const HourlySeries& command, const BatterySpec& battery, double zero_tol)
{
    battery.validate();
    auto dispatch = projection::follow(command, battery.initial_soc,
                                       projection::ConstantBounds{battery.capacity, battery.rate});
    ConstraintCounts out;
    double level = battery.initial_soc;
    for (std::size_t t = 0; t < command.size(); ++t) {
        double cmd = command[t];
        bool rate = std::abs(cmd) - battery.rate > zero_tol;
        bool full = level + cmd - battery.capacity > zero_tol;
        bool empty = -(level + cmd) > zero_tol;
        out.rate_limited += rate ? 1 : 0;
        out.full += full ? 1 : 0;
        out.empty += empty ? 1 : 0;
        if (rate || full || empty) {
            out.any_cause++;
            out.cause_steps.push_back(t);
        }
        if (std::abs(dispatch.mismatch[t]) > zero_tol) {
            out.blocked++;
            out.blocked_steps.push_back(t);
        }
        level = dispatch.soc[t];
    }
    return out;
}

}  // namespace cloudstore::metrics
