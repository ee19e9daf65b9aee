#pragma once

#include "cloudstore/core/calendar.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace cloudstore {

enum class Unit {
    kWh,
    kW,
    UsdPerKWh,
    Usd,
};

std::string_view to_string(Unit unit);
Unit parse_unit(std::string_view text);

/// Fixed-step (1 h) series of finite values with a unit tag.
///
/// At 1 h resolution kWh per step and average kW are numerically the same; the tag
/// records intent and lets arithmetic reject mixing energy with prices.
class HourlySeries {
public:
    HourlySeries(Hour start, std::vector<double> values, Unit unit);

    static HourlySeries constant(Hour start, std::size_t hours, double value, Unit unit);
    static HourlySeries zeros(Hour start, std::size_t hours, Unit unit) { return constant(start, hours, 0.0, unit); }
    static HourlySeries zeros_like(const HourlySeries& s) { return zeros(s.start(), s.size(), s.unit()); }

    Hour start() const { return start_; }
    Hour end() const { return start_ + std::chrono::hours{static_cast<long>(values_.size())}; }
    Hour time_at(std::size_t i) const { return start_ + std::chrono::hours{static_cast<long>(i)}; }
    std::size_t size() const { return values_.size(); }
    Unit unit() const { return unit_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool aligned_with(const HourlySeries& other) const
    {
        return start_ == other.start_ && values_.size() == other.values_.size();
    }

    double sum() const;
    double min() const;
    double max() const;

    HourlySeries with_unit(Unit unit) const { return {start_, values_, unit}; }
    HourlySeries scaled(double factor) const;

    friend bool operator==(const HourlySeries&, const HourlySeries&) = default;

private:
    Hour start_;
    std::vector<double> values_;
    Unit unit_;
};

enum class SeriesOp { Add, Sub, Mul };

/// Throws AlignmentError on mismatched start/length and UnitError on incompatible units.
/// Add/Sub: identical units, or kW with kWh (result kWh). Mul: energy (kWh or kW) with
/// $/kWh, giving $.
HourlySeries align_and_combine(const HourlySeries& a, const HourlySeries& b, SeriesOp op);

inline HourlySeries operator+(const HourlySeries& a, const HourlySeries& b)
{
    return align_and_combine(a, b, SeriesOp::Add);
}

inline HourlySeries operator-(const HourlySeries& a, const HourlySeries& b)
{
    return align_and_combine(a, b, SeriesOp::Sub);
}

void require_aligned(const HourlySeries& a, const HourlySeries& b, std::string_view what);

}  // namespace cloudstore
