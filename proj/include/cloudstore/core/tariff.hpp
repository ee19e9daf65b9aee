#pragma once

#include "cloudstore/core/calendar.hpp"
#include "cloudstore/core/series.hpp"

#include <string>
#include <vector>

namespace cloudstore {

struct MonthDay {
    unsigned month = 1;
    unsigned day = 1;

    friend auto operator<=>(const MonthDay&, const MonthDay&) = default;
};

/// Inclusive month/day range; wraps over the new year when `last < first`.
struct Season {
    std::string name;
    MonthDay first;
    MonthDay last;
    double off_peak = 0.0;  // $/kWh
    double peak = 0.0;      // $/kWh

    bool contains(MonthDay md) const;
};

/// Daily peak window [start_hour, end_hour).
struct PeakWindow {
    unsigned start_hour = 16;
    unsigned end_hour = 21;

    bool contains(unsigned hour) const { return hour >= start_hour && hour < end_hour; }
    unsigned length() const { return end_hour - start_hour; }
};

/// Seasonal time-of-use tariff with separate purchase and injection prices.
class Tariff {
public:
    Tariff(std::string name, std::vector<Season> seasons, PeakWindow peak_hours, bool weekend_holiday_flat,
           double injection_price = 0.0, HolidayCalendar holidays = HolidayCalendar::us_fixed_federal());

    /// PG&E E-TOU Option B: Jun-Sep 0.25511/0.35817, Oct-May 0.20191/0.22071, peak 4pm-9pm,
    /// weekends and holidays off-peak, no injection compensation.
    static Tariff pge_etou_b();
    static Tariff flat(double price, double injection_price = 0.0);

    const std::string& name() const { return name_; }
    const std::vector<Season>& seasons() const { return seasons_; }
    PeakWindow peak_hours() const { return peak_hours_; }
    bool weekend_holiday_flat() const { return weekend_holiday_flat_; }
    double injection_price() const { return injection_price_; }
    const HolidayCalendar& holidays() const { return holidays_; }

    /// ConfigError when no season covers the date.
    const Season& season_at(Hour h) const;
    bool is_peak(Hour h) const;
    double purchase_price(Hour h) const;

private:
    std::string name_;
    std::vector<Season> seasons_;
    PeakWindow peak_hours_;
    bool weekend_holiday_flat_;
    double injection_price_;
    HolidayCalendar holidays_;
};

struct PriceSeries {
    HourlySeries purchase;   // p+ ($/kWh)
    HourlySeries injection;  // p- ($/kWh)
};

PriceSeries expand_tariff(const Tariff& tariff, Hour start, std::size_t hours);

}  // namespace cloudstore
