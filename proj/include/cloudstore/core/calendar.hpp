#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace cloudstore {

/// Hour-aligned UTC-free wall-clock timestamp. The whole toolkit runs on a 1 h timebase.
using Hour = std::chrono::sys_time<std::chrono::hours>;

inline constexpr std::size_t kHoursPerYear = 8760;

Hour make_hour(int year, unsigned month, unsigned day, unsigned hour = 0);

std::chrono::year_month_day date_of(Hour h);
unsigned hour_of_day(Hour h);
bool is_weekend(Hour h);

/// "YYYY-MM-DDTHH:MM:SS"
std::string format_hour(Hour h);

/// Accepts "YYYY-MM-DD[T| ]HH[:MM[:SS]][Z]"; minutes and seconds must be zero.
Hour parse_hour(std::string_view text);

class HolidayCalendar {
public:
    /// Fixed-date US federal holidays (New Year, Juneteenth from 2021, Independence Day,
    /// Veterans Day, Christmas) for any year.
    static HolidayCalendar us_fixed_federal();
    static HolidayCalendar none();
    explicit HolidayCalendar(std::vector<std::chrono::year_month_day> dates);

    bool is_holiday(std::chrono::year_month_day date) const;
    bool is_holiday(Hour h) const { return is_holiday(date_of(h)); }
    bool uses_default_rule() const { return rule_; }
    const std::vector<std::chrono::year_month_day>& dates() const { return dates_; }

private:
    HolidayCalendar() = default;
    bool rule_ = false;
    std::vector<std::chrono::year_month_day> dates_;
};

std::chrono::year_month_day parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day date);

}  // namespace cloudstore
