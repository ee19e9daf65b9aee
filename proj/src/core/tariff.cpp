#include "cloudstore/core/tariff.hpp"

#include "cloudstore/core/errors.hpp"

#include <cmath>

namespace cloudstore {

bool Season::contains(MonthDay md) const
{
    if (first <= last) {
        return first <= md && md <= last;
    }
    return md >= first || md <= last;
}

namespace {

bool valid_month_day(MonthDay md)
{
    using namespace std::chrono;
    // 2012 is a leap year, so Feb 29 is accepted.
    return year_month_day{year{2012}, month{md.month}, day{md.day}}.ok();
}

}  // namespace

Tariff::Tariff(std::string name, std::vector<Season> seasons, PeakWindow peak_hours, bool weekend_holiday_flat,
               double injection_price, HolidayCalendar holidays)
    : name_(std::move(name)),
      seasons_(std::move(seasons)),
      peak_hours_(peak_hours),
      weekend_holiday_flat_(weekend_holiday_flat),
      injection_price_(injection_price),
      holidays_(std::move(holidays))
{
    if (seasons_.empty()) {
        throw ConfigError("tariff '" + name_ + "' has no seasons");
    }
    if (peak_hours_.start_hour > peak_hours_.end_hour || peak_hours_.end_hour > 24) {
        throw ConfigError("tariff '" + name_ + "': invalid peak window");
    }
    if (!std::isfinite(injection_price_) || injection_price_ < 0.0) {
        throw ConfigError("tariff '" + name_ + "': injection price must be >= 0");
    }
    for (const auto& s : seasons_) {
        if (!valid_month_day(s.first) || !valid_month_day(s.last)) {
            throw ConfigError("season '" + s.name + "': invalid month/day");
        }
        if (!(s.off_peak >= 0.0) || !(s.peak >= 0.0) || !std::isfinite(s.peak)) {
            throw ConfigError("season '" + s.name + "': prices must be finite and >= 0");
        }
        if (s.peak < s.off_peak) {
            throw ConfigError("season '" + s.name + "': peak price below off-peak price");
        }
        if (s.off_peak < injection_price_) {
            throw ConfigError("season '" + s.name + "': purchase price below injection price");
        }
    }
    // No day of a leap year may fall in two seasons.
    for (unsigned m = 1; m <= 12; ++m) {
        for (unsigned d = 1; d <= 31; ++d) {
            MonthDay md{m, d};
            if (!valid_month_day(md)) continue;
            int hits = 0;
            for (const auto& s : seasons_) hits += s.contains(md) ? 1 : 0;
            if (hits > 1) {
                throw ConfigError("tariff '" + name_ + "': seasons overlap on " + std::to_string(m) + "/" +
                                  std::to_string(d));
            }
        }
    }
}

Tariff Tariff::pge_etou_b()
{
    return Tariff("PG&E E-TOU Option B",
                  {Season{"summer", {6, 1}, {9, 30}, 0.25511, 0.35817},
                   Season{"winter", {10, 1}, {5, 31}, 0.20191, 0.22071}},
                  PeakWindow{16, 21}, true, 0.0);
}

Tariff Tariff::flat(double price, double injection_price)
{
    return Tariff("flat", {Season{"all", {1, 1}, {12, 31}, price, price}}, PeakWindow{0, 0}, false,
                  injection_price, HolidayCalendar::none());
}

const Season& Tariff::season_at(Hour h) const
{
    auto ymd = date_of(h);
    MonthDay md{static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day())};
    for (const auto& s : seasons_) {
        if (s.contains(md)) return s;
    }
    throw ConfigError("tariff '" + name_ + "' does not cover " + format_date(ymd));
}

bool Tariff::is_peak(Hour h) const
{
    if (!peak_hours_.contains(hour_of_day(h))) return false;
    if (weekend_holiday_flat_ && (is_weekend(h) || holidays_.is_holiday(h))) return false;
    return true;
}

double Tariff::purchase_price(Hour h) const
{
    const Season& s = season_at(h);
    return is_peak(h) ? s.peak : s.off_peak;
}

PriceSeries expand_tariff(const Tariff& tariff, Hour start, std::size_t hours)
{
    if (hours == 0) {
        throw DomainError("expand_tariff: hours must be >= 1");
    }
    std::vector<double> purchase(hours);
    for (std::size_t i = 0; i < hours; ++i) {
        purchase[i] = tariff.purchase_price(start + std::chrono::hours{static_cast<long>(i)});
    }
    return PriceSeries{HourlySeries(start, std::move(purchase), Unit::UsdPerKWh),
                       HourlySeries::constant(start, hours, tariff.injection_price(), Unit::UsdPerKWh)};
}

}  // namespace cloudstore
