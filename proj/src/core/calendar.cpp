#include "cloudstore/core/calendar.hpp"

#include "cloudstore/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace cloudstore {

using namespace std::chrono;

namespace {

int parse_int(std::string_view text, std::string_view whole)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("invalid timestamp '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Hour make_hour(int year, unsigned month, unsigned day, unsigned hour)
{
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok() || hour > 23) {
        throw DomainError("invalid calendar date/hour");
    }
    return Hour{sys_days{ymd}.time_since_epoch()} + hours{hour};
}

year_month_day date_of(Hour h)
{
    return year_month_day{floor<days>(h)};
}

unsigned hour_of_day(Hour h)
{
    return static_cast<unsigned>((h - floor<days>(h)).count());
}

bool is_weekend(Hour h)
{
    weekday wd{floor<days>(h)};
    return wd == Saturday || wd == Sunday;
}

std::string format_date(year_month_day d)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::string format_hour(Hour h)
{
    char buf[32];
    auto d = date_of(h);
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:00:00", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()), hour_of_day(h));
    return buf;
}

year_month_day parse_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ParseError("invalid date '" + std::string(text) + "'");
    }
    int y = parse_int(text.substr(0, 4), text);
    int m = parse_int(text.substr(5, 2), text);
    int d = parse_int(text.substr(8, 2), text);
    year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                       std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw ParseError("invalid date '" + std::string(text) + "'");
    }
    return ymd;
}

Hour parse_hour(std::string_view text)
{
    std::string_view s = text;
    if (!s.empty() && s.back() == 'Z') {
        s.remove_suffix(1);
    }
    if (s.size() < 13 || (s[10] != 'T' && s[10] != ' ')) {
        throw ParseError("invalid timestamp '" + std::string(text) + "'");
    }
    auto ymd = parse_date(s.substr(0, 10));
    int hh = parse_int(s.substr(11, 2), text);
    std::string_view rest = s.substr(13);
    while (!rest.empty()) {
        if (rest.size() < 3 || rest[0] != ':' || parse_int(rest.substr(1, 2), text) != 0) {
            throw ParseError("timestamp '" + std::string(text) + "' is not hour-aligned");
        }
        rest.remove_prefix(3);
    }
    if (hh < 0 || hh > 23) {
        throw ParseError("invalid hour in timestamp '" + std::string(text) + "'");
    }
    return Hour{sys_days{ymd}.time_since_epoch()} + hours{hh};
}

HolidayCalendar HolidayCalendar::us_fixed_federal()
{
    HolidayCalendar cal;
    cal.rule_ = true;
    return cal;
}

HolidayCalendar HolidayCalendar::none()
{
    return HolidayCalendar{};
}

HolidayCalendar::HolidayCalendar(std::vector<year_month_day> dates) : dates_(std::move(dates))
{
    std::sort(dates_.begin(), dates_.end());
    dates_.erase(std::unique(dates_.begin(), dates_.end()), dates_.end());
}

bool HolidayCalendar::is_holiday(year_month_day date) const
{
    if (rule_) {
        unsigned m = static_cast<unsigned>(date.month());
        unsigned d = static_cast<unsigned>(date.day());
        if ((m == 1 && d == 1) || (m == 7 && d == 4) || (m == 11 && d == 11) || (m == 12 && d == 25)) {
            return true;
        }
        return m == 6 && d == 19 && static_cast<int>(date.year()) >= 2021;
    }
    return std::binary_search(dates_.begin(), dates_.end(), date);
}

}  // namespace cloudstore
