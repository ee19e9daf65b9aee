#include "cloudstore/core/io.hpp"

#include "cloudstore/core/errors.hpp"

#include <charconv>
#include <cstdio>
#include <optional>
#include <fstream>
#include <sstream>

namespace cloudstore::io {

namespace fs = std::filesystem;

std::string format_number(double v)
{
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& source, std::size_t line)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(source, line, "invalid number '" + std::string(text) + "'");
    }
    return value;
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, std::string_view text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + path.string() + "'");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw ConfigError("write failed for '" + path.string() + "'");
    }
    fs::rename(tmp, path);
}

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    }
    return out;
}

}  // namespace

CsvReader::CsvReader(const fs::path& path) : source_(path.string()), content_(read_text(path))
{
    auto nl = content_.find('\n');
    std::string_view first = std::string_view(content_).substr(0, nl);
    if (first.empty() || first == "\r") {
        throw ParseError(source_, 1, "missing header");
    }
    for (auto f : split(first)) header_.emplace_back(f);
    body_offset_ = nl == std::string::npos ? content_.size() : nl + 1;
}

bool CsvReader::has_column(std::string_view name) const
{
    for (const auto& h : header_) {
        if (h == name) return true;
    }
    return false;
}

std::size_t CsvReader::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    throw ParseError(source_, 1, "missing column '" + std::string(name) + "'");
}

void CsvReader::for_each(const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row)
{
    std::string_view body = std::string_view(content_).substr(body_offset_);
    std::size_t line_no = 1;
    while (!body.empty()) {
        ++line_no;
        auto nl = body.find('\n');
        std::string_view line = body.substr(0, nl);
        body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (fields.size() != header_.size()) {
            throw ParseError(source_, line_no,
                             "expected " + std::to_string(header_.size()) + " fields, got " + std::to_string(fields.size()));
        }
        row(fields, line_no);
    }
}

HourlySeries read_series_csv(const fs::path& path)
{
    CsvReader csv(path);
    auto ts_col = csv.column("timestamp");
    auto v_col = csv.column("value");
    auto u_col = csv.column("unit");
    std::vector<double> values;
    Hour start{};
    Hour expected{};
    std::optional<Unit> unit;
    csv.for_each([&](const auto& f, std::size_t line) {
        Hour h;
        Unit u;
        try {
            h = parse_hour(f[ts_col]);
            u = parse_unit(f[u_col]);
        } catch (const ParseError& e) {
            throw ParseError(csv.source(), line, e.what());
        }
        if (values.empty()) {
            start = h;
            unit = u;
        } else if (h != expected) {
            throw ParseError(csv.source(), line, "timestamps must be consecutive hours");
        } else if (u != *unit) {
            throw ParseError(csv.source(), line, "unit changes within series");
        }
        values.push_back(parse_double(f[v_col], csv.source(), line));
        expected = h + std::chrono::hours{1};
    });
    if (values.empty()) {
        throw ParseError(csv.source(), 1, "series has no rows");
    }
    return HourlySeries(start, std::move(values), *unit);
}

std::string series_csv(const HourlySeries& series)
{
    std::string out = "timestamp,value,unit\n";
    std::string unit(to_string(series.unit()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_hour(series.time_at(i));
        out += ',';
        out += format_number(series[i]);
        out += ',';
        out += unit;
        out += '\n';
    }
    return out;
}

void write_series_csv(const fs::path& path, const HourlySeries& series)
{
    write_text(path, series_csv(series));
}

namespace {

MonthDay parse_month_day(const std::string& text)
{
    unsigned m = 0, d = 0;
    if (text.size() != 5 || text[2] != '-' || std::sscanf(text.c_str(), "%2u-%2u", &m, &d) != 2) {
        throw ConfigError("season dates must be 'MM-DD', got '" + text + "'");
    }
    return {m, d};
}

std::string format_month_day(MonthDay md)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02u-%02u", md.month, md.day);
    return buf;
}

}  // namespace

Tariff tariff_from_json(const json& j)
{
    try {
        std::vector<Season> seasons;
        for (const auto& s : j.at("seasons")) {
            seasons.push_back(Season{s.value("name", std::string{}), parse_month_day(s.at("start").get<std::string>()),
                                     parse_month_day(s.at("end").get<std::string>()), s.at("off_peak").get<double>(),
                                     s.at("peak").get<double>()});
        }
        const auto& ph = j.at("peak_hours");
        PeakWindow window{ph.at("start").get<unsigned>(), ph.at("end").get<unsigned>()};
        HolidayCalendar holidays = HolidayCalendar::us_fixed_federal();
        if (j.contains("holidays")) {
            std::vector<std::chrono::year_month_day> dates;
            for (const auto& d : j.at("holidays")) dates.push_back(parse_date(d.get<std::string>()));
            holidays = HolidayCalendar(std::move(dates));
        }
        return Tariff(j.value("name", std::string{"tariff"}), std::move(seasons), window,
                      j.value("weekend_holiday_flat", true), j.value("injection_price", 0.0), std::move(holidays));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("tariff JSON: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("tariff JSON: ") + e.what());
    }
}

json tariff_to_json(const Tariff& t)
{
    json seasons = json::array();
    for (const auto& s : t.seasons()) {
        seasons.push_back({{"name", s.name},
                           {"start", format_month_day(s.first)},
                           {"end", format_month_day(s.last)},
                           {"off_peak", s.off_peak},
                           {"peak", s.peak}});
    }
    json j = {{"name", t.name()},
              {"seasons", seasons},
              {"peak_hours", {{"start", t.peak_hours().start_hour}, {"end", t.peak_hours().end_hour}}},
              {"weekend_holiday_flat", t.weekend_holiday_flat()},
              {"injection_price", t.injection_price()}};
    if (!t.holidays().uses_default_rule()) {
        json dates = json::array();
        for (auto d : t.holidays().dates()) dates.push_back(format_date(d));
        j["holidays"] = dates;
    }
    return j;
}

json load_json(const fs::path& path)
{
    auto text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

Tariff load_tariff(const fs::path& path)
{
    return tariff_from_json(load_json(path));
}

}  // namespace cloudstore::io
