#pragma once

#include "cloudstore/core/series.hpp"
#include "cloudstore/core/tariff.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cloudstore::io {

using nlohmann::json;

/// Shortest round-trip decimal form; deterministic across runs.
std::string format_number(double v);

double parse_double(std::string_view text, const std::string& source, std::size_t line);

/// Minimal reader for the unquoted comma-separated files this toolkit reads and writes.
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path);

    const std::vector<std::string>& header() const { return header_; }
    /// Index of a header column; ParseError if absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;

    /// Calls `row(fields, line_number)` for every non-empty data line. Rows whose field count
    /// differs from the header raise ParseError with the line number.
    void for_each(const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row);

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::string content_;
    std::vector<std::string> header_;
    std::size_t body_offset_ = 0;
};

std::string read_text(const std::filesystem::path& path);
/// Writes via a sibling temporary file then renames.
void write_text(const std::filesystem::path& path, std::string_view text);

/// Header `timestamp,value,unit`.
HourlySeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(const std::filesystem::path& path, const HourlySeries& series);
std::string series_csv(const HourlySeries& series);

Tariff tariff_from_json(const json& j);
json tariff_to_json(const Tariff& t);
Tariff load_tariff(const std::filesystem::path& path);

json load_json(const std::filesystem::path& path);

}  // namespace cloudstore::io
