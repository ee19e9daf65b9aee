#include "cloudstore/core/series.hpp"

#include "cloudstore/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cloudstore {

std::string_view to_string(Unit unit)
{
    switch (unit) {
    case Unit::kWh: return "kWh";
    case Unit::kW: return "kW";
    case Unit::UsdPerKWh: return "$/kWh";
    case Unit::Usd: return "$";
    }
    return "?";
}

Unit parse_unit(std::string_view text)
{
    if (text == "kWh") return Unit::kWh;
    if (text == "kW") return Unit::kW;
    if (text == "$/kWh") return Unit::UsdPerKWh;
    if (text == "$") return Unit::Usd;
    throw ParseError("unknown unit '" + std::string(text) + "'");
}

HourlySeries::HourlySeries(Hour start, std::vector<double> values, Unit unit)
    : start_(start), values_(std::move(values)), unit_(unit)
{
    if (values_.empty()) {
        throw DomainError("hourly series must hold at least one value");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("non-finite value at step " + std::to_string(i));
        }
    }
}

HourlySeries HourlySeries::constant(Hour start, std::size_t hours, double value, Unit unit)
{
    return {start, std::vector<double>(hours, value), unit};
}

double HourlySeries::sum() const
{
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double HourlySeries::min() const
{
    return *std::min_element(values_.begin(), values_.end());
}

double HourlySeries::max() const
{
    return *std::max_element(values_.begin(), values_.end());
}

HourlySeries HourlySeries::scaled(double factor) const
{
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [factor](double v) { return v * factor; });
    return {start_, std::move(out), unit_};
}

void require_aligned(const HourlySeries& a, const HourlySeries& b, std::string_view what)
{
    if (!a.aligned_with(b)) {
        throw AlignmentError(std::string(what) + ": series misaligned (" + format_hour(a.start()) + " x" +
                             std::to_string(a.size()) + " vs " + format_hour(b.start()) + " x" +
                             std::to_string(b.size()) + ")");
    }
}

namespace {

bool is_energy(Unit u) { return u == Unit::kWh || u == Unit::kW; }

Unit combined_unit(Unit a, Unit b, SeriesOp op)
{
    if (op == SeriesOp::Mul) {
        if ((is_energy(a) && b == Unit::UsdPerKWh) || (a == Unit::UsdPerKWh && is_energy(b))) {
            return Unit::Usd;
        }
    } else {
        if (a == b) return a;
        if (is_energy(a) && is_energy(b)) return Unit::kWh;
    }
    throw UnitError("cannot combine " + std::string(to_string(a)) + " with " + std::string(to_string(b)));
}

}  // namespace

HourlySeries align_and_combine(const HourlySeries& a, const HourlySeries& b, SeriesOp op)
{
    require_aligned(a, b, "align_and_combine");
    Unit unit = combined_unit(a.unit(), b.unit(), op);
    std::vector<double> out(a.size());
    auto av = a.values();
    auto bv = b.values();
    switch (op) {
    case SeriesOp::Add: std::transform(av.begin(), av.end(), bv.begin(), out.begin(), std::plus<>{}); break;
    case SeriesOp::Sub: std::transform(av.begin(), av.end(), bv.begin(), out.begin(), std::minus<>{}); break;
    case SeriesOp::Mul: std::transform(av.begin(), av.end(), bv.begin(), out.begin(), std::multiplies<>{}); break;
    }
    return {a.start(), std::move(out), unit};
}

}  // namespace cloudstore
