#pragma once

// Small seeded generators for property tests.

#include "cloudstore/core/series.hpp"
#include "cloudstore/core/tariff.hpp"
#include "cloudstore/household.hpp"

#include <random>
#include <string>
#include <vector>

namespace cstest {

using namespace cloudstore;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
    double normal(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(rng_); }

    std::vector<double> values(std::size_t n, double lo, double hi)
    {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    HourlySeries series(std::size_t n, double lo, double hi, Unit unit, Hour start = make_hour(2010, 8, 2))
    {
        return {start, values(n, lo, hi), unit};
    }

    /// Sum of random-walk-like signed commands, roughly what an aggregate schedule looks like.
    HourlySeries command(std::size_t n, double scale, Hour start = make_hour(2010, 8, 2))
    {
        std::vector<double> v(n);
        for (std::size_t t = 0; t < n; ++t) {
            double daily = std::sin(6.283185307179586 * static_cast<double>(t % 24) / 24.0);
            v[t] = scale * (daily + 0.7 * normal());
        }
        return {start, std::move(v), Unit::kW};
    }

    /// Two-level TOU price series with a random daily peak window.
    PriceSeries two_level_prices(std::size_t n, Hour start, bool zero_injection = true)
    {
        double off = uniform(0.10, 0.30);
        double peak = off + uniform(0.0, 0.25);
        long first = integer(0, 20);
        long len = integer(1, 6);
        double inj = zero_injection ? 0.0 : uniform(0.0, off);
        std::vector<double> buy(n), sell(n, inj);
        for (std::size_t t = 0; t < n; ++t) {
            long h = static_cast<long>((t + hour_of_day(start)) % 24);
            buy[t] = (h >= first && h < first + len) ? peak : off;
        }
        return {HourlySeries(start, std::move(buy), Unit::UsdPerKWh), HourlySeries(start, std::move(sell), Unit::UsdPerKWh)};
    }

    household::HouseholdProfile profile(std::size_t n, bool with_pv, Hour start = make_hour(2010, 8, 2))
    {
        std::vector<double> load(n), pv(n, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            long h = static_cast<long>((t + hour_of_day(start)) % 24);
            load[t] = uniform(0.2, 1.0) + (h >= 17 && h <= 21 ? uniform(0.5, 2.0) : 0.0);
            if (with_pv && h >= 8 && h <= 17) pv[t] = uniform(0.0, 4.0);
        }
        return {"G" + std::to_string(integer(0, 99999)), HourlySeries(start, std::move(load), Unit::kWh),
                HourlySeries(start, std::move(pv), Unit::kWh), "Z"};
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace cstest
