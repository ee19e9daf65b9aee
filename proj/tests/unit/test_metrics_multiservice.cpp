#include "doctest.h"

#include "cloudstore/aggregate.hpp"
#include "cloudstore/core/errors.hpp"
#include "cloudstore/metrics.hpp"
#include "cloudstore/multiservice.hpp"
#include "support/gen.hpp"

#include <algorithm>
#include <filesystem>

using namespace cloudstore;
using namespace cloudstore::metrics;
namespace ms = cloudstore::multiservice;

TEST_SUITE("metrics")
{
TEST_CASE("multiplexing gain examples")
{
    CHECK(multiplexing_gain(5970.0, 5730.0) == doctest::Approx(0.040).epsilon(0.001 / 0.040));
    CHECK(multiplexing_gain(5970.0, 0.0) == 1.0);
    CHECK(multiplexing_gain(5970.0, 5970.0) == 0.0);
    ServiceAllocation alloc{{{"cloud", 400.0}, {"congestion", 200.0}}, 450.0};
    CHECK(multiplexing_gain(alloc) == doctest::Approx(0.25));
    CHECK_THROWS_AS(multiplexing_gain(0.0, 0.0), DomainError);
}

TEST_CASE("blocking probability examples")
{
    Hour t0 = make_hour(2010, 1, 1);
    CHECK(blocking_probability(HourlySeries::zeros(t0, 10, Unit::kW)) == 0.0);
    CHECK(blocking_probability(HourlySeries::constant(t0, 10, -3.0, Unit::kW)) == 1.0);
    CHECK(blocking_probability(HourlySeries(t0, {0.0, 1e-7, 2e-6, -5.0}, Unit::kW)) == 0.5);
}

TEST_CASE("blocking distribution examples")
{
    Hour t0 = make_hour(2010, 1, 1);
    auto z = blocking_distribution(HourlySeries::zeros(t0, 100, Unit::kW));
    CHECK(z.mean == 0.0);
    CHECK(z.std == 0.0);
    REQUIRE(!z.histogram.empty());
    CHECK(z.histogram.front().zero_bin);
    CHECK(z.histogram.front().count == 100);

    auto c = blocking_distribution(HourlySeries::constant(t0, 100, 7.0, Unit::kW));
    CHECK(c.mean == doctest::Approx(7.0));
    CHECK(c.std == doctest::Approx(0.0));
    CHECK(c.probability == 1.0);
}

TEST_CASE("property: histogram counts add up, slices partition the hours")
{
    cstest::Gen gen(29);
    for (int trial = 0; trial < 30; ++trial) {
        auto n = static_cast<std::size_t>(gen.integer(24, 24 * 60));
        Hour start = make_hour(2010, 1, 1) + std::chrono::hours{gen.integer(0, 8000)};
        std::vector<double> v(n);
        for (auto& x : v) x = gen.coin(0.4) ? 0.0 : gen.normal(50.0);
        auto stats = blocking_distribution(HourlySeries(start, v, Unit::kW));
        std::size_t total = 0;
        for (const auto& b : stats.histogram) total += b.count;
        CHECK(total == n);
        CHECK(stats.histogram.size() <= 51);
        std::size_t hours = 0;
        double weighted = 0.0;
        for (const auto& s : stats.by_slice) {
            hours += s.hours;
            weighted += s.probability * static_cast<double>(s.hours);
        }
        CHECK(hours == n);
        CHECK(weighted / static_cast<double>(n) == doctest::Approx(stats.probability));
    }
}

TEST_CASE("slice calendar")
{
    SliceCalendar cal;
    CHECK(cal.slice_of(make_hour(2010, 7, 7, 12)) == "summer-weekday");
    CHECK(cal.slice_of(make_hour(2010, 7, 4, 12)) == "summer-weekend");
    CHECK(cal.slice_of(make_hour(2010, 12, 25, 12)) == "winter-weekend");  // Saturday and holiday
    CHECK(cal.slice_of(make_hour(2011, 1, 3, 12)) == "winter-weekday");
}

TEST_CASE("constraint decomposition examples")
{
    Hour t0 = make_hour(2010, 1, 1);
    auto empty = constraint_decomposition(HourlySeries(t0, {-5.0}, Unit::kW), {100.0, 25.0, 0.0});
    CHECK(empty.empty == 1);
    CHECK(empty.blocked == 1);
    auto rate = constraint_decomposition(HourlySeries(t0, {40.0}, Unit::kW), {100.0, 25.0, 50.0});
    CHECK(rate.rate_limited == 1);
    CHECK(rate.full == 0);
    CHECK(rate.blocked == 1);
    auto fine = constraint_decomposition(HourlySeries(t0, {10.0, -10.0}, Unit::kW), {100.0, 25.0, 50.0});
    CHECK(fine.any_cause == 0);
    CHECK(fine.blocked == 0);
}

TEST_CASE("property: union of causes equals blocked steps")
{
    cstest::Gen gen(37);
    for (int trial = 0; trial < 100; ++trial) {
        auto n = static_cast<std::size_t>(gen.integer(24, 500));
        auto cmd = gen.command(n, gen.uniform(1, 100));
        double cap = gen.uniform(0, 300);
        auto b = aggregate::sweep_battery(cmd, cap, gen.coin() ? 2.0 : 4.0);
        auto c = constraint_decomposition(cmd, b);
        CHECK(c.cause_steps == c.blocked_steps);
        CHECK(c.any_cause == c.blocked);
        auto d = aggregate::project_follow({cmd, b, 4.0, HourlySeries::constant(cmd.start(), n, 0.3, Unit::UsdPerKWh),
                                            HourlySeries::zeros(cmd.start(), n, Unit::UsdPerKWh), true});
        CHECK(static_cast<double>(c.blocked) / static_cast<double>(n) == doctest::Approx(blocking_probability(d.mismatch)));
    }
}
}

TEST_SUITE("multiservice")
{
namespace {

aggregate::CsoScenario follow_scenario(const HourlySeries& cmd, BatterySpec b)
{
    return {cmd, b, 4.0, HourlySeries::constant(cmd.start(), cmd.size(), 0.3, Unit::UsdPerKWh),
            HourlySeries::zeros(cmd.start(), cmd.size(), Unit::UsdPerKWh), true};
}

}  // namespace

TEST_CASE("property: full envelope reproduces project_follow bit for bit")
{
    cstest::Gen gen(51);
    for (int trial = 0; trial < 100; ++trial) {
        auto n = static_cast<std::size_t>(gen.integer(1, 500));
        auto cmd = gen.command(n, gen.uniform(1, 100));
        auto b = aggregate::sweep_battery(cmd, gen.uniform(0, 400), 4.0);
        auto env = ms::ResidualEnvelope::full(b, cmd.start(), n);
        auto a = aggregate::project_follow(follow_scenario(cmd, b));
        auto e = ms::project_follow_envelope(cmd, b, env);
        CHECK(a.schedule == e.schedule);
        CHECK(a.soc == e.soc);
        CHECK(a.mismatch == e.mismatch);
    }
}

TEST_CASE("zero residual window blocks the whole command")
{
    Hour t0 = make_hour(2010, 1, 1);
    BatterySpec b{100.0, 50.0, 50.0};
    std::vector<double> lo(10, 0.0), hi(10, 100.0), rate(10, 50.0);
    for (std::size_t t = 3; t < 7; ++t) {
        lo[t] = 50.0;
        hi[t] = 50.0;
        rate[t] = 0.0;
    }
    ms::ResidualEnvelope env{HourlySeries(t0, lo, Unit::kWh), HourlySeries(t0, hi, Unit::kWh), HourlySeries(t0, rate, Unit::kW)};
    auto cmd = HourlySeries(t0, {0, 0, 0, 5, -5, 5, 5, 0, 0, 0}, Unit::kW);
    auto d = ms::project_follow_envelope(cmd, b, env);
    for (std::size_t t = 3; t < 7; ++t) CHECK(d.mismatch[t] == cmd[t]);
}

TEST_CASE("forced correction counts as mismatch and respects the physical rate")
{
    Hour t0 = make_hour(2010, 1, 1);
    BatterySpec b{100.0, 25.0, 90.0};
    ms::ResidualEnvelope env{HourlySeries(t0, {0.0, 0.0}, Unit::kWh), HourlySeries(t0, {100.0, 80.0}, Unit::kWh),
                             HourlySeries(t0, {25.0, 25.0}, Unit::kW)};
    auto d = ms::project_follow_envelope(HourlySeries(t0, {0.0, 0.0}, Unit::kW), b, env);
    CHECK(d.soc[1] == 80.0);
    CHECK(d.schedule[1] == -10.0);
    CHECK(d.mismatch[1] == 10.0);
    CHECK_NOTHROW(env.validate(b));
}

TEST_CASE("envelope stats examples")
{
    Hour t0 = make_hour(2010, 1, 1);
    BatterySpec b{100.0, 25.0, 0.0};
    auto full = ms::envelope_stats(ms::ResidualEnvelope::full(b, t0, 48), b);
    CHECK(full.full_availability == 1.0);
    CHECK(full.zero_availability == 0.0);
    CHECK(full.mean_residual == 1.0);
    ms::ResidualEnvelope zero{HourlySeries::constant(t0, 48, 40.0, Unit::kWh), HourlySeries::constant(t0, 48, 40.0, Unit::kWh),
                              HourlySeries::zeros(t0, 48, Unit::kW)};
    auto z = ms::envelope_stats(zero, b);
    CHECK(z.full_availability == 0.0);
    CHECK(z.zero_availability == 1.0);
    CHECK(z.mean_residual == 0.0);
}

TEST_CASE("synthetic envelopes")
{
    Hour t0 = make_hour(2010, 8, 1);
    BatterySpec b{4500.0, 1125.0, 0.0};
    auto driver = ms::synth_wind_driver(t0, 8760, 42);
    auto trivial = ms::synth_envelope(b, {1.0, 0.0, 1.0}, driver, 1);
    auto ts = ms::envelope_stats(trivial, b);
    CHECK(ts.full_availability == 1.0);
    CHECK(trivial.soc_min.max() == 0.0);
    CHECK(trivial.soc_max.min() == b.capacity);

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto env = ms::synth_envelope(b, {0.87, 0.05, 1.0}, ms::synth_wind_driver(t0, 8760, seed), seed);
        CHECK_NOTHROW(env.validate(b));
        auto s = ms::envelope_stats(env, b);
        CHECK(s.full_availability >= 0.85);
        CHECK(s.full_availability <= 0.89);
        CHECK(s.zero_availability >= 0.03);
        CHECK(s.zero_availability <= 0.07);
    }
    auto a1 = ms::synth_envelope(b, {0.87, 0.05, 1.0}, driver, 9);
    auto a2 = ms::synth_envelope(b, {0.87, 0.05, 1.0}, driver, 9);
    CHECK(a1.soc_min == a2.soc_min);
    CHECK(a1.soc_max == a2.soc_max);
    CHECK(a1.rate_limit == a2.rate_limit);
    CHECK(ms::synth_wind_driver(t0, 100, 5) == ms::synth_wind_driver(t0, 100, 5));
    CHECK_THROWS_AS(ms::synth_envelope(b, {0.9, 0.2, 1.0}, driver, 1), DomainError);
}

TEST_CASE("property: envelopes dominate the full battery and keep SoC in band")
{
    cstest::Gen gen(61);
    for (int trial = 0; trial < 20; ++trial) {
        auto n = static_cast<std::size_t>(gen.integer(200, 2000));
        auto cmd = gen.command(n, gen.uniform(10, 100));
        auto b = aggregate::sweep_battery(cmd, gen.uniform(50, 800), 4.0);
        if (b.capacity <= 0.0) continue;
        auto seed = static_cast<std::uint64_t>(gen.integer(0, 1 << 30));
        double full = gen.uniform(0.5, 0.95);
        double zero = gen.uniform(0.0, 1.0 - full);
        auto env = ms::synth_envelope(b, {full, zero, 1.0}, ms::synth_wind_driver(cmd.start(), n, seed), seed);
        auto d = ms::project_follow_envelope(cmd, b, env);
        auto base = aggregate::project_follow(follow_scenario(cmd, b));
        for (std::size_t t = 0; t < n; ++t) {
            CHECK(d.soc[t] >= env.soc_min[t] - 1e-9);
            CHECK(d.soc[t] <= env.soc_max[t] + 1e-9);
            CHECK(std::abs(d.schedule[t]) <= b.rate + 1e-9);
        }
        auto prices = follow_scenario(cmd, b);
        double cost_env = aggregate::blocking_cost(d.mismatch, prices.external_buy_price, prices.external_sell_price);
        double cost_full = aggregate::blocking_cost(base.mismatch, prices.external_buy_price, prices.external_sell_price);
        CHECK(cost_env >= cost_full - 1e-6);
    }
}

TEST_CASE("envelope validation and CSV round-trip")
{
    Hour t0 = make_hour(2010, 1, 1);
    BatterySpec b{100.0, 25.0, 0.0};
    ms::ResidualEnvelope bad{HourlySeries(t0, {0.0, 0.0}, Unit::kWh), HourlySeries(t0, {100.0, 50.0}, Unit::kWh),
                             HourlySeries(t0, {25.0, 25.0}, Unit::kW)};
    CHECK_THROWS_AS(bad.validate(b), ConfigError);  // soc_max drops faster than the rate
    ms::ResidualEnvelope inverted{HourlySeries(t0, {60.0}, Unit::kWh), HourlySeries(t0, {50.0}, Unit::kWh),
                                  HourlySeries(t0, {25.0}, Unit::kW)};
    CHECK_THROWS_AS(inverted.validate(b), ConfigError);

    auto path = std::filesystem::temp_directory_path() / "cloudstore_envelope_test.csv";
    BatterySpec big{4500.0, 1125.0, 0.0};
    auto env = ms::synth_envelope(big, {0.87, 0.05, 1.0}, ms::synth_wind_driver(t0, 500, 3), 3);
    ms::write_envelope_csv(path, env);
    auto back = ms::read_envelope_csv(path);
    CHECK(back.soc_min == env.soc_min);
    CHECK(back.soc_max == env.soc_max);
    CHECK(back.rate_limit == env.rate_limit);
    std::filesystem::remove(path);
}
}
