#include "doctest.h"

#include "cloudstore/core/battery.hpp"
#include "cloudstore/core/errors.hpp"
#include "cloudstore/core/io.hpp"
#include "cloudstore/core/series.hpp"
#include "cloudstore/core/tariff.hpp"
#include "support/gen.hpp"

#include <filesystem>

using namespace cloudstore;
namespace fs = std::filesystem;

TEST_SUITE("core")
{
TEST_CASE("calendar formatting and parsing round-trip")
{
    Hour h = make_hour(2010, 8, 1, 17);
    CHECK(format_hour(h) == "2010-08-01T17:00:00");
    CHECK(parse_hour("2010-08-01T17:00:00") == h);
    CHECK(parse_hour("2010-08-01 17:00") == h);
    CHECK(parse_hour("2010-08-01T17Z") == h);
    CHECK_THROWS_AS(parse_hour("2010-08-01T17:30:00"), ParseError);
    CHECK_THROWS_AS(parse_hour("2010-13-01T00:00:00"), ParseError);
    CHECK_THROWS_AS(parse_hour("yesterday"), ParseError);
    CHECK(hour_of_day(h) == 17);
    CHECK(is_weekend(make_hour(2010, 8, 1)));   // Sunday
    CHECK_FALSE(is_weekend(make_hour(2010, 8, 2)));
}

TEST_CASE("fixed-date federal holidays")
{
    auto cal = HolidayCalendar::us_fixed_federal();
    using namespace std::chrono;
    CHECK(cal.is_holiday(year{2010} / July / 4));
    CHECK(cal.is_holiday(year{2011} / January / 1));
    CHECK(cal.is_holiday(year{2010} / December / 25));
    CHECK_FALSE(cal.is_holiday(year{2010} / June / 19));
    CHECK(cal.is_holiday(year{2022} / June / 19));
    CHECK_FALSE(HolidayCalendar::none().is_holiday(year{2010} / July / 4));
    HolidayCalendar custom({year{2010} / March / 3});
    CHECK(custom.is_holiday(make_hour(2010, 3, 3, 12)));
}

TEST_CASE("series invariants")
{
    CHECK_THROWS_AS(HourlySeries(make_hour(2010, 1, 1), {}, Unit::kWh), DomainError);
    CHECK_THROWS_AS(HourlySeries(make_hour(2010, 1, 1), {1.0, std::nan("")}, Unit::kWh), DomainError);
    HourlySeries s(make_hour(2010, 1, 1), {1.0, -2.0, 3.0}, Unit::kW);
    CHECK(s.sum() == 2.0);
    CHECK(s.min() == -2.0);
    CHECK(s.max() == 3.0);
    CHECK(s.end() == make_hour(2010, 1, 1, 3));
    CHECK(s.time_at(2) == make_hour(2010, 1, 1, 2));
}

TEST_CASE("align_and_combine examples")
{
    Hour t0 = make_hour(2010, 1, 1);
    HourlySeries a(t0, {1.0, 2.0}, Unit::kWh);
    HourlySeries b(t0, {3.0, 4.0}, Unit::kWh);
    auto sum = a + b;
    CHECK(sum.values()[0] == 4.0);
    CHECK(sum.values()[1] == 6.0);
    CHECK(sum.unit() == Unit::kWh);

    HourlySeries price(t0, {0.2, 0.3}, Unit::UsdPerKWh);
    CHECK_THROWS_AS(a + price, UnitError);
    auto cost = align_and_combine(a, price, SeriesOp::Mul);
    CHECK(cost.unit() == Unit::Usd);
    CHECK(cost[1] == doctest::Approx(0.6));

    CHECK(a + HourlySeries::zeros_like(a) == a);
    HourlySeries kw(t0, {1.0, 1.0}, Unit::kW);
    CHECK((a - kw).unit() == Unit::kWh);

    CHECK_THROWS_AS(a + HourlySeries(t0, {1.0, 2.0, 3.0}, Unit::kWh), AlignmentError);
    CHECK_THROWS_AS(a + HourlySeries(make_hour(2010, 1, 2), {1.0, 2.0}, Unit::kWh), AlignmentError);
}

TEST_CASE("property: series addition is commutative and associative")
{
    cstest::Gen gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto n = static_cast<std::size_t>(gen.integer(1, 50));
        auto a = gen.series(n, -1e3, 1e3, Unit::kWh);
        auto b = gen.series(n, -1e3, 1e3, Unit::kWh);
        auto c = gen.series(n, -1e3, 1e3, Unit::kWh);
        auto ab = a + b;
        auto ba = b + a;
        auto left = (a + b) + c;
        auto right = a + (b + c);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(ab[i] == ba[i]);
            CHECK(left[i] == doctest::Approx(right[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("unit names round-trip")
{
    for (Unit u : {Unit::kWh, Unit::kW, Unit::UsdPerKWh, Unit::Usd}) CHECK(parse_unit(to_string(u)) == u);
    CHECK_THROWS_AS(parse_unit("MWh"), ParseError);
}

TEST_CASE("E-TOU-B expansion examples")
{
    auto tariff = Tariff::pge_etou_b();
    auto july = expand_tariff(tariff, make_hour(2010, 7, 7, 17), 1);  // Wednesday 5pm
    CHECK(july.purchase[0] == 0.35817);
    CHECK(july.injection[0] == 0.0);
    auto jan = expand_tariff(tariff, make_hour(2011, 1, 2, 17), 1);  // Sunday 5pm
    CHECK(jan.purchase[0] == 0.20191);
    auto winter_peak = expand_tariff(tariff, make_hour(2011, 1, 3, 16), 1);
    CHECK(winter_peak.purchase[0] == 0.22071);
    auto holiday = expand_tariff(tariff, make_hour(2010, 7, 5, 17), 1);  // Monday, not a fixed-date holiday
    CHECK(holiday.purchase[0] == 0.35817);
    auto fourth = expand_tariff(tariff, make_hour(2011, 7, 4, 17), 1);  // Monday holiday
    CHECK(fourth.purchase[0] == 0.25511);
    auto edge = expand_tariff(tariff, make_hour(2010, 7, 7, 21), 1);  // window is [16, 21)
    CHECK(edge.purchase[0] == 0.25511);
}

TEST_CASE("flat tariff expands to a constant series")
{
    auto p = expand_tariff(Tariff::flat(0.2), make_hour(2010, 1, 1), 24 * 14);
    CHECK(p.purchase.min() == 0.2);
    CHECK(p.purchase.max() == 0.2);
    CHECK(p.injection.max() == 0.0);
}

TEST_CASE("tariff validation")
{
    PeakWindow w{16, 21};
    std::vector<Season> all{{"all", {1, 1}, {12, 31}, 0.2, 0.3}};
    CHECK_NOTHROW(Tariff("ok", all, w, true));
    CHECK_THROWS_AS(Tariff("neg", {{"all", {1, 1}, {12, 31}, -0.1, 0.3}}, w, true), ConfigError);
    CHECK_THROWS_AS(Tariff("inverted", {{"all", {1, 1}, {12, 31}, 0.3, 0.2}}, w, true), ConfigError);
    CHECK_THROWS_AS(Tariff("inj", all, w, true, 0.25), ConfigError);
    CHECK_THROWS_AS(Tariff("overlap", {{"a", {1, 1}, {6, 30}, 0.2, 0.3}, {"b", {6, 1}, {12, 31}, 0.2, 0.3}}, w, true),
                    ConfigError);
    Tariff gap("gap", {{"a", {1, 1}, {6, 30}, 0.2, 0.3}}, w, true);
    CHECK_THROWS_AS(expand_tariff(gap, make_hour(2010, 7, 1), 1), ConfigError);
}

TEST_CASE("tariff JSON round-trip")
{
    auto t = Tariff::pge_etou_b();
    auto back = io::tariff_from_json(io::tariff_to_json(t));
    auto a = expand_tariff(t, make_hour(2010, 8, 1), 8760);
    auto b = expand_tariff(back, make_hour(2010, 8, 1), 8760);
    CHECK(a.purchase == b.purchase);
    CHECK(a.injection == b.injection);
    CHECK_THROWS_AS(io::tariff_from_json(io::json{{"seasons", 3}}), ConfigError);
}

TEST_CASE("shipped tariff file matches the built-in tariff")
{
    auto file = io::load_tariff(fs::path(CLOUDSTORE_SOURCE_DIR) / "data/tariffs/pge_etou_b.json");
    auto a = expand_tariff(file, make_hour(2010, 8, 1), 8760);
    auto b = expand_tariff(Tariff::pge_etou_b(), make_hour(2010, 8, 1), 8760);
    CHECK(a.purchase == b.purchase);
}

TEST_CASE("number formatting round-trips")
{
    cstest::Gen gen(3);
    for (int i = 0; i < 1000; ++i) {
        double v = gen.normal(1e4);
        CHECK(io::parse_double(io::format_number(v), "x", 1) == v);
    }
    CHECK(io::format_number(-0.0) == "0");
    CHECK(io::format_number(0.1) == "0.1");
    CHECK_THROWS_AS(io::parse_double("1.5x", "f.csv", 7), ParseError);
}

TEST_CASE("series CSV round-trip and parse errors")
{
    auto dir = fs::temp_directory_path() / "cloudstore_core_test";
    fs::create_directories(dir);
    cstest::Gen gen(5);
    auto s = gen.series(100, -5, 5, Unit::kW);
    io::write_series_csv(dir / "s.csv", s);
    CHECK(io::read_series_csv(dir / "s.csv") == s);

    io::write_text(dir / "bad.csv", "timestamp,value,unit\n2010-01-01T00:00:00,1,kWh\n2010-01-01T01:00:00,oops,kWh\n");
    try {
        io::read_series_csv(dir / "bad.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    io::write_text(dir / "gap.csv", "timestamp,value,unit\n2010-01-01T00:00:00,1,kWh\n2010-01-01T02:00:00,1,kWh\n");
    CHECK_THROWS_AS(io::read_series_csv(dir / "gap.csv"), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("dispatch invariants checker")
{
    Hour t0 = make_hour(2010, 1, 1);
    BatterySpec b{10.0, 2.5, 0.0};
    DispatchResult ok{0.0, HourlySeries(t0, {2.5, 2.5, -1.0}, Unit::kW), HourlySeries(t0, {2.5, 5.0, 4.0}, Unit::kWh),
                      HourlySeries(t0, {0.0, 0.0, 0.0}, Unit::kW)};
    CHECK(dispatch_violations(ok, b).empty());
    DispatchResult fast{0.0, HourlySeries(t0, {3.0}, Unit::kW), HourlySeries(t0, {3.0}, Unit::kWh),
                        HourlySeries(t0, {0.0}, Unit::kW)};
    CHECK_FALSE(dispatch_violations(fast, b).empty());
    DispatchResult drift{0.0, HourlySeries(t0, {1.0}, Unit::kW), HourlySeries(t0, {1.5}, Unit::kWh),
                         HourlySeries(t0, {0.0}, Unit::kW)};
    CHECK_FALSE(dispatch_violations(drift, b).empty());
    CHECK_THROWS_AS((BatterySpec{10.0, 1.0, 11.0}.validate()), DomainError);
    CHECK_THROWS_AS((BatterySpec{-1.0, 1.0, 0.0}.validate()), DomainError);
}
}
