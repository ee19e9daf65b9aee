#include "doctest.h"

#include "cloudstore/billing.hpp"
#include "cloudstore/core/errors.hpp"
#include "cloudstore/costmodel.hpp"
#include "support/gen.hpp"

using namespace cloudstore;
using namespace cloudstore::costmodel;

TEST_SUITE("costmodel")
{
TEST_CASE("capex oracle values")
{
    // 175 * 1492.5 + 395 * 5970 = 261187.5 + 2358150
    CHECK(capex(5970.0, 1492.5) == doctest::Approx(2619337.5).epsilon(1e-12));
    CHECK(capex(5730.0, 1432.5) == doctest::Approx(2514037.5).epsilon(1e-12));
    CHECK(capex(0.0, 0.0) == 0.0);
}

TEST_CASE("annualized investment oracle values")
{
    CHECK(annual_investment(5970.0, 1492.5) == doctest::Approx(347848.02).epsilon(1e-9));
    CHECK(annual_investment(5730.0, 1432.5) == doctest::Approx(333864.18).epsilon(1e-9));
    CHECK(annual_investment(5970.0, 2985.0) == doctest::Approx(382533.72).epsilon(1e-9));
    CHECK(annualize(0.0) == 0.0);
    CHECK(annual_investment(5970.0, 1492.5) == doctest::Approx(347000.0).epsilon(0.01));
    CHECK(annual_investment(5730.0, 1432.5) == doctest::Approx(334000.0).epsilon(0.01));
    CHECK(annual_investment(5970.0, 2985.0) == doctest::Approx(382000.0).epsilon(0.01));
}

TEST_CASE("contract price")
{
    CHECK(contract_price(10.0, 4.0) == doctest::Approx(582.66).epsilon(1e-9));
    CHECK(contract_price(0.0, 4.0) == 0.0);
    CHECK_THROWS_AS(contract_price(10.0, 3.0), ConfigError);
    CHECK(is_supported_ratio(2.0));
    CHECK(is_supported_ratio(4.0));
    CHECK_FALSE(is_supported_ratio(1.0));
}

TEST_CASE("contract revenue equals the investment of the pooled virtual battery")
{
    double revenue = 537 * contract_price(10.0, 4.0) + 27 * contract_price(20.0, 4.0) + 2 * contract_price(30.0, 4.0);
    CHECK(revenue == doctest::Approx(annual_investment(5970.0, 5970.0 / 4.0)).epsilon(1e-12));
    CHECK(revenue == doctest::Approx(347000.0).epsilon(0.01));
}

TEST_CASE("property: capex is linear and ratio 4 is cheaper than ratio 2")
{
    cstest::Gen gen(21);
    for (int i = 0; i < 500; ++i) {
        double c = gen.uniform(0.0, 1e4);
        double r = gen.uniform(0.0, 1e4);
        double a = gen.uniform(0.0, 10.0);
        CHECK(capex(a * c, a * r) == doctest::Approx(a * capex(c, r)).epsilon(1e-12));
        if (c > 0.0) CHECK(annual_investment(c, c / 4.0) < annual_investment(c, c / 2.0));
    }
}

TEST_CASE("parameter validation")
{
    CHECK_NOTHROW(CostParameters{}.validate());
    CHECK_THROWS_AS((CostParameters{0.0, 395.0, 0.1328}.validate()), DomainError);
    CHECK_THROWS_AS((CostParameters{175.0, 395.0, 1.5}.validate()), DomainError);
}
}

TEST_SUITE("billing")
{
using namespace cloudstore::billing;

TEST_CASE("net demand examples")
{
    Hour t0 = make_hour(2010, 7, 7, 17);
    auto one = [&](double v, Unit u) { return HourlySeries(t0, {v}, u); };
    CHECK(net_demand(one(2, Unit::kWh), one(1, Unit::kWh), one(0.5, Unit::kW))[0] == 1.5);
    CHECK(net_demand(one(1, Unit::kWh), one(3, Unit::kWh), one(0, Unit::kW))[0] == -2.0);
    cstest::Gen gen(1);
    auto load = gen.series(48, 0, 3, Unit::kWh);
    auto pv = gen.series(48, 0, 3, Unit::kWh);
    CHECK(net_demand(load, pv, HourlySeries::zeros(load.start(), 48, Unit::kW)) == load - pv);
}

TEST_CASE("bill examples")
{
    auto tariff = Tariff::pge_etou_b();
    Hour t0 = make_hour(2010, 7, 7, 17);
    CHECK(compute_bill(HourlySeries(t0, {1.0}, Unit::kWh), tariff).total == doctest::Approx(0.35817));
    auto inj = compute_bill(HourlySeries(t0, {-5.0}, Unit::kWh), tariff);
    CHECK(inj.total == 0.0);
    CHECK(inj.injected_energy == 5.0);
    CHECK(compute_bill(HourlySeries::zeros(t0, 100, Unit::kWh), tariff).total == 0.0);
}

TEST_CASE("property: bill is linear on the purchase branch and recomputes exactly")
{
    cstest::Gen gen(8);
    auto tariff = Tariff::pge_etou_b();
    for (int trial = 0; trial < 100; ++trial) {
        Hour start = make_hour(2010, 1, 1) + std::chrono::hours{gen.integer(0, 8000)};
        auto n = static_cast<std::size_t>(gen.integer(1, 96));
        auto net = gen.series(n, -3, 3, Unit::kWh, start);
        auto prices = expand_tariff(tariff, start, n);
        auto bill = compute_bill(net, prices);
        CHECK(recompute_total(bill, prices) == doctest::Approx(bill.total).epsilon(1e-12));

        auto t = static_cast<std::size_t>(gen.integer(0, static_cast<long>(n) - 1));
        if (net[t] >= 0.0) {
            double delta = gen.uniform(0.0, 2.0);
            std::vector<double> bumped(net.values().begin(), net.values().end());
            bumped[t] += delta;
            double raised = compute_bill(HourlySeries(start, bumped, Unit::kWh), prices).total;
            CHECK(raised - bill.total == doctest::Approx(prices.purchase[t] * delta).epsilon(1e-9));
        }
    }
}
}
