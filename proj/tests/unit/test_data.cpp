#include "doctest.h"

#include "cloudstore/aggregate.hpp"
#include "cloudstore/core/errors.hpp"
#include "cloudstore/data.hpp"
#include "support/gen.hpp"

#include <filesystem>

using namespace cloudstore;
using namespace cloudstore::data;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CohortConfig small_config(std::size_t n, std::size_t hours, std::uint64_t seed = 42)
{
    auto c = CohortConfig::standard();
    c.n_households = n;
    c.hours = hours;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("data")
{
TEST_CASE("meter CSV: two households")
{
    TempDir dir("cloudstore_meter_ok");
    io::write_text(dir.path / "m.csv",
                   "id,zone,timestamp,kwh\n"
                   "B,CZ12,2010-08-01T00:00:00,1.5\n"
                   "A,CZ03,2010-08-01T01:00:00,0.5\n"
                   "A,CZ03,2010-08-01T00:00:00,0.25\n"
                   "B,CZ12,2010-08-01T01:00:00,2\n");
    auto m = load_meter_csv(dir.path / "m.csv");
    REQUIRE(m.profiles.size() == 2);
    CHECK(m.skipped.empty());
    CHECK(m.profiles[0].id == "A");
    CHECK(m.profiles[0].climate_zone == "CZ03");
    CHECK(m.profiles[0].load[0] == 0.25);
    CHECK(m.profiles[0].load[1] == 0.5);
    CHECK(m.profiles[1].load.sum() == 3.5);
    CHECK(m.profiles[1].pv.max() == 0.0);
}

TEST_CASE("meter CSV: errors and skips")
{
    TempDir dir("cloudstore_meter_bad");
    io::write_text(dir.path / "neg.csv", "id,zone,timestamp,kwh\nA,Z,2010-08-01T00:00:00,-1\n");
    CHECK_THROWS_AS(load_meter_csv(dir.path / "neg.csv"), ValidationError);

    io::write_text(dir.path / "bad.csv", "id,zone,timestamp,kwh\nA,Z,2010-08-01T00:00:00,1\nA,Z,notatime,1\n");
    try {
        load_meter_csv(dir.path / "bad.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    io::write_text(dir.path / "fields.csv", "id,zone,timestamp,kwh\nA,Z,2010-08-01T00:00:00\n");
    CHECK_THROWS_AS(load_meter_csv(dir.path / "fields.csv"), ParseError);

    io::write_text(dir.path / "gap.csv",
                   "id,zone,timestamp,kwh\n"
                   "A,Z,2010-08-01T00:00:00,1\nA,Z,2010-08-01T02:00:00,1\n"
                   "B,Z,2010-08-01T00:00:00,1\nB,Z,2010-08-01T00:00:00,1\n"
                   "C,Z,2010-08-01T00:00:00,1\nC,Z,2010-08-01T01:00:00,1\n");
    auto m = load_meter_csv(dir.path / "gap.csv");
    REQUIRE(m.profiles.size() == 1);
    CHECK(m.profiles[0].id == "C");
    REQUIRE(m.skipped.size() == 2);
    CHECK(m.skipped[0].id == "A");
    CHECK(m.skipped[1].id == "B");
}

TEST_CASE("meter CSV: full year and round-trip")
{
    TempDir dir("cloudstore_meter_year");
    auto cohort = synth_cohort(small_config(3, 8760));
    write_meter_csv(dir.path / "load.csv", {cohort.profiles[0]});
    auto one = load_meter_csv(dir.path / "load.csv");
    REQUIRE(one.profiles.size() == 1);
    CHECK(one.profiles[0].load.size() == 8760);
    CHECK(one.profiles[0].load == cohort.profiles[0].load);

    write_meter_csv(dir.path / "all.csv", cohort.profiles);
    write_meter_csv(dir.path / "pv.csv", cohort.profiles, MeterField::Pv);
    auto all = load_meter_csv(dir.path / "all.csv");
    attach_pv_csv(all.profiles, dir.path / "pv.csv");
    REQUIRE(all.profiles.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(all.profiles[i].load == cohort.profiles[i].load);
        CHECK(all.profiles[i].pv == cohort.profiles[i].pv);
    }
}

TEST_CASE("pv_from_irradiance examples")
{
    Hour t0 = make_hour(2010, 8, 1);
    household::HouseholdProfile p{"p", HourlySeries::constant(t0, 8760, 1.0, Unit::kWh),
                                  HourlySeries::zeros(t0, 8760, Unit::kWh), "Z"};
    auto irr = HourlySeries::constant(t0, 8760, 0.2, Unit::kW);  // sums to 1752
    auto pv = pv_from_irradiance(p, irr);
    CHECK(pv[0] / irr[0] == doctest::Approx(5.0));
    CHECK(pv.sum() == doctest::Approx(8760.0));
    CHECK(pv.unit() == Unit::kWh);

    household::HouseholdProfile none{"z", HourlySeries::zeros(t0, 8760, Unit::kWh), HourlySeries::zeros(t0, 8760, Unit::kWh), "Z"};
    CHECK(pv_from_irradiance(none, irr).max() == 0.0);
    CHECK_THROWS_AS(pv_from_irradiance(p, HourlySeries::zeros(t0, 8760, Unit::kW)), DomainError);
}

TEST_CASE("property: PV is linear in load and hits zero net energy")
{
    cstest::Gen gen(71);
    auto zone = CohortConfig::standard().climate_zones[0];
    for (int trial = 0; trial < 20; ++trial) {
        Hour start = make_hour(2010, 1, 1) + std::chrono::hours{gen.integer(0, 8000)};
        auto n = static_cast<std::size_t>(gen.integer(48, 24 * 60));
        auto irr = synth_irradiance(zone, start, n, static_cast<std::uint64_t>(trial));
        auto p = gen.profile(n, false, start);
        auto pv = pv_from_irradiance(p, irr);
        CHECK(std::abs(pv.sum() - p.load.sum()) <= 1e-6 * p.load.sum());
        auto doubled = p;
        doubled.load = p.load.scaled(2.0);
        auto pv2 = pv_from_irradiance(doubled, irr);
        for (std::size_t t = 0; t < n; ++t) CHECK(pv2[t] == doctest::Approx(2.0 * pv[t]).epsilon(1e-12));
    }
}

TEST_CASE("synthetic cohort: determinism and documented statistics")
{
    auto a = synth_cohort(small_config(20, 24 * 28));
    auto b = synth_cohort(small_config(20, 24 * 28));
    REQUIRE(a.profiles.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(a.profiles[i].id == b.profiles[i].id);
        CHECK(a.profiles[i].load == b.profiles[i].load);
        CHECK(a.profiles[i].pv == b.profiles[i].pv);
        CHECK_NOTHROW(a.profiles[i].validate());
    }
    auto other = synth_cohort(small_config(20, 24 * 28, 43));
    CHECK_FALSE(other.profiles[0].load == a.profiles[0].load);
    CHECK(synth_cohort(small_config(1, 24)).profiles.size() == 1);
    CHECK(a.irradiance.size() == 3);
    for (const auto& [zone, irr] : a.irradiance) {
        CHECK(irr.min() >= 0.0);
        CHECK(irr.max() <= 1.0);
        CHECK(irr[2] == 0.0);  // night
    }
}

TEST_CASE("synthetic cohort: evening peak, weekend flattening, zero net energy")
{
    auto cohort = synth_cohort(small_config(200, 8760));
    std::vector<double> weekday(24, 0.0), weekend(24, 0.0);
    for (const auto& p : cohort.profiles) {
        CHECK(std::abs(p.pv.sum() - p.load.sum()) <= 1e-6 * p.load.sum());
        for (std::size_t t = 0; t < p.load.size(); ++t) {
            Hour at = p.load.time_at(t);
            (is_weekend(at) ? weekend : weekday)[hour_of_day(at)] += p.load[t];
        }
    }
    auto peak_ratio = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
    };
    auto peak_hour = std::max_element(weekday.begin(), weekday.end()) - weekday.begin();
    CHECK(peak_hour >= 17);
    CHECK(peak_hour <= 21);
    CHECK(peak_ratio(weekend) < peak_ratio(weekday));
}

TEST_CASE("synthetic cohort: aggregate virtual schedule discharges in weekday peak hours")
{
    auto cohort = synth_cohort(small_config(40, 8760));
    auto decisions =
        household::cohort_decisions(cohort.profiles, Tariff::pge_etou_b(), household::ContractMenu::standard({10}, {4}));
    std::vector<DispatchResult> dispatches;
    for (const auto& d : decisions) dispatches.push_back(d.dispatch);
    auto agg = aggregate::aggregate_schedules(dispatches);
    auto tariff = Tariff::pge_etou_b();
    double peak = 0.0, other = 0.0;
    std::size_t peak_n = 0, other_n = 0;
    for (std::size_t t = 0; t < agg.size(); ++t) {
        if (tariff.is_peak(agg.time_at(t))) {
            peak += agg[t];
            peak_n++;
        } else {
            other += agg[t];
            other_n++;
        }
    }
    CHECK(peak / static_cast<double>(peak_n) < 0.0);
    CHECK(peak / static_cast<double>(peak_n) < other / static_cast<double>(other_n));
}

TEST_CASE("config validation and JSON round-trip")
{
    auto c = CohortConfig::standard();
    auto back = cohort_config_from_json(cohort_config_to_json(c));
    CHECK(cohort_config_to_json(back) == cohort_config_to_json(c));
    auto bad = cohort_config_to_json(c);
    bad["climate_zones"][0]["weight"] = 0.9;
    CHECK_THROWS_AS(cohort_config_from_json(bad), ConfigError);
    auto zero = cohort_config_to_json(c);
    zero["n_households"] = 0;
    CHECK_THROWS_AS(cohort_config_from_json(zero), ConfigError);
    auto sigma = cohort_config_to_json(c);
    sigma["annual_kwh_sigma"] = -1.0;
    CHECK_THROWS_AS(cohort_config_from_json(sigma), ConfigError);
}

TEST_CASE("kmeans")
{
    cstest::Gen gen(81);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({gen.normal(0.1) + (i % 3) * 5.0, gen.normal(0.1)});
    auto r = kmeans(pts, 3, 1);
    for (int i = 3; i < 60; ++i) CHECK(r.assignment[static_cast<std::size_t>(i)] == r.assignment[static_cast<std::size_t>(i % 3)]);
    auto again = kmeans(pts, 3, 1);
    CHECK(again.assignment == r.assignment);
    CHECK_THROWS_AS(kmeans(pts, 0, 1), DomainError);
    CHECK_THROWS_AS(kmeans(pts, 61, 1), DomainError);
    try {
        kmeans(pts, 3, 1, {1, 1e-6});
        FAIL("expected non-convergence");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("inertia") != std::string::npos);
    }
}

TEST_CASE("representatives: identity, stratified sample, determinism")
{
    auto cohort = synth_cohort(small_config(300, 24 * 14));
    ClusterOptions all;
    all.target_n = 300;
    auto id = cluster_representatives(cohort.profiles, all);
    REQUIRE(id.profiles.size() == 300);
    for (std::size_t i = 0; i < 300; ++i) CHECK(id.profiles[i].id == cohort.profiles[i].id);

    ClusterOptions strat;
    strat.clusters_per_zone = 1;
    strat.target_n = 60;
    // One cluster per zone is a plain random draw; 60 heavy-tailed households miss the std gate.
    CHECK_THROWS_AS(cluster_representatives(cohort.profiles, strat), ValidationError);
    strat.coherence_tolerance = 0.25;
    auto s = cluster_representatives(cohort.profiles, strat);
    CHECK(s.profiles.size() == 60);
    std::map<std::string, int> full_count, sample_count;
    for (const auto& p : cohort.profiles) full_count[p.climate_zone]++;
    for (const auto& p : s.profiles) sample_count[p.climate_zone]++;
    for (const auto& [zone, n] : full_count) CHECK(std::abs(sample_count[zone] - n / 5.0) <= 1.0);

    auto s2 = cluster_representatives(cohort.profiles, strat);
    for (std::size_t i = 0; i < s.profiles.size(); ++i) CHECK(s.profiles[i].id == s2.profiles[i].id);

    ClusterOptions too_many;
    too_many.target_n = 301;
    CHECK_THROWS_AS(cluster_representatives(cohort.profiles, too_many), ConfigError);
}

TEST_CASE("representatives: 10k synthetic households down to 1,000 stay coherent")
{
    auto cohort = synth_cohort(small_config(10000, 24 * 14));
    ClusterOptions opt;
    auto r = cluster_representatives(cohort.profiles, opt);
    CHECK(r.profiles.size() == 1000);
    CHECK(r.zones.size() == 3);
    CHECK(r.coherence.mean_error() <= 0.10);
    CHECK(r.coherence.std_error() <= 0.10);
}
}
