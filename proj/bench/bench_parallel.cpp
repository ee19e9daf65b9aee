// OpenMP kernels against their serial references.

#include "cloudstore/aggregate.hpp"
#include "cloudstore/data.hpp"
#include "cloudstore/household.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace cloudstore;

namespace {

data::Cohort make_cohort(std::size_t n, std::size_t hours)
{
    auto config = data::CohortConfig::standard();
    config.n_households = n;
    config.hours = hours;
    config.seed = 3;
    return data::synth_cohort(config);
}

const household::ContractMenu& menu()
{
    static const auto m = household::ContractMenu::standard({10.0, 20.0, 30.0}, {2.0, 4.0});
    return m;
}

const data::Cohort& cohort()
{
    static const auto c = make_cohort(64, 24 * 28);
    return c;
}

const std::vector<household::HouseholdDecision>& decisions()
{
    static const auto d = household::cohort_decisions(cohort().profiles, Tariff::pge_etou_b(), menu());
    return d;
}

std::vector<DispatchResult> schedules(std::size_t copies)
{
    std::vector<DispatchResult> out;
    for (std::size_t k = 0; k < copies; ++k) {
        for (const auto& d : decisions()) out.push_back(d.dispatch);
    }
    return out;
}

aggregate::SweepInputs sweep_inputs()
{
    auto all = schedules(1);
    auto cmd = aggregate::aggregate_schedules_serial(all);
    double revenue = 0.0, cv = 0.0;
    for (const auto& d : decisions()) {
        revenue += d.chosen.fee;
        cv += d.chosen.capacity;
    }
    auto prices = expand_tariff(Tariff::pge_etou_b(), cmd.start(), cmd.size());
    return {cmd, revenue, cv, 4.0, prices.purchase, prices.injection, {}};
}

void BM_cohort_decisions(benchmark::State& state)
{
    auto tariff = Tariff::pge_etou_b();
    for (auto _ : state) benchmark::DoNotOptimize(household::cohort_decisions(cohort().profiles, tariff, menu()));
    state.counters["threads"] = omp_get_max_threads();
}

void BM_cohort_decisions_serial(benchmark::State& state)
{
    auto tariff = Tariff::pge_etou_b();
    for (auto _ : state) benchmark::DoNotOptimize(household::cohort_decisions_serial(cohort().profiles, tariff, menu()));
}

void BM_sweep_sizes(benchmark::State& state)
{
    auto in = sweep_inputs();
    auto grid = aggregate::default_sweep_grid(in.virtual_capacity);
    for (auto _ : state) benchmark::DoNotOptimize(aggregate::sweep_sizes(in, grid));
}

void BM_sweep_sizes_serial(benchmark::State& state)
{
    auto in = sweep_inputs();
    auto grid = aggregate::default_sweep_grid(in.virtual_capacity);
    for (auto _ : state) benchmark::DoNotOptimize(aggregate::sweep_sizes_serial(in, grid));
}

void BM_aggregate_schedules(benchmark::State& state)
{
    auto all = schedules(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(aggregate::aggregate_schedules(all));
}

void BM_aggregate_schedules_serial(benchmark::State& state)
{
    auto all = schedules(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(aggregate::aggregate_schedules_serial(all));
}

void BM_synth_cohort(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(make_cohort(static_cast<std::size_t>(state.range(0)), 8760));
}

}  // namespace

BENCHMARK(BM_cohort_decisions)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cohort_decisions_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_sizes_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_aggregate_schedules)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_aggregate_schedules_serial)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synth_cohort)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
