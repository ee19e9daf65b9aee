#include "cloudstore/household.hpp"

#include "cloudstore/convex_pwl.hpp"
#include "cloudstore/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace cloudstore::household {

void HouseholdProfile::validate() const
{
    if (!load.aligned_with(pv)) {
        throw ValidationError("household " + id + ": load and pv misaligned");
    }
    for (std::size_t t = 0; t < load.size(); ++t) {
        if (load[t] < 0.0 || pv[t] < 0.0) {
            throw ValidationError("household " + id + ": negative load/pv at " + format_hour(load.time_at(t)));
        }
    }
}

ContractMenu::ContractMenu(std::vector<ContractOffer> entries) : entries_(std::move(entries))
{
    std::set<std::pair<double, double>> seen{{0.0, 0.0}};
    for (const auto& e : entries_) {
        if (!(e.fee >= 0.0) || !(e.capacity >= 0.0) || !(e.rate >= 0.0) || !std::isfinite(e.fee) ||
            !std::isfinite(e.capacity) || !std::isfinite(e.rate)) {
            throw ConfigError("contract menu entries need finite fee, capacity and rate >= 0");
        }
        if (!seen.insert({e.capacity, e.rate}).second) {
            throw ConfigError("contract menu has a duplicate (capacity, rate) entry");
        }
    }
}

ContractMenu ContractMenu::standard(const std::vector<double>& sizes_kwh, const std::vector<double>& ratios_h,
                                    const costmodel::CostParameters& params)
{
    std::vector<ContractOffer> entries;
    for (double size : sizes_kwh) {
        for (double ratio : ratios_h) {
            entries.push_back({costmodel::contract_price(size, ratio, params), size, size / ratio});
        }
    }
    return ContractMenu(std::move(entries));
}

namespace {

/// Per-step bill as a function of the battery action a: p+ [n + a]+ - p- [n + a]-.
double step_cost(double net, double action, double buy, double sell)
{
    double x = net + action;
    return x >= 0.0 ? buy * x : sell * x;
}

struct PackedValue {
    double x0;
    double value0;
    std::size_t offset;
    std::size_t count;
};

}  // namespace

OperationResult optimize_operation(const HouseholdProfile& profile, const PriceSeries& prices, double capacity,
                                   double rate)
{
    if (!(capacity >= 0.0) || !(rate >= 0.0)) {
        throw DomainError("optimize_operation: capacity and rate must be >= 0");
    }
    profile.validate();
    require_aligned(profile.load, prices.purchase, "optimize_operation");
    require_aligned(profile.load, prices.injection, "optimize_operation");

    const std::size_t horizon = profile.load.size();
    std::vector<double> net(horizon);
    for (std::size_t t = 0; t < horizon; ++t) net[t] = profile.load[t] - profile.pv[t];
    auto buy = prices.purchase.values();
    auto sell = prices.injection.values();

    std::vector<double> schedule(horizon, 0.0);
    std::vector<double> soc(horizon, 0.0);

    if (capacity > 0.0 && rate > 0.0) {
        // values[t] is the optimal cost-to-go from step t as a function of the SoC before step t.
        std::vector<pwl::Segment> pool;
        pool.reserve(horizon * 4);
        std::vector<PackedValue> values(horizon + 1);
        pool.push_back({capacity, 0.0});
        values[horizon] = {0.0, 0.0, 0, 1};

        for (std::size_t t = horizon; t-- > 0;) {
            const auto& next = values[t + 1];
            pwl::PwlView future{next.x0, next.value0, std::span(pool).subspan(next.offset, next.count)};
            // Step cost as a function of z = soc_before - soc_after = -a on [-rate, rate].
            pwl::Segment step[2];
            std::size_t nstep = 0;
            double n = net[t];
            double kink = std::clamp(n, -rate, rate);
            if (kink > -rate) step[nstep++] = {kink + rate, -buy[t]};
            if (kink < rate) step[nstep++] = {rate - kink, -sell[t]};
            double z0 = -rate;
            pwl::PwlView step_view{z0, step_cost(n, -z0, buy[t], sell[t]), std::span(step, nstep)};
            auto combined = pwl::restrict_to(pwl::infimal_convolution(future, step_view), 0.0, capacity);
            values[t] = {combined.x0, combined.value0, pool.size(), combined.segments.size()};
            pool.insert(pool.end(), combined.segments.begin(), combined.segments.end());
        }

        double s = 0.0;
        std::vector<double> candidates;
        for (std::size_t t = 0; t < horizon; ++t) {
            const auto& next = values[t + 1];
            pwl::PwlView future{next.x0, next.value0, std::span(pool).subspan(next.offset, next.count)};
            double lo = std::max(0.0, s - rate);
            double hi = std::min(capacity, s + rate);
            candidates.clear();
            candidates.push_back(s >= lo && s <= hi ? s : lo);
            candidates.push_back(lo);
            candidates.push_back(hi);
            double kink = s - net[t];
            if (kink > lo && kink < hi) candidates.push_back(kink);
            double x = future.x0;
            for (const auto& seg : future.segments) {
                x += seg.length;
                if (x > lo && x < hi) candidates.push_back(x);
            }
            double best_y = candidates.front();
            double best_cost = future(best_y) + step_cost(net[t], best_y - s, buy[t], sell[t]);
            for (double y : candidates) {
                double cost = future(y) + step_cost(net[t], y - s, buy[t], sell[t]);
                double tol = 1e-9 + 1e-12 * std::abs(best_cost);
                if (cost < best_cost - tol ||
                    (cost <= best_cost + tol && std::abs(y - s) < std::abs(best_y - s))) {
                    best_cost = cost;
                    best_y = y;
                }
            }
            schedule[t] = best_y - s;
            soc[t] = best_y;
            s = best_y;
        }
    }

    HourlySeries sched(profile.load.start(), std::move(schedule), Unit::kW);
    auto bill = billing::compute_bill(billing::net_demand(profile.load, profile.pv, sched), prices).total;
    return OperationResult{
        DispatchResult{0.0, sched, HourlySeries(profile.load.start(), std::move(soc), Unit::kWh),
                       HourlySeries::zeros(profile.load.start(), horizon, Unit::kW)},
        bill};
}

OperationResult optimize_operation(const HouseholdProfile& profile, const Tariff& tariff, double capacity,
                                   double rate)
{
    return optimize_operation(profile, expand_tariff(tariff, profile.load.start(), profile.load.size()), capacity,
                              rate);
}

HouseholdDecision select_contract(const HouseholdProfile& profile, const PriceSeries& prices,
                                  const ContractMenu& menu)
{
    // Bills are scaled to $/yr so short horizons weigh the annual fee correctly.
    if (profile.load.size() == 0) throw DomainError("select_contract: empty horizon for " + profile.id);
    double per_year = 8760.0 / static_cast<double>(profile.load.size());
    auto baseline = optimize_operation(profile, prices, 0.0, 0.0);
    double baseline_bill = baseline.bill * per_year;
    HouseholdDecision best{profile.id, ContractOffer{}, baseline.dispatch, baseline_bill, baseline_bill, baseline_bill};
    for (const auto& offer : menu.entries()) {
        auto op = optimize_operation(profile, prices, offer.capacity, offer.rate);
        double bill = op.bill * per_year;
        double cost = offer.fee + bill;
        double tol = 1e-9 * (1.0 + std::abs(best.annual_cost));
        bool better = cost < best.annual_cost - tol;
        bool tie = !better && cost <= best.annual_cost + tol;
        if (tie) {
            better = offer.capacity < best.chosen.capacity ||
                     (offer.capacity == best.chosen.capacity && offer.rate < best.chosen.rate);
        }
        if (better) {
            best.chosen = offer;
            best.dispatch = std::move(op.dispatch);
            best.bill = bill;
            best.annual_cost = cost;
        }
    }
    return best;
}

HouseholdDecision select_contract(const HouseholdProfile& profile, const Tariff& tariff, const ContractMenu& menu)
{
    return select_contract(profile, expand_tariff(tariff, profile.load.start(), profile.load.size()), menu);
}

namespace {

struct PriceCache {
    const Tariff& tariff;
    std::optional<PriceSeries> common;

    PriceSeries for_profile(const HouseholdProfile& p) const
    {
        if (common && p.load.aligned_with(common->purchase)) return *common;
        return expand_tariff(tariff, p.load.start(), p.load.size());
    }
};

PriceCache make_cache(const std::vector<HouseholdProfile>& profiles, const Tariff& tariff)
{
    PriceCache cache{tariff, std::nullopt};
    if (!profiles.empty()) {
        cache.common = expand_tariff(tariff, profiles.front().load.start(), profiles.front().load.size());
    }
    return cache;
}

void sort_by_id(std::vector<HouseholdDecision>& out)
{
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

[[noreturn]] void rethrow_for(const std::string& id, const std::exception_ptr& err)
{
    try {
        std::rethrow_exception(err);
    } catch (const Error& e) {
        throw Error(e.kind(), "household " + id + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Domain, "household " + id + ": " + e.what());
    }
}

}  // namespace

std::vector<HouseholdDecision> cohort_decisions_serial(const std::vector<HouseholdProfile>& profiles,
                                                       const Tariff& tariff, const ContractMenu& menu)
{
    auto cache = make_cache(profiles, tariff);
    std::vector<HouseholdDecision> out;
    out.reserve(profiles.size());
    for (const auto& p : profiles) {
        try {
            out.push_back(select_contract(p, cache.for_profile(p), menu));
        } catch (...) {
            rethrow_for(p.id, std::current_exception());
        }
    }
    sort_by_id(out);
    return out;
}

std::vector<HouseholdDecision> cohort_decisions(const std::vector<HouseholdProfile>& profiles, const Tariff& tariff,
                                                const ContractMenu& menu)
{
    auto cache = make_cache(profiles, tariff);
    const long n = static_cast<long>(profiles.size());
    std::vector<std::optional<HouseholdDecision>> slots(profiles.size());
    std::vector<std::exception_ptr> errors(profiles.size());

#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
        try {
            const auto& p = profiles[static_cast<std::size_t>(i)];
            slots[static_cast<std::size_t>(i)] = select_contract(p, cache.for_profile(p), menu);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i]) rethrow_for(profiles[i].id, errors[i]);
    }
    std::vector<HouseholdDecision> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    sort_by_id(out);
    return out;
}

}  // namespace cloudstore::household
