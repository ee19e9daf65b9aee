#include "cloudstore/billing.hpp"

#include "cloudstore/core/errors.hpp"

#include <algorithm>

namespace cloudstore::billing {

HourlySeries net_demand(const HourlySeries& load, const HourlySeries& pv, const HourlySeries& battery_action)
{
    require_aligned(load, pv, "net_demand(load, pv)");
    require_aligned(load, battery_action, "net_demand(load, action)");
    std::vector<double> out(load.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = load[t] - pv[t] + battery_action[t];
    }
    return {load.start(), std::move(out), Unit::kWh};
}

BillBreakdown compute_bill(const HourlySeries& net, const PriceSeries& prices)
{
    require_aligned(net, prices.purchase, "compute_bill");
    require_aligned(net, prices.injection, "compute_bill");
    BillBreakdown bill{0.0, 0.0, 0.0, net.with_unit(Unit::kWh)};
    for (std::size_t t = 0; t < net.size(); ++t) {
        double x = net[t];
        if (x > 0.0) {
            bill.total += prices.purchase[t] * x;
            bill.purchased_energy += x;
        } else if (x < 0.0) {
            bill.total -= prices.injection[t] * -x;
            bill.injected_energy += -x;
        }
    }
    return bill;
}

BillBreakdown compute_bill(const HourlySeries& net, const Tariff& tariff)
{
    return compute_bill(net, expand_tariff(tariff, net.start(), net.size()));
}

double recompute_total(const BillBreakdown& bill, const PriceSeries& prices)
{
    double total = 0.0;
    const auto& net = bill.per_step_net;
    for (std::size_t t = 0; t < net.size(); ++t) {
        total += prices.purchase[t] * std::max(net[t], 0.0) - prices.injection[t] * std::max(-net[t], 0.0);
    }
    return total;
}

}  // namespace cloudstore::billing
