#pragma once

#include "cloudstore/core/series.hpp"
#include "cloudstore/core/tariff.hpp"

namespace cloudstore::billing {

struct BillBreakdown {
    double total = 0.0;             // $
    double purchased_energy = 0.0;  // kWh, sum of positive net
    double injected_energy = 0.0;   // kWh, sum of negative net (as a positive number)
    HourlySeries per_step_net;      // kWh
};

/// load - pv + battery_action, elementwise (kWh per step).
HourlySeries net_demand(const HourlySeries& load, const HourlySeries& pv, const HourlySeries& battery_action);

/// sum_t purchase_t * [net_t]+ - injection_t * [net_t]-; energy charges only.
BillBreakdown compute_bill(const HourlySeries& net, const PriceSeries& prices);
BillBreakdown compute_bill(const HourlySeries& net, const Tariff& tariff);

/// Recomputes the total from the stored net series; used to check BillBreakdown consistency.
double recompute_total(const BillBreakdown& bill, const PriceSeries& prices);

}  // namespace cloudstore::billing
