#pragma once

#include "cloudstore/billing.hpp"
#include "cloudstore/core/battery.hpp"
#include "cloudstore/core/series.hpp"
#include "cloudstore/core/tariff.hpp"
#include "cloudstore/costmodel.hpp"

#include <string>
#include <vector>

namespace cloudstore::household {

struct HouseholdProfile {
    std::string id;
    HourlySeries load;  // kWh per step
    HourlySeries pv;    // kWh per step
    std::string climate_zone;

    /// ValidationError on negative values or misaligned load/pv.
    void validate() const;
};

struct ContractOffer {
    double fee = 0.0;       // $/yr
    double capacity = 0.0;  // kWh
    double rate = 0.0;      // kW

    bool is_null() const { return capacity == 0.0 && rate == 0.0; }
    friend bool operator==(const ContractOffer&, const ContractOffer&) = default;
};

/// Virtual-battery contract menu. The null contract (0, 0, 0) is always implicitly available.
class ContractMenu {
public:
    explicit ContractMenu(std::vector<ContractOffer> entries);

    /// Every (size, ratio) pair priced with costmodel::contract_price.
    static ContractMenu standard(const std::vector<double>& sizes_kwh, const std::vector<double>& ratios_h,
                                 const costmodel::CostParameters& params = {});

    const std::vector<ContractOffer>& entries() const { return entries_; }

private:
    std::vector<ContractOffer> entries_;
};

struct OperationResult {
    DispatchResult dispatch;  // virtual: mismatch is identically zero
    double bill = 0.0;
};

/// Minimum-bill schedule for a virtual battery (capacity, rate), initial SoC 0, free terminal SoC.
///
/// Solved exactly by backward dynamic programming on convex piecewise-linear value functions
/// of the state of charge; the schedule is recovered forward, preferring the smallest
/// |action| among cost-equivalent choices.
OperationResult optimize_operation(const HouseholdProfile& profile, const PriceSeries& prices, double capacity,
                                   double rate);
OperationResult optimize_operation(const HouseholdProfile& profile, const Tariff& tariff, double capacity,
                                   double rate);

/// Brute-force DP over an SoC lattice of `soc_grid_step` kWh. Returns the optimal bill on the
/// lattice, an upper bound on the continuous optimum. Intended for verification only.
double dp_oracle(const HouseholdProfile& profile, const PriceSeries& prices, double capacity, double rate,
                 double soc_grid_step);

struct HouseholdDecision {
    std::string id;
    ContractOffer chosen;
    DispatchResult dispatch;
    double bill = 0.0;           // $/yr: horizon bill scaled by 8760 / hours
    double annual_cost = 0.0;    // fee + bill
    double baseline_bill = 0.0;  // $/yr without a battery

    double savings() const { return baseline_bill - annual_cost; }
};

/// Picks the menu entry minimizing fee + optimal annualized bill. Ties go to the smaller capacity, then
/// the smaller rate.
HouseholdDecision select_contract(const HouseholdProfile& profile, const PriceSeries& prices,
                                  const ContractMenu& menu);
HouseholdDecision select_contract(const HouseholdProfile& profile, const Tariff& tariff, const ContractMenu& menu);

/// Independent per-household decisions, returned in id order. Runs households in parallel.
std::vector<HouseholdDecision> cohort_decisions(const std::vector<HouseholdProfile>& profiles, const Tariff& tariff,
                                                const ContractMenu& menu);

/// Single-threaded reference for cohort_decisions.
std::vector<HouseholdDecision> cohort_decisions_serial(const std::vector<HouseholdProfile>& profiles,
                                                       const Tariff& tariff, const ContractMenu& menu);

}  // namespace cloudstore::household
