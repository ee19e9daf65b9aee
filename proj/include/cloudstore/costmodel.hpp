#pragma once

namespace cloudstore::costmodel {

/// Linear large-scale battery investment cost plus the capital-recovery factor that turns
/// it into an equivalent annual cost.
///
/// The default factor 0.1328/yr is calibrated so that a 5.73 MWh and a 5.97 MWh 4-hour
/// battery annualize to about $334k/yr and $347k/yr respectively (roughly a 10-year
/// capital-recovery factor at 5.7%).
struct CostParameters {
    double power_cost = 175.0;           // $/kW
    double energy_cost = 395.0;          // $/kWh
    double annualization_factor = 0.1328;  // 1/yr

    /// DomainError unless all costs > 0 and the factor lies in (0, 1].
    void validate() const;
};

/// power_cost * rate + energy_cost * capacity. Running cost is taken as zero.
double capex(double capacity_kwh, double rate_kw, const CostParameters& params = {});

double annualize(double capex_usd, const CostParameters& params = {});

/// Equivalent annual investment of a battery (capacity, rate).
inline double annual_investment(double capacity_kwh, double rate_kw, const CostParameters& params = {})
{
    return annualize(capex(capacity_kwh, rate_kw, params), params);
}

bool is_supported_ratio(double ratio);

/// Annual fee for a virtual battery of `capacity_kwh` with energy/power ratio 2 or 4 h:
/// what the same battery would cost at large-scale prices. ConfigError for other ratios.
double contract_price(double capacity_kwh, double ratio_h, const CostParameters& params = {});

}  // namespace cloudstore::costmodel
