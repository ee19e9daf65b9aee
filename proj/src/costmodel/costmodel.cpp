#include "cloudstore/costmodel.hpp"

#include "cloudstore/core/errors.hpp"

#include <cmath>

namespace cloudstore::costmodel {

void CostParameters::validate() const
{
    if (!(power_cost > 0.0) || !(energy_cost > 0.0) || !std::isfinite(power_cost) || !std::isfinite(energy_cost)) {
        throw DomainError("cost parameters must be strictly positive");
    }
    if (!(annualization_factor > 0.0) || annualization_factor > 1.0) {
        throw DomainError("annualization factor must lie in (0, 1]");
    }
}

double capex(double capacity_kwh, double rate_kw, const CostParameters& params)
{
    if (!(capacity_kwh >= 0.0) || !(rate_kw >= 0.0)) {
        throw DomainError("capex: capacity and rate must be >= 0");
    }
    return params.power_cost * rate_kw + params.energy_cost * capacity_kwh;
}

double annualize(double capex_usd, const CostParameters& params)
{
    if (!(capex_usd >= 0.0)) {
        throw DomainError("annualize: capex must be >= 0");
    }
    return capex_usd * params.annualization_factor;
}

bool is_supported_ratio(double ratio)
{
    return ratio == 2.0 || ratio == 4.0;
}

double contract_price(double capacity_kwh, double ratio_h, const CostParameters& params)
{
    if (!is_supported_ratio(ratio_h)) {
        throw ConfigError("unsupported energy/power ratio " + std::to_string(ratio_h) + " (expected 2 or 4)");
    }
    return annual_investment(capacity_kwh, capacity_kwh / ratio_h, params);
}

}  // namespace cloudstore::costmodel
