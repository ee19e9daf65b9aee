#include "cloudstore/core/errors.hpp"
#include "cloudstore/household.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cloudstore::household {

double dp_oracle(const HouseholdProfile& profile, const PriceSeries& prices, double capacity, double rate,
                 double soc_grid_step)
{
    if (!(soc_grid_step > 0.0)) {
        throw DomainError("dp_oracle: grid step must be > 0");
    }
    if (!(capacity >= 0.0) || !(rate >= 0.0)) {
        throw DomainError("dp_oracle: capacity and rate must be >= 0");
    }
    require_aligned(profile.load, prices.purchase, "dp_oracle");

    const auto levels = static_cast<long>(std::floor(capacity / soc_grid_step + 1e-9));
    const auto reach = static_cast<long>(std::floor(rate / soc_grid_step + 1e-9));
    const std::size_t horizon = profile.load.size();

    std::vector<double> future(static_cast<std::size_t>(levels) + 1, 0.0);
    std::vector<double> current(future.size());
    for (std::size_t t = horizon; t-- > 0;) {
        double n = profile.load[t] - profile.pv[t];
        double buy = prices.purchase[t];
        double sell = prices.injection[t];
        for (long k = 0; k <= levels; ++k) {
            double best = std::numeric_limits<double>::infinity();
            for (long j = std::max(0L, k - reach); j <= std::min(levels, k + reach); ++j) {
                double x = n + static_cast<double>(j - k) * soc_grid_step;
                double cost = (x >= 0.0 ? buy * x : sell * x) + future[static_cast<std::size_t>(j)];
                best = std::min(best, cost);
            }
            current[static_cast<std::size_t>(k)] = best;
        }
        std::swap(future, current);
    }
    return future[0];
}

}  // namespace cloudstore::household
