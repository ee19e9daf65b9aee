#include "cloudstore/core/battery.hpp"

#include "cloudstore/core/errors.hpp"

#include <cmath>

namespace cloudstore {

void BatterySpec::validate() const
{
    if (!std::isfinite(capacity) || capacity < 0.0) throw DomainError("battery capacity must be >= 0");
    if (!std::isfinite(rate) || rate < 0.0) throw DomainError("battery rate must be >= 0");
    if (!(initial_soc >= 0.0) || initial_soc > capacity) {
        throw DomainError("battery initial SoC must lie in [0, capacity]");
    }
}

std::vector<std::string> dispatch_violations(const DispatchResult& d, const BatterySpec& battery, double tol)
{
    std::vector<std::string> out;
    if (!d.schedule.aligned_with(d.soc) || !d.schedule.aligned_with(d.mismatch)) {
        out.emplace_back("dispatch series misaligned");
        return out;
    }
    double prev = d.initial_soc;
    for (std::size_t t = 0; t < d.schedule.size(); ++t) {
        double s = d.soc[t];
        double a = d.schedule[t];
        auto at = " at step " + std::to_string(t);
        if (std::abs(s - (prev + a)) > tol) out.push_back("SoC recursion broken" + at);
        if (s < -tol || s > battery.capacity + tol) out.push_back("SoC out of [0, capacity]" + at);
        if (std::abs(a) > battery.rate + tol) out.push_back("rate exceeded" + at);
        prev = s;
    }
    return out;
}

}  // namespace cloudstore
