#pragma once

#include "cloudstore/core/battery.hpp"
#include "cloudstore/core/series.hpp"

#include <cstdint>
#include <filesystem>

namespace cloudstore::multiservice {

/// SoC band and rate limit left to Cloud Storage after congestion management.
struct ResidualEnvelope {
    HourlySeries soc_min;     // kWh
    HourlySeries soc_max;     // kWh
    HourlySeries rate_limit;  // kW

    /// Full-battery envelope: [0, capacity] and the physical rate at every step.
    static ResidualEnvelope full(const BatterySpec& battery, Hour start, std::size_t hours);

    /// ConfigError unless 0 <= soc_min <= soc_max <= capacity, 0 <= rate_limit <= rate and
    /// both band edges move by at most the physical rate per step.
    void validate(const BatterySpec& battery) const;
};

struct EnvelopeStats {
    double full_availability = 1.0;  // fraction of hours with residual == capacity
    double zero_availability = 0.0;  // fraction of hours with residual == 0
    double mean_residual = 1.0;      // mean residual / capacity
};

/// Myopic projection under the envelope; with the full envelope it reproduces
/// aggregate::project_follow exactly. Carried-in SoC outside the band is corrected first and
/// the correction counts as mismatch.
DispatchResult project_follow_envelope(const HourlySeries& command, const BatterySpec& battery,
                                       const ResidualEnvelope& envelope);

EnvelopeStats envelope_stats(const ResidualEnvelope& envelope, const BatterySpec& battery);

/// Autocorrelated lognormal wind-like series (AR(1) in log space), deterministic per seed.
HourlySeries synth_wind_driver(Hour start, std::size_t hours, std::uint64_t seed, double persistence = 0.95,
                               double log_sigma = 0.6);

/// Stochastic envelope whose availability statistics match `targets`.
///
/// Hours whose driver exceeds the (1 - zero) quantile lose all residual capacity; a band of
/// lower driver values loses part of it, linearly in the driver. Reservations ramp at the
/// physical rate, and the partial threshold is searched so the fully-available share hits
/// the target. Each congestion event splits its reservation between raised soc_min and
/// lowered soc_max with a seeded random share.
ResidualEnvelope synth_envelope(const BatterySpec& battery, const EnvelopeStats& targets,
                                const HourlySeries& congestion_driver, std::uint64_t seed);

/// Exogenous annual value of the congestion service, not derived from grid physics.
struct CongestionCredit {
    double low = 20000.0;   // $/yr
    double high = 30000.0;  // $/yr
};

/// CSV columns timestamp,soc_min_kwh,soc_max_kwh,rate_kw.
ResidualEnvelope read_envelope_csv(const std::filesystem::path& path);
void write_envelope_csv(const std::filesystem::path& path, const ResidualEnvelope& envelope);

}  // namespace cloudstore::multiservice
