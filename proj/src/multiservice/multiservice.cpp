#include "cloudstore/multiservice.hpp"

#include "cloudstore/core/errors.hpp"
#include "cloudstore/core/io.hpp"
#include "cloudstore/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cloudstore::multiservice {

namespace {

constexpr double kEdgeTol = 1e-9;

struct EnvelopeBounds {
    const ResidualEnvelope& env;
    double rate;

    double soc_min(std::size_t t) const { return env.soc_min[t]; }
    double soc_max(std::size_t t) const { return env.soc_max[t]; }
    double rate_limit(std::size_t t) const { return env.rate_limit[t]; }
    double physical_rate() const { return rate; }
};

}  // namespace

ResidualEnvelope ResidualEnvelope::full(const BatterySpec& battery, Hour start, std::size_t hours)
{
    return {HourlySeries::zeros(start, hours, Unit::kWh), HourlySeries::constant(start, hours, battery.capacity, Unit::kWh),
            HourlySeries::constant(start, hours, battery.rate, Unit::kW)};
}

void ResidualEnvelope::validate(const BatterySpec& battery) const
{
    battery.validate();
    if (!soc_min.aligned_with(soc_max) || !soc_min.aligned_with(rate_limit)) {
        throw ConfigError("envelope series misaligned");
    }
    for (std::size_t t = 0; t < soc_min.size(); ++t) {
        auto at = " at " + format_hour(soc_min.time_at(t));
        if (soc_min[t] < 0.0 || soc_min[t] > soc_max[t] || soc_max[t] > battery.capacity + kEdgeTol) {
            throw ConfigError("envelope band outside [0, capacity] or inverted" + at);
        }
        if (rate_limit[t] < 0.0 || rate_limit[t] > battery.rate + kEdgeTol) {
            throw ConfigError("envelope rate limit outside [0, rate]" + at);
        }
        if (t > 0) {
            double ramp = battery.rate + kEdgeTol;
            if (std::abs(soc_min[t] - soc_min[t - 1]) > ramp || std::abs(soc_max[t] - soc_max[t - 1]) > ramp) {
                throw ConfigError("envelope band moves faster than the battery rate" + at);
            }
        }
    }
    double first_lo = soc_min[0];
    double first_hi = soc_max[0];
    if (battery.initial_soc < first_lo - battery.rate - kEdgeTol || battery.initial_soc > first_hi + battery.rate + kEdgeTol) {
        throw ConfigError("initial SoC too far outside the first envelope band");
    }
}

DispatchResult project_follow_envelope(const HourlySeries& command, const BatterySpec& battery,
                                       const ResidualEnvelope& envelope)
{
    envelope.validate(battery);
    require_aligned(command, envelope.soc_min, "project_follow_envelope");
    return projection::follow(command, battery.initial_soc, EnvelopeBounds{envelope, battery.rate});
}

EnvelopeStats envelope_stats(const ResidualEnvelope& envelope, const BatterySpec& battery)
{
    if (!(battery.capacity > 0.0)) throw DomainError("envelope_stats: capacity must be > 0");
    const std::size_t n = envelope.soc_min.size();
    std::size_t full = 0, zero = 0;
    double residual_sum = 0.0;
    double tol = 1e-9 * battery.capacity;
    for (std::size_t t = 0; t < n; ++t) {
        double residual = envelope.soc_max[t] - envelope.soc_min[t];
        full += residual >= battery.capacity - tol ? 1 : 0;
        zero += residual <= tol ? 1 : 0;
        residual_sum += std::clamp(residual / battery.capacity, 0.0, 1.0);
    }
    double dn = static_cast<double>(n);
    return {static_cast<double>(full) / dn, static_cast<double>(zero) / dn, residual_sum / dn};
}

HourlySeries synth_wind_driver(Hour start, std::size_t hours, std::uint64_t seed, double persistence, double log_sigma)
{
    if (hours == 0) throw DomainError("synth_wind_driver: hours must be >= 1");
    if (!(persistence >= 0.0 && persistence < 1.0) || !(log_sigma > 0.0)) {
        throw DomainError("synth_wind_driver: persistence in [0, 1) and sigma > 0 required");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double innovation = std::sqrt(1.0 - persistence * persistence);
    double x = normal(rng);
    std::vector<double> out(hours);
    for (std::size_t t = 0; t < hours; ++t) {
        if (t > 0) x = persistence * x + innovation * normal(rng);
        out[t] = std::exp(log_sigma * x);
    }
    return {start, std::move(out), Unit::kW};
}

namespace {

/// Value at quantile level q (0..1) of the sorted sample, nearest-rank.
double quantile(const std::vector<double>& sorted, double q)
{
    if (q <= 0.0) return -INFINITY;
    if (q >= 1.0) return INFINITY;
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

/// Reserved fraction per hour: 1 above `zero_threshold`, linear between the thresholds,
/// then widened so it changes by at most `max_step` per hour, starting from none reserved.
std::vector<double> reservation(std::span<const double> driver, double partial_threshold, double zero_threshold,
                                double max_step)
{
    const std::size_t n = driver.size();
    std::vector<double> u(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double d = driver[t];
        if (d > zero_threshold) {
            u[t] = 1.0;
        } else if (d > partial_threshold && zero_threshold > partial_threshold) {
            u[t] = std::min((d - partial_threshold) / (zero_threshold - partial_threshold), 1.0 - 1e-6);
        }
    }
    // Lipschitz envelope from above: u_t = max_s (u_s - max_step |t - s|), two sweeps.
    for (std::size_t t = 1; t < n; ++t) u[t] = std::max(u[t], u[t - 1] - max_step);
    for (std::size_t t = n - 1; t-- > 0;) u[t] = std::max(u[t], u[t + 1] - max_step);
    // Nothing is reserved before the horizon, so reservations ramp in from the first hour.
    for (std::size_t t = 0; t < n; ++t) u[t] = std::min(u[t], max_step * static_cast<double>(t + 1));
    for (auto& v : u) {
        if (v < 1e-12) v = 0.0;
    }
    return u;
}

double full_share(const std::vector<double>& u)
{
    std::size_t full = 0;
    for (double v : u) full += v == 0.0 ? 1 : 0;
    return static_cast<double>(full) / static_cast<double>(u.size());
}

}  // namespace

ResidualEnvelope synth_envelope(const BatterySpec& battery, const EnvelopeStats& targets,
                                const HourlySeries& congestion_driver, std::uint64_t seed)
{
    battery.validate();
    const double full = targets.full_availability;
    const double zero = targets.zero_availability;
    if (!(full >= 0.0 && full <= 1.0) || !(zero >= 0.0 && zero <= 1.0) || full + zero > 1.0) {
        throw DomainError("synth_envelope: need full, zero in [0, 1] with full + zero <= 1");
    }
    if (!(battery.capacity > 0.0)) throw DomainError("synth_envelope: capacity must be > 0");
    for (double d : congestion_driver.values()) {
        if (!std::isfinite(d)) throw DomainError("synth_envelope: driver must be finite");
    }

    const std::size_t n = congestion_driver.size();
    const Hour start = congestion_driver.start();
    if (full >= 1.0) {
        return ResidualEnvelope::full(battery, start, n);
    }

    std::vector<double> sorted(congestion_driver.values().begin(), congestion_driver.values().end());
    std::sort(sorted.begin(), sorted.end());
    const double zero_threshold = zero > 0.0 ? quantile(sorted, 1.0 - zero) : INFINITY;
    // Each edge carries at most the whole reservation, so a step of rate/capacity keeps both
    // edges within the physical ramp.
    const double max_step = battery.rate / battery.capacity;
    auto driver = congestion_driver.values();

    // Full share grows with the partial quantile level; bisect on it.
    double lo_q = 0.0;
    double hi_q = 1.0 - zero;
    std::vector<double> best_u = reservation(driver, quantile(sorted, hi_q), zero_threshold, max_step);
    double best_err = std::abs(full_share(best_u) - full);
    for (int iter = 0; iter < 60; ++iter) {
        double mid = 0.5 * (lo_q + hi_q);
        auto u = reservation(driver, quantile(sorted, mid), zero_threshold, max_step);
        double share = full_share(u);
        double err = std::abs(share - full);
        if (err < best_err) {
            best_err = err;
            best_u = u;
        }
        if (share < full) {
            lo_q = mid;
        } else {
            hi_q = mid;
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> share_dist(0.3, 0.7);
    std::vector<double> soc_min(n), soc_max(n), rate(n);
    double bottom_share = 0.5;
    for (std::size_t t = 0; t < n; ++t) {
        double u = best_u[t];
        if (u > 0.0 && (t == 0 || best_u[t - 1] == 0.0)) bottom_share = share_dist(rng);
        soc_min[t] = battery.capacity * u * bottom_share;
        soc_max[t] = battery.capacity - battery.capacity * u * (1.0 - bottom_share);
        if (u == 1.0) soc_max[t] = soc_min[t];
        rate[t] = battery.rate * (1.0 - u);
    }
    return {HourlySeries(start, std::move(soc_min), Unit::kWh), HourlySeries(start, std::move(soc_max), Unit::kWh),
            HourlySeries(start, std::move(rate), Unit::kW)};
}

ResidualEnvelope read_envelope_csv(const std::filesystem::path& path)
{
    io::CsvReader csv(path);
    auto ts = csv.column("timestamp");
    auto lo = csv.column("soc_min_kwh");
    auto hi = csv.column("soc_max_kwh");
    auto rl = csv.column("rate_kw");
    std::vector<double> a, b, c;
    Hour start{}, expected{};
    csv.for_each([&](const auto& f, std::size_t line) {
        Hour h;
        try {
            h = parse_hour(f[ts]);
        } catch (const ParseError& e) {
            throw ParseError(csv.source(), line, e.what());
        }
        if (a.empty()) {
            start = h;
        } else if (h != expected) {
            throw ParseError(csv.source(), line, "timestamps must be consecutive hours");
        }
        expected = h + std::chrono::hours{1};
        a.push_back(io::parse_double(f[lo], csv.source(), line));
        b.push_back(io::parse_double(f[hi], csv.source(), line));
        c.push_back(io::parse_double(f[rl], csv.source(), line));
    });
    if (a.empty()) throw ParseError(csv.source(), 1, "envelope has no rows");
    return {HourlySeries(start, std::move(a), Unit::kWh), HourlySeries(start, std::move(b), Unit::kWh),
            HourlySeries(start, std::move(c), Unit::kW)};
}

void write_envelope_csv(const std::filesystem::path& path, const ResidualEnvelope& env)
{
    std::string out = "timestamp,soc_min_kwh,soc_max_kwh,rate_kw\n";
    for (std::size_t t = 0; t < env.soc_min.size(); ++t) {
        out += format_hour(env.soc_min.time_at(t)) + "," + io::format_number(env.soc_min[t]) + "," +
               io::format_number(env.soc_max[t]) + "," + io::format_number(env.rate_limit[t]) + "\n";
    }
    io::write_text(path, out);
}

}  // namespace cloudstore::multiservice
