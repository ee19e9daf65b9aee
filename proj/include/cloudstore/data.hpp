#pragma once

#include "cloudstore/core/calendar.hpp"
#include "cloudstore/core/io.hpp"
#include "cloudstore/core/series.hpp"
#include "cloudstore/household.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cloudstore::data {

using household::HouseholdProfile;

struct ZoneSpec {
    std::string name;
    double weight = 1.0;
    double latitude_deg = 37.5;
    double cooling = 0.3;         // summer load uplift amplitude
    double clearness = 0.7;       // mean daily clearness index
    double summer_fog = 0.0;      // extra morning attenuation Jun-Sep
};

struct LoadShapeLibrary {
    /// Archetype name -> 24 hourly weights (weekday), and archetype mixing weights.
    std::vector<std::string> names;
    std::vector<std::vector<double>> weekday_shapes;
    std::vector<double> weights;
    double weekend_flattening = 0.4;  // weekend = (1 - f) shape + f mean
    double shape_jitter = 0.15;       // lognormal sigma applied per hour per household
    double hourly_noise = 0.25;       // lognormal sigma of hour-to-hour noise
    double noise_persistence = 0.5;

    static LoadShapeLibrary standard();
};

struct CohortConfig {
    std::size_t n_households = 1000;
    std::vector<ZoneSpec> climate_zones;
    LoadShapeLibrary load_shapes = LoadShapeLibrary::standard();
    double annual_kwh_median = 6500.0;
    double annual_kwh_sigma = 0.45;  // lognormal
    bool zero_net_energy_pv = true;
    std::uint64_t seed = 42;
    Hour start = make_hour(2010, 8, 1);
    std::size_t hours = kHoursPerYear;

    static CohortConfig standard();
    /// ConfigError on invalid parameters.
    void validate() const;
};

CohortConfig cohort_config_from_json(const io::json& j);
io::json cohort_config_to_json(const CohortConfig& c);

struct Cohort {
    std::vector<HouseholdProfile> profiles;
    std::map<std::string, HourlySeries> irradiance;  // per zone, kW per kW installed
};

/// Deterministic-by-seed synthetic cohort: evening-peaked seasonal loads with weekend
/// flattening, and zone-dependent clear-sky irradiance with daily cloudiness. PV is sized
/// to zero net energy when the config asks for it. Households are generated in parallel,
/// each from its own seeded stream.
Cohort synth_cohort(const CohortConfig& config);

/// Normalized irradiance for one zone, deterministic per seed.
HourlySeries synth_irradiance(const ZoneSpec& zone, Hour start, std::size_t hours, std::uint64_t seed);

/// pv_t = k * irradiance_t with k chosen so total pv equals total load.
HourlySeries pv_from_irradiance(const HouseholdProfile& profile, const HourlySeries& irradiance);

struct SkippedHousehold {
    std::string id;
    std::string reason;
};

struct MeterData {
    std::vector<HouseholdProfile> profiles;  // pv zero; ordered by id
    std::vector<SkippedHousehold> skipped;
};

/// CSV with columns id,zone,timestamp,kwh. Malformed rows raise ParseError with the line
/// number, negative kwh raises ValidationError, households with missing or repeated hours
/// are skipped and reported.
MeterData load_meter_csv(const std::filesystem::path& path);

enum class MeterField { Load, Pv };
void write_meter_csv(const std::filesystem::path& path, const std::vector<HouseholdProfile>& profiles,
                     MeterField field = MeterField::Load);

/// Replaces each profile's pv with the matching household of a pv CSV (same schema).
void attach_pv_csv(std::vector<HouseholdProfile>& profiles, const std::filesystem::path& path);

struct KMeansOptions {
    std::size_t max_iterations = 100;
    double inertia_tolerance = 1e-6;  // relative
};

struct KMeansResult {
    std::vector<std::vector<double>> centers;
    std::vector<std::size_t> assignment;
    double inertia = 0.0;
    std::size_t iterations = 0;
};

/// Lloyd's algorithm with farthest-point seeding (first center drawn from the seed).
/// DomainError if it has not converged after max_iterations.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// 24-dim mean weekday load shape normalized to unit sum.
std::vector<double> weekday_shape(const HouseholdProfile& profile);

struct CoherenceReport {
    double full_mean = 0.0;
    double full_std = 0.0;
    double sample_mean = 0.0;
    double sample_std = 0.0;

    double mean_error() const;
    double std_error() const;
};

struct RepresentativeSet {
    std::vector<HouseholdProfile> profiles;  // ordered by id
    std::vector<std::string> zones;          // zones kept
    CoherenceReport coherence;
};

struct ClusterOptions {
    std::size_t clusters_per_zone = 20;
    std::size_t target_n = 1000;
    std::size_t zones_to_keep = 3;  // most populated zones; 0 keeps all
    std::uint64_t seed = 42;
    double coherence_tolerance = 0.10;
    KMeansOptions kmeans;
};

/// Picks representatives zone by zone: k-means on weekday load shapes, then samples each
/// cluster in proportion to its size. ValidationError if the sample's hourly-load mean or
/// std is off the full set by more than the coherence tolerance.
RepresentativeSet cluster_representatives(const std::vector<HouseholdProfile>& profiles, const ClusterOptions& options);

/// Pooled mean/std of all hourly load values.
std::pair<double, double> hourly_load_stats(const std::vector<HouseholdProfile>& profiles);

}  // namespace cloudstore::data
