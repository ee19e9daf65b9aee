#include "cloudstore/data.hpp"

#include "cloudstore/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace cloudstore::data {

LoadShapeLibrary LoadShapeLibrary::standard()
{
    LoadShapeLibrary lib;
    lib.names = {"evening", "two-peak", "daytime-home", "night-owl"};
    lib.weekday_shapes = {
        {0.55, 0.50, 0.48, 0.47, 0.48, 0.55, 0.75, 0.90, 0.85, 0.70, 0.65, 0.65,
         0.65, 0.65, 0.70, 0.85, 1.10, 1.45, 1.70, 1.75, 1.60, 1.30, 0.95, 0.70},
        {0.50, 0.45, 0.43, 0.43, 0.45, 0.60, 1.00, 1.30, 1.20, 0.85, 0.70, 0.65,
         0.65, 0.65, 0.70, 0.85, 1.10, 1.35, 1.55, 1.55, 1.40, 1.15, 0.85, 0.60},
        {0.60, 0.55, 0.52, 0.50, 0.52, 0.60, 0.80, 1.00, 1.10, 1.15, 1.20, 1.25,
         1.25, 1.20, 1.20, 1.25, 1.30, 1.40, 1.45, 1.40, 1.25, 1.05, 0.85, 0.70},
        {1.00, 0.90, 0.75, 0.60, 0.50, 0.50, 0.55, 0.65, 0.70, 0.70, 0.70, 0.75,
         0.80, 0.80, 0.85, 0.95, 1.05, 1.20, 1.35, 1.45, 1.50, 1.45, 1.35, 1.20},
    };
    lib.weights = {0.4, 0.3, 0.2, 0.1};
    return lib;
}

CohortConfig CohortConfig::standard()
{
    CohortConfig c;
    c.climate_zones = {
        ZoneSpec{"CZ12", 0.40, 38.5, 0.55, 0.74, 0.0},
        ZoneSpec{"CZ03", 0.35, 37.8, 0.10, 0.68, 0.35},
        ZoneSpec{"CZ13", 0.25, 36.7, 0.85, 0.76, 0.0},
    };
    return c;
}

void CohortConfig::validate() const
{
    if (n_households == 0) throw ConfigError("cohort: n_households must be >= 1");
    if (hours == 0) throw ConfigError("cohort: hours must be >= 1");
    if (climate_zones.empty()) throw ConfigError("cohort: at least one climate zone required");
    double total = 0.0;
    for (const auto& z : climate_zones) {
        if (!(z.weight >= 0.0)) throw ConfigError("cohort: zone weights must be >= 0");
        if (!(z.clearness > 0.0 && z.clearness <= 1.0)) throw ConfigError("cohort: zone clearness must be in (0, 1]");
        if (!(z.summer_fog >= 0.0 && z.summer_fog < 1.0)) throw ConfigError("cohort: summer_fog must be in [0, 1)");
        total += z.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("cohort: zone weights must sum to 1");
    const auto& lib = load_shapes;
    if (lib.weekday_shapes.empty() || lib.weekday_shapes.size() != lib.weights.size() ||
        lib.names.size() != lib.weights.size()) {
        throw ConfigError("cohort: load shape library needs matching names, shapes and weights");
    }
    double wsum = 0.0;
    for (std::size_t i = 0; i < lib.weights.size(); ++i) {
        if (lib.weekday_shapes[i].size() != 24) throw ConfigError("cohort: load shapes need 24 hourly values");
        for (double v : lib.weekday_shapes[i]) {
            if (!(v > 0.0)) throw ConfigError("cohort: load shape values must be > 0");
        }
        if (!(lib.weights[i] >= 0.0)) throw ConfigError("cohort: load shape weights must be >= 0");
        wsum += lib.weights[i];
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ConfigError("cohort: load shape weights must sum to 1");
    if (!(annual_kwh_median > 0.0) || !(annual_kwh_sigma >= 0.0)) {
        throw ConfigError("cohort: annual kWh distribution needs median > 0 and sigma >= 0");
    }
    if (!(lib.weekend_flattening >= 0.0 && lib.weekend_flattening <= 1.0) || !(lib.shape_jitter >= 0.0) ||
        !(lib.hourly_noise >= 0.0) || !(lib.noise_persistence >= 0.0 && lib.noise_persistence < 1.0)) {
        throw ConfigError("cohort: invalid load shape noise parameters");
    }
}

CohortConfig cohort_config_from_json(const io::json& j)
{
    try {
        CohortConfig c = CohortConfig::standard();
        c.n_households = j.value("n_households", c.n_households);
        c.annual_kwh_median = j.value("annual_kwh_median", c.annual_kwh_median);
        c.annual_kwh_sigma = j.value("annual_kwh_sigma", c.annual_kwh_sigma);
        c.zero_net_energy_pv = j.value("zero_net_energy_pv", c.zero_net_energy_pv);
        c.seed = j.value("seed", c.seed);
        c.hours = j.value("hours", c.hours);
        if (j.contains("start")) c.start = parse_hour(j.at("start").get<std::string>());
        if (j.contains("climate_zones")) {
            c.climate_zones.clear();
            for (const auto& z : j.at("climate_zones")) {
                ZoneSpec zs;
                zs.name = z.at("name").get<std::string>();
                zs.weight = z.at("weight").get<double>();
                zs.latitude_deg = z.value("latitude_deg", zs.latitude_deg);
                zs.cooling = z.value("cooling", zs.cooling);
                zs.clearness = z.value("clearness", zs.clearness);
                zs.summer_fog = z.value("summer_fog", zs.summer_fog);
                c.climate_zones.push_back(zs);
            }
        }
        if (j.contains("load_shapes")) {
            const auto& ls = j.at("load_shapes");
            auto& lib = c.load_shapes;
            if (ls.contains("archetypes")) {
                lib.names.clear();
                lib.weekday_shapes.clear();
                lib.weights.clear();
                for (const auto& a : ls.at("archetypes")) {
                    lib.names.push_back(a.at("name").get<std::string>());
                    lib.weekday_shapes.push_back(a.at("weekday").get<std::vector<double>>());
                    lib.weights.push_back(a.at("weight").get<double>());
                }
            }
            lib.weekend_flattening = ls.value("weekend_flattening", lib.weekend_flattening);
            lib.shape_jitter = ls.value("shape_jitter", lib.shape_jitter);
            lib.hourly_noise = ls.value("hourly_noise", lib.hourly_noise);
            lib.noise_persistence = ls.value("noise_persistence", lib.noise_persistence);
        }
        c.validate();
        return c;
    } catch (const io::json::exception& e) {
        throw ConfigError(std::string("cohort config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("cohort config: ") + e.what());
    }
}

io::json cohort_config_to_json(const CohortConfig& c)
{
    io::json zones = io::json::array();
    for (const auto& z : c.climate_zones) {
        zones.push_back({{"name", z.name},
                         {"weight", z.weight},
                         {"latitude_deg", z.latitude_deg},
                         {"cooling", z.cooling},
                         {"clearness", z.clearness},
                         {"summer_fog", z.summer_fog}});
    }
    io::json archetypes = io::json::array();
    for (std::size_t i = 0; i < c.load_shapes.names.size(); ++i) {
        archetypes.push_back({{"name", c.load_shapes.names[i]},
                              {"weekday", c.load_shapes.weekday_shapes[i]},
                              {"weight", c.load_shapes.weights[i]}});
    }
    return {{"n_households", c.n_households},
            {"annual_kwh_median", c.annual_kwh_median},
            {"annual_kwh_sigma", c.annual_kwh_sigma},
            {"zero_net_energy_pv", c.zero_net_energy_pv},
            {"seed", c.seed},
            {"start", format_hour(c.start)},
            {"hours", c.hours},
            {"climate_zones", zones},
            {"load_shapes",
             {{"archetypes", archetypes},
              {"weekend_flattening", c.load_shapes.weekend_flattening},
              {"shape_jitter", c.load_shapes.shape_jitter},
              {"hourly_noise", c.load_shapes.hourly_noise},
              {"noise_persistence", c.load_shapes.noise_persistence}}}};
}

namespace {

constexpr double kPi = std::numbers::pi;

int day_of_year(Hour h)
{
    using namespace std::chrono;
    auto d = floor<days>(h);
    year_month_day ymd{d};
    sys_days jan1{ymd.year() / January / 1};
    return static_cast<int>((d - jan1).count()) + 1;
}

std::size_t pick_weighted(const std::vector<double>& weights, double u)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

HouseholdProfile synth_household(const CohortConfig& cfg, std::size_t index, const std::vector<std::size_t>& zone_of)
{
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto& lib = cfg.load_shapes;
    const auto& zone = cfg.climate_zones[zone_of[index]];

    double annual = cfg.annual_kwh_median * std::exp(cfg.annual_kwh_sigma * normal(rng));
    std::size_t archetype = pick_weighted(lib.weights, uniform(rng));
    int shift = static_cast<int>(std::floor(uniform(rng) * 3.0)) - 1;
    std::vector<double> weekday(24), weekend(24);
    for (int h = 0; h < 24; ++h) {
        weekday[static_cast<std::size_t>(h)] =
            lib.weekday_shapes[archetype][static_cast<std::size_t>((h - shift + 24) % 24)] *
            std::exp(lib.shape_jitter * normal(rng));
    }
    double mean = std::accumulate(weekday.begin(), weekday.end(), 0.0) / 24.0;
    for (std::size_t h = 0; h < 24; ++h) {
        weekend[h] = (1.0 - lib.weekend_flattening) * weekday[h] + lib.weekend_flattening * mean;
    }
    double cooling = zone.cooling * (0.6 + 0.8 * uniform(rng));

    std::vector<double> load(cfg.hours);
    double noise = 0.0;
    double innovation = std::sqrt(1.0 - lib.noise_persistence * lib.noise_persistence);
    for (std::size_t t = 0; t < cfg.hours; ++t) {
        Hour at = cfg.start + std::chrono::hours{static_cast<long>(t)};
        unsigned hod = hour_of_day(at);
        int doy = day_of_year(at);
        double summer = std::max(0.0, std::cos(2.0 * kPi * (doy - 205) / 365.0));
        double winter = std::max(0.0, std::cos(2.0 * kPi * (doy - 15) / 365.0));
        double afternoon = (hod >= 13 && hod <= 21) ? 1.0 : 0.3;
        double morning_evening = (hod >= 6 && hod <= 9) || (hod >= 17 && hod <= 22) ? 1.0 : 0.5;
        double seasonal = 1.0 + cooling * summer * afternoon + 0.15 * winter * morning_evening;
        noise = lib.noise_persistence * noise + innovation * normal(rng);
        double shape = is_weekend(at) ? weekend[hod] : weekday[hod];
        load[t] = shape * seasonal * std::exp(lib.hourly_noise * noise);
    }
    double total = std::accumulate(load.begin(), load.end(), 0.0);
    double scale = annual * static_cast<double>(cfg.hours) / static_cast<double>(kHoursPerYear) / total;
    for (auto& v : load) v *= scale;

    char id[32];
    std::snprintf(id, sizeof id, "H%05zu", index);
    return HouseholdProfile{id, HourlySeries(cfg.start, std::move(load), Unit::kWh),
                            HourlySeries::zeros(cfg.start, cfg.hours, Unit::kWh), zone.name};
}

}  // namespace

HourlySeries synth_irradiance(const ZoneSpec& zone, Hour start, std::size_t hours, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double lat = zone.latitude_deg * kPi / 180.0;
    std::vector<double> out(hours);
    double clearness = zone.clearness;
    int current_day = -1;
    for (std::size_t t = 0; t < hours; ++t) {
        Hour at = start + std::chrono::hours{static_cast<long>(t)};
        int doy = day_of_year(at);
        if (doy != current_day) {
            current_day = doy;
            double seasonal = 0.1 * std::cos(2.0 * kPi * (doy - 172) / 365.0);
            clearness = std::clamp(zone.clearness + seasonal + 0.15 * normal(rng), 0.1, 1.0);
        }
        double decl = 23.45 * kPi / 180.0 * std::sin(2.0 * kPi * (284 + doy) / 365.0);
        double hour_angle = 15.0 * kPi / 180.0 * (hour_of_day(at) + 0.5 - 12.0);
        double sin_elev = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
        double value = sin_elev > 0.0 ? std::pow(sin_elev, 1.2) * clearness : 0.0;
        unsigned month = static_cast<unsigned>(date_of(at).month());
        if (zone.summer_fog > 0.0 && month >= 6 && month <= 9 && hour_of_day(at) < 11) value *= 1.0 - zone.summer_fog;
        out[t] = value;
    }
    return {start, std::move(out), Unit::kW};
}

HourlySeries pv_from_irradiance(const HouseholdProfile& profile, const HourlySeries& irradiance)
{
    require_aligned(profile.load, irradiance, "pv_from_irradiance");
    double irr_total = 0.0;
    for (double v : irradiance.values()) {
        if (v < 0.0) throw DomainError("pv_from_irradiance: irradiance must be >= 0");
        irr_total += v;
    }
    if (!(irr_total > 0.0)) throw DomainError("pv_from_irradiance: irradiance sums to zero");
    return irradiance.scaled(profile.load.sum() / irr_total).with_unit(Unit::kWh);
}

Cohort synth_cohort(const CohortConfig& config)
{
    config.validate();
    Cohort cohort;
    std::vector<std::size_t> zone_of(config.n_households);
    {
        // Zones by deterministic largest-remainder apportionment, interleaved by index.
        std::vector<double> zw;
        for (const auto& z : config.climate_zones) zw.push_back(z.weight);
        std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (auto& z : zone_of) z = pick_weighted(zw, uniform(rng));
    }
    for (std::size_t z = 0; z < config.climate_zones.size(); ++z) {
        const auto& zone = config.climate_zones[z];
        cohort.irradiance.emplace(zone.name, synth_irradiance(zone, config.start, config.hours, config.seed + 1000 + z));
    }

    const long n = static_cast<long>(config.n_households);
    std::vector<std::optional<HouseholdProfile>> slots(config.n_households);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(i);
        auto p = synth_household(config, k, zone_of);
        if (config.zero_net_energy_pv) p.pv = pv_from_irradiance(p, cohort.irradiance.at(p.climate_zone));
        slots[k] = std::move(p);
    }
    cohort.profiles.reserve(slots.size());
    for (auto& s : slots) cohort.profiles.push_back(std::move(*s));
    return cohort;
}

namespace {

struct MeterRow {
    Hour at;
    double kwh;
};

std::map<std::string, std::pair<std::string, std::vector<MeterRow>>> read_meter_rows(const std::filesystem::path& path)
{
    io::CsvReader csv(path);
    auto id_col = csv.column("id");
    auto zone_col = csv.column("zone");
    auto ts_col = csv.column("timestamp");
    auto kwh_col = csv.column("kwh");
    std::map<std::string, std::pair<std::string, std::vector<MeterRow>>> rows;
    csv.for_each([&](const auto& f, std::size_t line) {
        if (f[id_col].empty()) throw ParseError(csv.source(), line, "empty household id");
        Hour at;
        try {
            at = parse_hour(f[ts_col]);
        } catch (const ParseError& e) {
            throw ParseError(csv.source(), line, e.what());
        }
        double kwh = io::parse_double(f[kwh_col], csv.source(), line);
        if (!std::isfinite(kwh)) throw ParseError(csv.source(), line, "non-finite kwh");
        if (kwh < 0.0) {
            throw ValidationError(csv.source() + ":" + std::to_string(line) + ": negative kwh for household " +
                                  std::string(f[id_col]));
        }
        auto& entry = rows[std::string(f[id_col])];
        if (entry.second.empty()) entry.first = std::string(f[zone_col]);
        entry.second.push_back({at, kwh});
    });
    return rows;
}

}  // namespace

MeterData load_meter_csv(const std::filesystem::path& path)
{
    MeterData out;
    for (auto& [id, entry] : read_meter_rows(path)) {
        auto& rows = entry.second;
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
        std::string problem;
        for (std::size_t i = 1; i < rows.size() && problem.empty(); ++i) {
            auto gap = rows[i].at - rows[i - 1].at;
            if (gap == std::chrono::hours{0}) problem = "repeated hour " + format_hour(rows[i].at);
            else if (gap != std::chrono::hours{1}) problem = "missing hours after " + format_hour(rows[i - 1].at);
        }
        if (!problem.empty()) {
            out.skipped.push_back({id, problem});
            continue;
        }
        std::vector<double> load(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) load[i] = rows[i].kwh;
        Hour start = rows.front().at;
        out.profiles.push_back(HouseholdProfile{id, HourlySeries(start, std::move(load), Unit::kWh),
                                                HourlySeries::zeros(start, rows.size(), Unit::kWh), entry.first});
    }
    return out;
}

void write_meter_csv(const std::filesystem::path& path, const std::vector<HouseholdProfile>& profiles, MeterField field)
{
    std::string out = "id,zone,timestamp,kwh\n";
    for (const auto& p : profiles) {
        const auto& s = field == MeterField::Load ? p.load : p.pv;
        for (std::size_t t = 0; t < s.size(); ++t) {
            out += p.id;
            out += ',';
            out += p.climate_zone;
            out += ',';
            out += format_hour(s.time_at(t));
            out += ',';
            out += io::format_number(s[t]);
            out += '\n';
        }
    }
    io::write_text(path, out);
}

void attach_pv_csv(std::vector<HouseholdProfile>& profiles, const std::filesystem::path& path)
{
    auto pv = load_meter_csv(path);
    if (!pv.skipped.empty()) {
        throw ValidationError("pv file '" + path.string() + "': household " + pv.skipped.front().id + " " +
                              pv.skipped.front().reason);
    }
    std::map<std::string, const HouseholdProfile*> by_id;
    for (const auto& p : pv.profiles) by_id[p.id] = &p;
    for (auto& p : profiles) {
        auto it = by_id.find(p.id);
        if (it == by_id.end()) throw ValidationError("pv file has no household " + p.id);
        require_aligned(p.load, it->second->load, "pv for household " + p.id);
        p.pv = it->second->load;
    }
}

std::vector<double> weekday_shape(const HouseholdProfile& profile)
{
    std::vector<double> sum(24, 0.0);
    for (std::size_t t = 0; t < profile.load.size(); ++t) {
        Hour at = profile.load.time_at(t);
        if (is_weekend(at)) continue;
        sum[hour_of_day(at)] += profile.load[t];
    }
    double total = std::accumulate(sum.begin(), sum.end(), 0.0);
    if (total > 0.0) {
        for (auto& v : sum) v /= total;
    }
    return sum;
}

std::pair<double, double> hourly_load_stats(const std::vector<HouseholdProfile>& profiles)
{
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& p : profiles) {
        for (double v : p.load.values()) {
            sum += v;
            sq += v * v;
            ++n;
        }
    }
    if (n == 0) return {0.0, 0.0};
    double mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sq / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var)};
}

double CoherenceReport::mean_error() const
{
    return full_mean == 0.0 ? std::abs(sample_mean) : std::abs(sample_mean - full_mean) / full_mean;
}

double CoherenceReport::std_error() const
{
    return full_std == 0.0 ? std::abs(sample_std) : std::abs(sample_std - full_std) / full_std;
}

namespace {

/// Largest-remainder apportionment of `total` over `sizes`.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t total)
{
    std::size_t pool = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    std::vector<std::size_t> quota(sizes.size(), 0);
    if (pool == 0) return quota;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        double exact = static_cast<double>(total) * static_cast<double>(sizes[i]) / static_cast<double>(pool);
        quota[i] = std::min(sizes[i], static_cast<std::size_t>(std::floor(exact)));
        assigned += quota[i];
        remainders.push_back({exact - std::floor(exact), i});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < total && r < remainders.size() * 2; ++r) {
        auto i = remainders[r % remainders.size()].second;
        if (quota[i] < sizes[i]) {
            quota[i]++;
            assigned++;
        }
    }
    return quota;
}

}  // namespace

RepresentativeSet cluster_representatives(const std::vector<HouseholdProfile>& profiles, const ClusterOptions& options)
{
    if (options.clusters_per_zone == 0) throw ConfigError("cluster_representatives: clusters_per_zone must be >= 1");
    if (options.target_n == 0 || options.target_n > profiles.size()) {
        throw ConfigError("cluster_representatives: target_n must be in [1, number of profiles]");
    }

    std::map<std::string, std::vector<std::size_t>> by_zone;
    for (std::size_t i = 0; i < profiles.size(); ++i) by_zone[profiles[i].climate_zone].push_back(i);
    std::vector<std::pair<std::string, std::vector<std::size_t>>> zones(by_zone.begin(), by_zone.end());
    std::stable_sort(zones.begin(), zones.end(),
                     [](const auto& a, const auto& b) { return a.second.size() > b.second.size(); });
    if (options.zones_to_keep > 0 && zones.size() > options.zones_to_keep) zones.resize(options.zones_to_keep);

    std::vector<std::size_t> zone_sizes;
    for (const auto& z : zones) zone_sizes.push_back(z.second.size());
    std::size_t pool = std::accumulate(zone_sizes.begin(), zone_sizes.end(), std::size_t{0});
    if (options.target_n > pool) throw ConfigError("cluster_representatives: target_n exceeds households in kept zones");
    auto zone_quota = apportion(zone_sizes, options.target_n);

    RepresentativeSet out;
    for (std::size_t z = 0; z < zones.size(); ++z) {
        const auto& members = zones[z].second;
        out.zones.push_back(zones[z].first);
        if (zone_quota[z] == members.size()) {
            for (auto i : members) out.profiles.push_back(profiles[i]);
            continue;
        }
        std::vector<std::vector<double>> features;
        features.reserve(members.size());
        for (auto i : members) features.push_back(weekday_shape(profiles[i]));
        std::size_t k = std::min(options.clusters_per_zone, members.size());
        auto km = kmeans(features, k, options.seed + z, options.kmeans);

        std::vector<std::vector<std::size_t>> clusters(k);
        for (std::size_t m = 0; m < members.size(); ++m) clusters[km.assignment[m]].push_back(members[m]);
        std::vector<std::size_t> cluster_sizes;
        for (const auto& c : clusters) cluster_sizes.push_back(c.size());
        auto quota = apportion(cluster_sizes, zone_quota[z]);

        std::mt19937_64 rng(options.seed * 7919 + z);
        for (std::size_t c = 0; c < k; ++c) {
            auto picked = clusters[c];
            std::shuffle(picked.begin(), picked.end(), rng);
            picked.resize(quota[c]);
            for (auto i : picked) out.profiles.push_back(profiles[i]);
        }
    }
    std::stable_sort(out.profiles.begin(), out.profiles.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    auto [full_mean, full_std] = hourly_load_stats(profiles);
    auto [sample_mean, sample_std] = hourly_load_stats(out.profiles);
    out.coherence = {full_mean, full_std, sample_mean, sample_std};
    if (out.coherence.mean_error() > options.coherence_tolerance ||
        out.coherence.std_error() > options.coherence_tolerance) {
        throw ValidationError("representative sample incoherent with the full set (mean error " +
                              std::to_string(out.coherence.mean_error()) + ", std error " +
                              std::to_string(out.coherence.std_error()) + ")");
    }
    return out;
}

}  // namespace cloudstore::data
