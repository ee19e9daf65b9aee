#include "cloudstore/core/errors.hpp"
#include "cloudstore/experiment.hpp"

#include <functional>
#include <cmath>
#include <map>
#include <set>

namespace cloudstore::experiment {

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::NoExternal: return "no-external";
    case Mode::External: return "external";
    case Mode::Multiservice: return "multiservice";
    }
    return "?";
}

Mode parse_mode(std::string_view text)
{
    if (text == "no-external") return Mode::NoExternal;
    if (text == "external") return Mode::External;
    if (text == "multiservice") return Mode::Multiservice;
    throw ConfigError("mode: expected no-external, external or multiservice, got '" + std::string(text) + "'");
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p)
{
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

template <class F>
auto field(const char* name, F&& f)
{
    try {
        return f();
    } catch (const io::json::exception& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        if (msg.rfind(name, 0) == 0) throw;
        throw ConfigError(std::string(name) + ": " + msg);
    }
}

void require_existing(const char* name, const fs::path& path)
{
    if (path.empty()) throw ConfigError(std::string(name) + ": missing");
    if (!fs::exists(path)) throw ConfigError(std::string(name) + ": file not found: " + path.string());
}

}  // namespace

ExperimentConfig config_from_json(const io::json& j, const fs::path& base_dir)
{
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig c;
    c.seed = field("seed", [&] { return j.value("seed", c.seed); });

    field("cohort", [&] {
        io::json cj = j.value("cohort", io::json::object());
        std::string source = cj.value("source", "synth");
        if (source == "synth") {
            c.synth_cohort = true;
            io::json sj = cj.value("synth", io::json::object());
            c.cohort = data::cohort_config_from_json(sj);
            if (!sj.contains("seed")) c.cohort.seed = c.seed;
        } else if (source == "csv") {
            c.synth_cohort = false;
            c.profiles_dir = resolve(base_dir, cj.at("profiles_dir").get<std::string>());
        } else {
            throw ConfigError("cohort: source must be synth or csv, got '" + source + "'");
        }
        if (cj.contains("cluster")) {
            const auto& k = cj.at("cluster");
            c.cluster = k.value("enabled", true);
            c.clustering.clusters_per_zone = k.value("clusters_per_zone", c.clustering.clusters_per_zone);
            c.clustering.target_n = k.value("target_n", c.clustering.target_n);
            c.clustering.zones_to_keep = k.value("zones_to_keep", c.clustering.zones_to_keep);
            c.clustering.coherence_tolerance = k.value("coherence_tolerance", c.clustering.coherence_tolerance);
        }
        c.clustering.seed = c.seed;
        return 0;
    });

    field("tariff", [&] {
        if (!j.contains("tariff")) throw ConfigError("tariff: missing");
        c.tariff_path = resolve(base_dir, j.at("tariff").get<std::string>());
        return 0;
    });

    field("menu", [&] {
        if (!j.contains("menu")) return 0;
        const auto& m = j.at("menu");
        if (m.is_string()) {
            c.menu.path = resolve(base_dir, m.get<std::string>());
        } else {
            c.menu.sizes_kwh = m.value("sizes_kwh", c.menu.sizes_kwh);
            c.menu.ratios_h = m.value("ratios_h", c.menu.ratios_h);
        }
        return 0;
    });

    field("cost_model", [&] {
        io::json cm = j.value("cost_model", io::json::object());
        c.cost.power_cost = cm.value("power_cost", c.cost.power_cost);
        c.cost.energy_cost = cm.value("energy_cost", c.cost.energy_cost);
        c.cost.annualization_factor = cm.value("annualization_factor", c.cost.annualization_factor);
        try {
            c.cost.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        return 0;
    });

    field("mode", [&] {
        c.mode = parse_mode(j.value("mode", std::string(to_string(c.mode))));
        return 0;
    });
    field("ratio", [&] {
        c.ratio = j.value("ratio", c.ratio);
        if (!costmodel::is_supported_ratio(c.ratio)) {
            throw ConfigError("ratio: supported values are 2 and 4, got " + io::format_number(c.ratio));
        }
        return 0;
    });
    field("sweep", [&] {
        io::json s = j.value("sweep", io::json::object());
        c.sweep = s.value("enabled", c.sweep);
        c.sweep_points = s.value("points", c.sweep_points);
        if (c.sweep_points < 2) throw ConfigError("sweep: points must be >= 2");
        return 0;
    });
    field("capacity_kwh", [&] {
        if (j.contains("capacity_kwh") && !j.at("capacity_kwh").is_null()) {
            double cap = j.at("capacity_kwh").get<double>();
            if (!(cap >= 0.0) || !std::isfinite(cap)) throw ConfigError("capacity_kwh: must be >= 0");
            c.capacity_kwh = cap;
        }
        return 0;
    });
    field("envelope", [&] {
        if (!j.contains("envelope")) return 0;
        const auto& e = j.at("envelope");
        std::string source = e.value("source", "synth");
        if (source == "csv") {
            c.envelope.path = resolve(base_dir, e.at("path").get<std::string>());
        } else if (source != "synth") {
            throw ConfigError("envelope: source must be synth or csv, got '" + source + "'");
        }
        c.envelope.targets.full_availability = e.value("full", c.envelope.targets.full_availability);
        c.envelope.targets.zero_availability = e.value("zero", c.envelope.targets.zero_availability);
        const auto& t = c.envelope.targets;
        if (!(t.full_availability >= 0.0 && t.zero_availability >= 0.0 &&
              t.full_availability + t.zero_availability <= 1.0)) {
            throw ConfigError("envelope: need full, zero >= 0 with full + zero <= 1");
        }
        if (e.contains("congestion_credit")) {
            c.envelope.credit.low = e.at("congestion_credit").at("low").get<double>();
            c.envelope.credit.high = e.at("congestion_credit").at("high").get<double>();
        }
        return 0;
    });
    field("output_dir", [&] {
        c.output_dir = resolve(base_dir, j.value("output_dir", c.output_dir.string()));
        return 0;
    });
    return c;
}

ExperimentConfig load_config(const fs::path& path)
{
    io::json j;
    try {
        j = io::load_json(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return config_from_json(j, path.parent_path());
}

io::json config_to_json(const ExperimentConfig& c)
{
    io::json cohort;
    if (c.synth_cohort) {
        cohort = {{"source", "synth"}, {"synth", data::cohort_config_to_json(c.cohort)}};
    } else {
        cohort = {{"source", "csv"}, {"profiles_dir", c.profiles_dir.string()}};
    }
    if (c.cluster) {
        cohort["cluster"] = {{"enabled", true},
                             {"clusters_per_zone", c.clustering.clusters_per_zone},
                             {"target_n", c.clustering.target_n},
                             {"zones_to_keep", c.clustering.zones_to_keep},
                             {"coherence_tolerance", c.clustering.coherence_tolerance}};
    }
    io::json menu = c.menu.path.empty()
                        ? io::json{{"sizes_kwh", c.menu.sizes_kwh}, {"ratios_h", c.menu.ratios_h}}
                        : io::json(c.menu.path.string());
    io::json envelope = {{"source", c.envelope.path.empty() ? "synth" : "csv"},
                         {"full", c.envelope.targets.full_availability},
                         {"zero", c.envelope.targets.zero_availability},
                         {"congestion_credit", {{"low", c.envelope.credit.low}, {"high", c.envelope.credit.high}}}};
    if (!c.envelope.path.empty()) envelope["path"] = c.envelope.path.string();
    io::json j = {{"seed", c.seed},
                  {"cohort", cohort},
                  {"tariff", c.tariff_path.string()},
                  {"menu", menu},
                  {"cost_model",
                   {{"power_cost", c.cost.power_cost},
                    {"energy_cost", c.cost.energy_cost},
                    {"annualization_factor", c.cost.annualization_factor}}},
                  {"mode", to_string(c.mode)},
                  {"ratio", c.ratio},
                  {"sweep", {{"enabled", c.sweep}, {"points", c.sweep_points}}},
                  {"envelope", envelope},
                  {"output_dir", c.output_dir.string()}};
    if (c.capacity_kwh) j["capacity_kwh"] = *c.capacity_kwh;
    return j;
}

std::vector<std::string> validate_config(const fs::path& path)
{
    std::vector<std::string> errors;
    io::json j;
    try {
        j = io::load_json(path);
    } catch (const Error& e) {
        return {e.what()};
    }
    if (!j.is_object()) return {"config: expected a JSON object"};

    // Check each field in isolation so every problem is reported, not just the first.
    auto check = [&](const char* name, const std::function<void(const io::json&)>& fn) {
        if (!j.contains(name)) return;
        try {
            io::json sub = io::json::object();
            sub[name] = j.at(name);
            if (std::string(name) != "tariff") sub["tariff"] = "";
            fn(sub);
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    };
    auto base = path.parent_path();
    auto parse_only = [&](const io::json& sub) { config_from_json(sub, base); };

    static const std::set<std::string> known{"seed",         "cohort", "tariff",   "menu",       "cost_model",
                                             "mode",         "ratio",  "sweep",    "capacity_kwh", "envelope",
                                             "output_dir"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) errors.push_back("unknown field '" + key + "'");
    }
    for (const char* name : {"seed", "cohort", "menu", "cost_model", "mode", "ratio", "sweep", "capacity_kwh",
                             "envelope", "output_dir"}) {
        check(name, parse_only);
    }

    if (!j.contains("tariff")) {
        errors.push_back("tariff: missing");
    } else {
        try {
            auto p = resolve(base, j.at("tariff").get<std::string>());
            require_existing("tariff", p);
            io::load_tariff(p);
        } catch (const std::exception& e) {
            std::string msg = e.what();
            errors.push_back(msg.rfind("tariff", 0) == 0 ? msg : "tariff: " + msg);
        }
    }

    // File references and mode-specific requirements, once the fields themselves parse.
    try {
        io::json sub = j;
        sub["tariff"] = "";
        auto c = config_from_json(sub, base);
        if (!c.synth_cohort) {
            try {
                require_existing("cohort.profiles_dir", c.profiles_dir);
                require_existing("cohort.profiles_dir", c.profiles_dir / "load.csv");
            } catch (const Error& e) {
                errors.push_back(e.what());
            }
        }
        if (!c.menu.path.empty()) {
            try {
                require_existing("menu", c.menu.path);
                read_menu_json(c.menu.path);
            } catch (const Error& e) {
                std::string msg = e.what();
                errors.push_back(msg.rfind("menu", 0) == 0 ? msg : "menu: " + msg);
            }
        } else {
            try {
                load_menu(c.menu, c.cost);
            } catch (const Error& e) {
                errors.push_back(std::string("menu: ") + e.what());
            }
        }
        if (c.mode == Mode::Multiservice && !c.envelope.path.empty()) {
            try {
                require_existing("envelope.path", c.envelope.path);
            } catch (const Error& e) {
                errors.push_back(e.what());
            }
        }
        if (c.mode != Mode::NoExternal && !c.sweep && !c.capacity_kwh) {
            errors.push_back("capacity_kwh: required when the sweep is disabled in " + std::string(to_string(c.mode)) +
                             " mode");
        }
    } catch (const std::exception&) {
        // Already reported field by field above.
    }
    return errors;
}

Tariff load_tariff_or_default(const fs::path& path)
{
    return path.empty() ? Tariff::pge_etou_b() : io::load_tariff(path);
}

household::ContractMenu read_menu_json(const fs::path& path)
{
    auto j = io::load_json(path);
    try {
        costmodel::CostParameters cost;
        if (j.contains("cost_model")) {
            const auto& cm = j.at("cost_model");
            cost.power_cost = cm.value("power_cost", cost.power_cost);
            cost.energy_cost = cm.value("energy_cost", cost.energy_cost);
            cost.annualization_factor = cm.value("annualization_factor", cost.annualization_factor);
        }
        if (j.contains("entries")) {
            std::vector<household::ContractOffer> entries;
            for (const auto& e : j.at("entries")) {
                entries.push_back({e.at("fee").get<double>(), e.at("capacity_kwh").get<double>(),
                                   e.at("rate_kw").get<double>()});
            }
            return household::ContractMenu(std::move(entries));
        }
        return household::ContractMenu::standard(j.at("sizes_kwh").get<std::vector<double>>(),
                                                 j.at("ratios_h").get<std::vector<double>>(), cost);
    } catch (const io::json::exception& e) {
        throw ConfigError("menu '" + path.string() + "': " + e.what());
    }
}

household::ContractMenu load_menu(const MenuSource& source, const costmodel::CostParameters& cost)
{
    if (!source.path.empty()) return read_menu_json(source.path);
    return household::ContractMenu::standard(source.sizes_kwh, source.ratios_h, cost);
}

data::MeterData load_profiles_dir(const fs::path& dir)
{
    if (!fs::is_directory(dir)) throw ConfigError("profiles directory not found: " + dir.string());
    auto meter = data::load_meter_csv(dir / "load.csv");
    if (fs::exists(dir / "pv.csv")) data::attach_pv_csv(meter.profiles, dir / "pv.csv");
    return meter;
}

void write_profiles_dir(const fs::path& dir, const std::vector<household::HouseholdProfile>& profiles)
{
    fs::create_directories(dir);
    data::write_meter_csv(dir / "load.csv", profiles, data::MeterField::Load);
    data::write_meter_csv(dir / "pv.csv", profiles, data::MeterField::Pv);
}

std::vector<DecisionRow> decision_rows(const std::vector<household::HouseholdDecision>& decisions)
{
    std::vector<DecisionRow> rows;
    rows.reserve(decisions.size());
    for (const auto& d : decisions) {
        rows.push_back({d.id, d.chosen.capacity, d.chosen.rate, d.chosen.fee, d.bill, d.baseline_bill, d.savings()});
    }
    return rows;
}

void write_decisions_csv(const fs::path& path, const std::vector<DecisionRow>& rows)
{
    std::string out = "id,capacity_kwh,rate_kw,fee,bill,baseline_bill,savings\n";
    for (const auto& r : rows) {
        out += r.id;
        for (double v : {r.capacity_kwh, r.rate_kw, r.fee, r.bill, r.baseline_bill, r.savings}) {
            out += ',';
            out += io::format_number(v);
        }
        out += '\n';
    }
    io::write_text(path, out);
}

std::vector<DecisionRow> read_decisions_csv(const fs::path& path)
{
    io::CsvReader csv(path);
    std::size_t col[7];
    const char* names[7] = {"id", "capacity_kwh", "rate_kw", "fee", "bill", "baseline_bill", "savings"};
    for (int i = 0; i < 7; ++i) col[i] = csv.column(names[i]);
    std::vector<DecisionRow> rows;
    csv.for_each([&](const auto& f, std::size_t line) {
        DecisionRow r;
        r.id = std::string(f[col[0]]);
        double* slots[6] = {&r.capacity_kwh, &r.rate_kw, &r.fee, &r.bill, &r.baseline_bill, &r.savings};
        for (int i = 0; i < 6; ++i) *slots[i] = io::parse_double(f[col[i + 1]], csv.source(), line);
        if (r.capacity_kwh < 0.0 || r.rate_kw < 0.0 || r.fee < 0.0) {
            throw ValidationError(csv.source() + ":" + std::to_string(line) + ": negative capacity, rate or fee");
        }
        rows.push_back(std::move(r));
    });
    return rows;
}

void write_dispatch_csv(const fs::path& path, const DispatchTable& t)
{
    const auto& d = t.dispatch;
    require_aligned(t.command, d.schedule, "dispatch table");
    require_aligned(t.command, d.soc, "dispatch table");
    require_aligned(t.command, d.mismatch, "dispatch table");
    require_aligned(t.command, t.buy_price, "dispatch table");
    require_aligned(t.command, t.sell_price, "dispatch table");
    std::string out = "timestamp,aggregate_kw,schedule_kw,soc_kwh,mismatch_kw,buy_price,sell_price\n";
    for (std::size_t i = 0; i < t.command.size(); ++i) {
        out += format_hour(t.command.time_at(i));
        for (double v : {t.command[i], d.schedule[i], d.soc[i], d.mismatch[i], t.buy_price[i], t.sell_price[i]}) {
            out += ',';
            out += io::format_number(v);
        }
        out += '\n';
    }
    io::write_text(path, out);
}

DispatchTable read_dispatch_csv(const fs::path& path)
{
    io::CsvReader csv(path);
    auto ts = csv.column("timestamp");
    const char* names[6] = {"aggregate_kw", "schedule_kw", "soc_kwh", "mismatch_kw", "buy_price", "sell_price"};
    std::size_t col[6];
    for (int i = 0; i < 6; ++i) col[i] = csv.column(names[i]);
    std::vector<double> v[6];
    std::optional<Hour> start;
    csv.for_each([&](const auto& f, std::size_t line) {
        Hour at;
        try {
            at = parse_hour(f[ts]);
        } catch (const ParseError& e) {
            throw ParseError(csv.source(), line, e.what());
        }
        if (!start) start = at;
        if (at != *start + std::chrono::hours{static_cast<long>(v[0].size())}) {
            throw ParseError(csv.source(), line, "timestamps must be consecutive hours");
        }
        for (int i = 0; i < 6; ++i) v[i].push_back(io::parse_double(f[col[i]], csv.source(), line));
    });
    if (!start) throw ParseError(csv.source() + ": no rows");
    double initial = v[2][0] - v[1][0];
    return {HourlySeries(*start, std::move(v[0]), Unit::kW),
            DispatchResult{initial, HourlySeries(*start, std::move(v[1]), Unit::kW),
                           HourlySeries(*start, std::move(v[2]), Unit::kWh),
                           HourlySeries(*start, std::move(v[3]), Unit::kW)},
            HourlySeries(*start, std::move(v[4]), Unit::UsdPerKWh), HourlySeries(*start, std::move(v[5]), Unit::UsdPerKWh)};
}

}  // namespace cloudstore::experiment
