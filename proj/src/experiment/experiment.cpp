#include "cloudstore/experiment.hpp"

#include "cloudstore/core/errors.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <map>

namespace cloudstore::experiment {

namespace {

constexpr const char* kVersion = "0.1.0";

template <class F>
auto stage(const char* name, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error(ErrorKind::Config, std::string("stage ") + name + ": " + e.what());
    }
}

}  // namespace

std::string sha256_hex(std::string_view bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Domain, "sha256 failed");
    }
    std::string out;
    char hex[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(hex, sizeof hex, "%02x", md[i]);
        out += hex;
    }
    return out;
}

CsoReport run_cso(const CsoRequest& req)
{
    if (!costmodel::is_supported_ratio(req.ratio)) {
        throw ConfigError("ratio: supported values are 2 and 4, got " + io::format_number(req.ratio));
    }
    const auto& cmd = req.aggregate_command;
    std::optional<aggregate::SweepResult> sweep;
    if (req.sweep) {
        aggregate::SweepInputs in{cmd, req.revenue, req.virtual_capacity, req.ratio, req.buy_price, req.sell_price,
                                  req.cost};
        sweep = aggregate::sweep_sizes(in, aggregate::default_sweep_grid(req.virtual_capacity, req.sweep_points));
    }

    BatterySpec battery;
    if (req.mode == Mode::NoExternal) {
        battery = req.capacity_kwh ? aggregate::sweep_battery(cmd, *req.capacity_kwh, req.ratio)
                                   : aggregate::min_tracking_size(cmd, req.ratio);
    } else if (req.capacity_kwh) {
        battery = aggregate::sweep_battery(cmd, *req.capacity_kwh, req.ratio);
    } else if (sweep) {
        battery = sweep->best_point().battery;
    } else {
        throw ConfigError("capacity_kwh: required when the sweep is disabled in " + std::string(to_string(req.mode)) +
                          " mode");
    }

    aggregate::CsoScenario scenario{cmd, battery, req.ratio, req.buy_price, req.sell_price,
                                    req.mode != Mode::NoExternal};
    CsoReport report{aggregate::cso_profit(scenario, req.revenue, req.cost), battery, std::move(sweep), 0.0, 0.0};
    report.gain = req.virtual_capacity > 0.0 ? metrics::multiplexing_gain(req.virtual_capacity, battery.capacity)
                                             : 0.0;
    report.p_block = metrics::blocking_probability(report.outcome.dispatch.mismatch);
    return report;
}

io::json outcome_json(const CsoRequest& req, const CsoReport& r)
{
    const auto& o = r.outcome;
    io::json j = {{"mode", to_string(req.mode)},
                  {"ratio", req.ratio},
                  {"start", format_hour(req.aggregate_command.start())},
                  {"hours", req.aggregate_command.size()},
                  {"battery",
                   {{"capacity_kwh", r.battery.capacity},
                    {"rate_kw", r.battery.rate},
                    {"initial_soc_kwh", r.battery.initial_soc}}},
                  {"virtual_capacity_kwh", req.virtual_capacity},
                  {"revenue", o.revenue},
                  {"investment", o.investment},
                  {"blocking_cost", o.blocking_cost},
                  {"profit", o.profit},
                  {"multiplexing_gain", r.gain},
                  {"blocking_probability", r.p_block},
                  {"cost_model",
                   {{"power_cost", req.cost.power_cost},
                    {"energy_cost", req.cost.energy_cost},
                    {"annualization_factor", req.cost.annualization_factor}}}};
    if (r.sweep) j["sweep"] = {{"points", r.sweep->curve.size()}, {"best_index", r.sweep->best}};
    return j;
}

void write_curve_csv(const fs::path& path, const aggregate::SweepResult& sweep)
{
    std::string out = "capacity_kwh,investment,blocking_cost,profit,p_block,gain\n";
    for (const auto& p : sweep.curve) {
        bool first = true;
        for (double v : {p.battery.capacity, p.investment, p.blocking_cost, p.profit, p.p_block, p.gain}) {
            if (!first) out += ',';
            out += io::format_number(v);
            first = false;
        }
        out += '\n';
    }
    io::write_text(path, out);
}

namespace {

io::json histogram_json(const std::vector<metrics::HistogramBin>& bins)
{
    io::json out = io::json::array();
    for (const auto& b : bins) {
        out.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}, {"zero_bin", b.zero_bin}});
    }
    return out;
}

void append_bins(std::string& out, const std::string& slice, const std::vector<metrics::HistogramBin>& bins)
{
    for (const auto& b : bins) {
        out += slice + ',' + io::format_number(b.lower) + ',' + io::format_number(b.upper) + ',' +
               std::to_string(b.count) + ',' + (b.zero_bin ? "1" : "0") + '\n';
    }
}

io::json constraint_json(const metrics::ConstraintCounts& c)
{
    return {{"rate_limited", c.rate_limited},
            {"full", c.full},
            {"empty", c.empty},
            {"blocked", c.blocked},
            {"any_cause", c.any_cause}};
}

}  // namespace

io::json blocking_stats_json(const metrics::BlockingStats& s)
{
    io::json slices = io::json::array();
    for (const auto& sl : s.by_slice) {
        slices.push_back({{"name", sl.name},
                          {"hours", sl.hours},
                          {"probability", sl.probability},
                          {"mean", sl.mean},
                          {"std", sl.std},
                          {"histogram", histogram_json(sl.histogram)}});
    }
    return {{"probability", s.probability},
            {"mean", s.mean},
            {"std", s.std},
            {"histogram", histogram_json(s.histogram)},
            {"slices", slices}};
}

std::string histogram_csv(const metrics::BlockingStats& s)
{
    std::string out = "slice,lower_kw,upper_kw,count,zero_bin\n";
    append_bins(out, "all", s.histogram);
    for (const auto& sl : s.by_slice) append_bins(out, sl.name, sl.histogram);
    return out;
}

namespace {

struct Staging {
    fs::path dir;
    bool committed = false;

    ~Staging()
    {
        if (!committed) {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    }
};

std::string file_digest(const fs::path& path) { return sha256_hex(io::read_text(path)); }

void write_json(const fs::path& path, const io::json& j) { io::write_text(path, j.dump(2) + "\n"); }

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, const fs::path& config_path)
{
    std::vector<std::string> files;
    const fs::path out = config.output_dir;
    if (out.empty()) throw ConfigError("output_dir: missing");
    if (fs::exists(out) && !fs::is_empty(out) && !fs::exists(out / "manifest.json")) {
        throw ConfigError("output_dir '" + out.string() + "' exists and does not hold a previous report bundle");
    }
    fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
    fs::create_directories(parent);
    Staging staging{parent / ("." + out.filename().string() + ".staging")};
    fs::remove_all(staging.dir);
    fs::create_directories(staging.dir);
    auto emit = [&](const std::string& name) {
        files.push_back(name);
        return staging.dir / name;
    };

    io::json inputs = io::json::object();

    auto profiles = stage("cohort", [&] {
        std::vector<household::HouseholdProfile> ps;
        if (config.synth_cohort) {
            ps = data::synth_cohort(config.cohort).profiles;
        } else {
            auto meter = load_profiles_dir(config.profiles_dir);
            inputs["profiles_load"] = file_digest(config.profiles_dir / "load.csv");
            if (fs::exists(config.profiles_dir / "pv.csv")) {
                inputs["profiles_pv"] = file_digest(config.profiles_dir / "pv.csv");
            }
            if (!meter.skipped.empty()) {
                std::string s = "id,reason\n";
                for (const auto& k : meter.skipped) s += k.id + ',' + k.reason + '\n';
                io::write_text(emit("skipped.csv"), s);
            }
            ps = std::move(meter.profiles);
        }
        if (config.cluster) ps = data::cluster_representatives(ps, config.clustering).profiles;
        if (ps.empty()) throw ValidationError("cohort is empty");
        for (const auto& p : ps) {
            p.validate();
            require_aligned(ps.front().load, p.load, "household " + p.id);
        }
        return ps;
    });
    const Hour start = profiles.front().load.start();
    const std::size_t hours = profiles.front().load.size();

    auto tariff = stage("tariff", [&] {
        inputs["tariff"] = file_digest(config.tariff_path);
        return io::load_tariff(config.tariff_path);
    });
    auto prices = stage("tariff", [&] { return expand_tariff(tariff, start, hours); });

    auto decisions = stage("household", [&] {
        if (!config.menu.path.empty()) inputs["menu"] = file_digest(config.menu.path);
        auto menu = load_menu(config.menu, config.cost);
        return household::cohort_decisions(profiles, tariff, menu);
    });
    profiles.clear();
    profiles.shrink_to_fit();

    double revenue = 0.0;
    double virtual_capacity = 0.0;
    auto command = stage("aggregate", [&] {
        auto rows = decision_rows(decisions);
        write_decisions_csv(emit("decisions.csv"), rows);
        std::vector<DispatchResult> dispatches;
        dispatches.reserve(decisions.size());
        for (auto& d : decisions) {
            revenue += d.chosen.fee;
            virtual_capacity += d.chosen.capacity;
            dispatches.push_back(std::move(d.dispatch));
        }
        decisions.clear();
        auto agg = aggregate::aggregate_schedules(dispatches);
        io::write_series_csv(emit("aggregate.csv"), agg);
        return agg;
    });

    CsoRequest request{command,     revenue,      virtual_capacity,    prices.purchase,     prices.injection,
                       config.mode, config.ratio, config.sweep,        config.sweep_points, config.capacity_kwh,
                       config.cost};

    auto report = stage("cso", [&] { return run_cso(request); });
    io::json outcome = outcome_json(request, report);
    write_dispatch_csv(emit("dispatch.csv"),
                       {request.aggregate_command, report.outcome.dispatch, request.buy_price, request.sell_price});
    if (report.sweep) write_curve_csv(emit("curve.csv"), *report.sweep);

    auto stats = stage("metrics", [&] { return metrics::blocking_distribution(report.outcome.dispatch.mismatch); });
    io::json metrics_j = {{"multiplexing_gain", report.gain},
                          {"virtual_capacity_kwh", request.virtual_capacity},
                          {"physical_capacity_kwh", report.battery.capacity},
                          {"blocking", blocking_stats_json(stats)},
                          {"constraints", constraint_json(stage("metrics", [&] {
                               return metrics::constraint_decomposition(request.aggregate_command, report.battery);
                           }))}};
    std::string hist = histogram_csv(stats);

    if (config.mode == Mode::Multiservice) {
        stage("multiservice", [&] {
            if (!(report.battery.capacity > 0.0)) {
                throw InfeasibleError("no physical battery to share: the selected capacity is 0 kWh");
            }
            multiservice::ResidualEnvelope envelope =
                config.envelope.path.empty()
                    ? multiservice::synth_envelope(report.battery, config.envelope.targets,
                                                   multiservice::synth_wind_driver(start, hours, config.seed),
                                                   config.seed)
                    : multiservice::read_envelope_csv(config.envelope.path);
            if (!config.envelope.path.empty()) inputs["envelope"] = file_digest(config.envelope.path);
            envelope.validate(report.battery);
            require_aligned(request.aggregate_command, envelope.soc_min, "envelope");
            multiservice::write_envelope_csv(emit("envelope.csv"), envelope);

            auto d = multiservice::project_follow_envelope(request.aggregate_command, report.battery, envelope);
            write_dispatch_csv(emit("dispatch_envelope.csv"),
                               {request.aggregate_command, d, request.buy_price, request.sell_price});
            double blocking = aggregate::annualize_horizon(
                aggregate::blocking_cost(d.mismatch, request.buy_price, request.sell_price), hours);
            double profit = report.outcome.revenue - report.outcome.investment - blocking;
            auto est = multiservice::envelope_stats(envelope, report.battery);
            auto env_stats = metrics::blocking_distribution(d.mismatch);
            outcome["multiservice"] = {
                {"envelope",
                 {{"full_availability", est.full_availability},
                  {"zero_availability", est.zero_availability},
                  {"mean_residual", est.mean_residual}}},
                {"blocking_cost", blocking},
                {"profit", profit},
                {"blocking_probability", env_stats.probability},
                {"congestion_credit", {{"low", config.envelope.credit.low}, {"high", config.envelope.credit.high}}},
                {"profit_with_credit",
                 {{"low", profit + config.envelope.credit.low}, {"high", profit + config.envelope.credit.high}}}};
            metrics_j["envelope_blocking"] = blocking_stats_json(env_stats);
            return 0;
        });
    }

    write_json(emit("outcome.json"), outcome);
    write_json(emit("metrics.json"), metrics_j);
    io::write_text(emit("blocking_histogram.csv"), hist);

    ExperimentConfig hashed = config;
    hashed.output_dir.clear();
    io::json outputs = io::json::object();
    for (const auto& f : files) outputs[f] = file_digest(staging.dir / f);
    io::json manifest = {{"tool", "cloudstore"},
                         {"version", kVersion},
                         {"compiler", __VERSION__},
                         {"seed", config.seed},
                         {"mode", to_string(config.mode)},
                         {"config_sha256", sha256_hex(config_to_json(hashed).dump())},
                         {"inputs", inputs},
                         {"outputs", outputs}};
    if (!config_path.empty()) manifest["config_file_sha256"] = file_digest(config_path);
    write_json(emit("manifest.json"), manifest);

    if (fs::exists(out)) fs::remove_all(out);
    fs::rename(staging.dir, out);
    staging.committed = true;
    return RunSummary{out, std::move(files), std::move(report)};
}

}  // namespace cloudstore::experiment
